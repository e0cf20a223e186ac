//! The rank-one coefficient semifields B, Zv and Qv and the reduction
//! maps between them. Join is max, plus is addition, and -inf is the
//! absorbing bottom. Everything is exact; Qv doubles as the arbitrary
//! rational-value semifield for real-point evaluation.

use crate::error::{Error, Result};
use crate::geometry::{fmt_rat, rat_int, Rat};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SemifieldTag {
    Bool,
    Int,
    Rat,
}

impl fmt::Display for SemifieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemifieldTag::Bool => write!(f, "B"),
            SemifieldTag::Int => write!(f, "Zv"),
            SemifieldTag::Rat => write!(f, "Qv"),
        }
    }
}

/// An element of B, Zv or Qv. `value` is `None` for -inf; a `Some`
/// payload is 0 for Bool, an integer for Int, and any rational for Rat.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemifieldValue {
    tag: SemifieldTag,
    value: Option<Rat>,
}

impl SemifieldValue {
    pub fn neg_inf(tag: SemifieldTag) -> Self {
        SemifieldValue { tag, value: None }
    }

    pub fn bool_zero() -> Self {
        SemifieldValue {
            tag: SemifieldTag::Bool,
            value: Some(Rat::zero()),
        }
    }

    pub fn bool_neg_inf() -> Self {
        Self::neg_inf(SemifieldTag::Bool)
    }

    pub fn int(n: i128) -> Self {
        SemifieldValue {
            tag: SemifieldTag::Int,
            value: Some(rat_int(n)),
        }
    }

    pub fn rational(r: Rat) -> Self {
        SemifieldValue {
            tag: SemifieldTag::Rat,
            value: Some(r),
        }
    }

    /// A finite value of the given tag; rejects payloads that do not fit
    /// the tag (nonzero for Bool, non-integer for Int).
    pub fn finite(tag: SemifieldTag, r: Rat) -> Result<Self> {
        match tag {
            SemifieldTag::Bool if !r.is_zero() => {
                Err(Error::Invalid(format!("B has no finite value {}", fmt_rat(&r))))
            }
            SemifieldTag::Int if !r.is_integer() => Err(Error::Invalid(format!(
                "Zv has no value {}",
                fmt_rat(&r)
            ))),
            _ => Ok(SemifieldValue { tag, value: Some(r) }),
        }
    }

    pub fn tag(&self) -> SemifieldTag {
        self.tag
    }

    pub fn is_neg_inf(&self) -> bool {
        self.value.is_none()
    }

    pub fn payload(&self) -> Option<&Rat> {
        self.value.as_ref()
    }

    fn check_tags(&self, other: &Self) -> Result<()> {
        if self.tag != other.tag {
            Err(Error::TagMismatch(self.tag.to_string(), other.tag.to_string()))
        } else {
            Ok(())
        }
    }

    /// max(a, b) with -inf least; the idempotent addition of the semifield.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.check_tags(other)?;
        let value = match (&self.value, &other.value) {
            (None, v) | (v, None) => v.clone(),
            (Some(a), Some(b)) => Some(a.max(b).clone()),
        };
        Ok(SemifieldValue { tag: self.tag, value })
    }

    /// Group addition of payloads; -inf absorbs.
    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.check_tags(other)?;
        let value = match (&self.value, &other.value) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        Ok(SemifieldValue { tag: self.tag, value })
    }

    /// Additive inverse of a finite value; -inf has none.
    pub fn negate(&self) -> Result<Self> {
        match &self.value {
            Some(v) => Ok(SemifieldValue {
                tag: self.tag,
                value: Some(-v),
            }),
            None => Err(Error::Invalid("-inf has no additive inverse".into())),
        }
    }

    pub fn leq(&self, other: &Self) -> Result<bool> {
        self.check_tags(other)?;
        Ok(match (&self.value, &other.value) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(a), Some(b)) => a <= b,
        })
    }

    /// The reduction map on integral elements: 0 goes to 0, everything
    /// strictly negative (and -inf) collapses to -inf.
    pub fn reduce_to_bool(&self) -> Result<Self> {
        match &self.value {
            None => Ok(Self::bool_neg_inf()),
            Some(v) if v.is_zero() => Ok(Self::bool_zero()),
            Some(v) if *v < Rat::zero() => Ok(Self::bool_neg_inf()),
            Some(v) => Err(Error::NotIntegral(fmt_rat(v))),
        }
    }

    /// Parses the textual literals `-inf`, integers and `p/q` rationals.
    pub fn parse(tag: SemifieldTag, text: &str) -> Result<Self> {
        let t = text.trim();
        if t == "-inf" {
            return Ok(Self::neg_inf(tag));
        }
        let r = parse_rat(t)?;
        Self::finite(tag, r)
    }
}

pub fn parse_rat(text: &str) -> Result<Rat> {
    let bad = || Error::Invalid(format!("not a rational literal: {text}"));
    if let Some((p, q)) = text.split_once('/') {
        let p: i128 = p.trim().parse().map_err(|_| bad())?;
        let q: i128 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        Ok(Rat::new(p, q))
    } else {
        let p: i128 = text.trim().parse().map_err(|_| bad())?;
        Ok(rat_int(p))
    }
}

impl fmt::Display for SemifieldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            None => write!(f, "-inf"),
            Some(v) => write!(f, "{}", fmt_rat(v)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_value(rng: &mut ChaCha8Rng, tag: SemifieldTag) -> SemifieldValue {
        if rng.gen_ratio(1, 5) {
            return SemifieldValue::neg_inf(tag);
        }
        match tag {
            SemifieldTag::Bool => SemifieldValue::bool_zero(),
            SemifieldTag::Int => SemifieldValue::int(rng.gen_range(-20..=20)),
            SemifieldTag::Rat => {
                SemifieldValue::rational(rat(rng.gen_range(-40..=40), rng.gen_range(1..=7)))
            }
        }
    }

    #[test]
    fn join_is_total_order_max() {
        let a = SemifieldValue::int(3);
        let b = SemifieldValue::int(5);
        assert_eq!(a.join(&b).unwrap(), SemifieldValue::int(5));
        let ninf = SemifieldValue::neg_inf(SemifieldTag::Rat);
        let r = SemifieldValue::rational(rat(2, 3));
        assert_eq!(ninf.join(&r).unwrap(), r);
        let z = SemifieldValue::bool_zero();
        assert_eq!(z.join(&z).unwrap(), z);
    }

    #[test]
    fn plus_absorbs_neg_inf() {
        let ninf = SemifieldValue::neg_inf(SemifieldTag::Int);
        assert_eq!(ninf.plus(&SemifieldValue::int(7)).unwrap(), ninf);
        let half = SemifieldValue::rational(rat(1, 2));
        let mhalf = SemifieldValue::rational(rat(-1, 2));
        assert_eq!(half.plus(&mhalf).unwrap(), SemifieldValue::rational(rat(0, 1)));
        assert_eq!(
            SemifieldValue::int(2).plus(&SemifieldValue::int(3)).unwrap(),
            SemifieldValue::int(5)
        );
    }

    #[test]
    fn tag_mismatch_rejected() {
        let a = SemifieldValue::int(1);
        let b = SemifieldValue::bool_zero();
        assert!(matches!(a.join(&b), Err(Error::TagMismatch(_, _))));
    }

    #[test]
    fn reduction_map() {
        assert_eq!(
            SemifieldValue::int(-1).reduce_to_bool().unwrap(),
            SemifieldValue::bool_neg_inf()
        );
        assert_eq!(
            SemifieldValue::int(0).reduce_to_bool().unwrap(),
            SemifieldValue::bool_zero()
        );
        assert_eq!(
            SemifieldValue::rational(rat(-3, 7)).reduce_to_bool().unwrap(),
            SemifieldValue::bool_neg_inf()
        );
        assert!(SemifieldValue::int(1).reduce_to_bool().is_err());
    }

    #[test]
    fn semiring_axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..1000 {
            let tag = [SemifieldTag::Bool, SemifieldTag::Int, SemifieldTag::Rat]
                [rng.gen_range(0..3)];
            let a = random_value(&mut rng, tag);
            let b = random_value(&mut rng, tag);
            let c = random_value(&mut rng, tag);
            // associativity and commutativity of both operations
            assert_eq!(
                a.join(&b).unwrap().join(&c).unwrap(),
                a.join(&b.join(&c).unwrap()).unwrap()
            );
            assert_eq!(a.join(&b).unwrap(), b.join(&a).unwrap());
            assert_eq!(
                a.plus(&b).unwrap().plus(&c).unwrap(),
                a.plus(&b.plus(&c).unwrap()).unwrap()
            );
            assert_eq!(a.plus(&b).unwrap(), b.plus(&a).unwrap());
            // plus distributes over join
            assert_eq!(
                a.plus(&b.join(&c).unwrap()).unwrap(),
                a.plus(&b).unwrap().join(&a.plus(&c).unwrap()).unwrap()
            );
            // idempotency
            assert_eq!(a.join(&a).unwrap(), a);
        }
    }

    #[test]
    fn reduction_is_homomorphism_on_integral_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let mk = |rng: &mut ChaCha8Rng| {
                if rng.gen_ratio(1, 5) {
                    SemifieldValue::neg_inf(SemifieldTag::Rat)
                } else {
                    SemifieldValue::rational(rat(rng.gen_range(-30..=0), rng.gen_range(1..=5)))
                }
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            let red = |v: &SemifieldValue| v.reduce_to_bool().unwrap();
            assert_eq!(
                red(&a.join(&b).unwrap()),
                red(&a).join(&red(&b)).unwrap()
            );
            assert_eq!(
                red(&a.plus(&b).unwrap()),
                red(&a).plus(&red(&b)).unwrap()
            );
        }
    }

    #[test]
    fn literals_round_trip() {
        for s in ["-inf", "3", "-4", "2/3", "-7/2"] {
            let v = SemifieldValue::parse(SemifieldTag::Rat, s).unwrap();
            assert_eq!(v.to_string(), s);
        }
        assert!(SemifieldValue::parse(SemifieldTag::Int, "1/2").is_err());
        assert!(SemifieldValue::parse(SemifieldTag::Bool, "1").is_err());
    }
}
