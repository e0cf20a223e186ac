//! Affine monoids (lattice points of rational cones cut out by integer
//! inequalities) and their finitely generated ideals in antichain
//! normal form. Divisibility of lattice points is membership of the
//! difference, so every order/equality question reduces to evaluating
//! the inequalities. This is the concrete model behind all monomial
//! normal forms in the crate.

use crate::error::{Error, Result};
use crate::geometry::{
    dot_ii, integer_kernel, rat_int, reduce_mod_lattice, v_representation, HalfSpace, Int,
};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

pub const HILBERT_RANK_CAP: usize = 4;

pub type LatticePoint = Vec<Int>;

/// The lattice points {m in Z^rank : <g, m> >= 0 for all inequalities g}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineMonoid {
    pub rank: usize,
    pub inequalities: Vec<Vec<Int>>,
    /// true iff the only invertible element is 0
    pub pointed: bool,
    #[serde(skip)]
    lineality: Vec<Vec<Int>>,
}

impl AffineMonoid {
    pub fn new(rank: usize, inequalities: Vec<Vec<Int>>) -> Result<Self> {
        if inequalities.iter().any(|g| g.len() != rank) {
            return Err(Error::Invalid("inequality arity mismatch".into()));
        }
        let lineality = integer_kernel(&inequalities, rank);
        Ok(AffineMonoid {
            rank,
            inequalities,
            pointed: lineality.is_empty(),
            lineality,
        })
    }

    /// N^rank, the free commutative monoid.
    pub fn free(rank: usize) -> Self {
        let inequalities = (0..rank)
            .map(|i| {
                let mut g = vec![0; rank];
                g[i] = 1;
                g
            })
            .collect();
        AffineMonoid::new(rank, inequalities).expect("free monoid is well formed")
    }

    pub fn contains(&self, m: &[Int]) -> bool {
        m.len() == self.rank && self.inequalities.iter().all(|g| dot_ii(g, m) >= 0)
    }

    fn check_member(&self, m: &[Int]) -> Result<()> {
        if self.contains(m) {
            Ok(())
        } else {
            Err(Error::NotMember(format!("{m:?}")))
        }
    }

    /// Invertible directions: the integer kernel of the inequality matrix.
    pub fn lineality(&self) -> &[Vec<Int>] {
        &self.lineality
    }

    /// Canonical representative of m modulo the invertible directions.
    /// Stays inside the monoid since lineality shifts preserve every
    /// inequality value.
    pub fn canonical(&self, m: &[Int]) -> LatticePoint {
        reduce_mod_lattice(m, &self.lineality)
    }

    /// m divides n iff n - m is a member.
    pub fn divides(&self, m: &[Int], n: &[Int]) -> Result<bool> {
        self.check_member(m)?;
        self.check_member(n)?;
        let diff: Vec<Int> = n.iter().zip(m).map(|(a, b)| a - b).collect();
        Ok(self.contains(&diff))
    }

    /// The unique minimal generating set (irreducible elements) of a
    /// pointed monoid, by bounded enumeration inside the zonotope of the
    /// extreme rays with an irreducibility filter.
    pub fn hilbert_basis(&self) -> Result<Vec<LatticePoint>> {
        if !self.pointed {
            return Err(Error::NotPointed);
        }
        if self.rank > HILBERT_RANK_CAP {
            return Err(Error::RankTooLarge(self.rank, HILBERT_RANK_CAP));
        }
        if self.rank == 0 {
            return Ok(vec![]);
        }
        // extreme rays of the cone {Gx >= 0} as the recession directions of
        // {-Gx <= 0}
        let hs: Vec<HalfSpace> = self
            .inequalities
            .iter()
            .map(|g| {
                HalfSpace::new(
                    g.iter().map(|&x| rat_int(-x)).collect(),
                    num_traits::Zero::zero(),
                )
            })
            .collect();
        let vrep = v_representation(&hs, self.rank);
        if vrep.rays.is_empty() {
            // the cone is {0}
            return Ok(vec![]);
        }
        // every irreducible element lies in the zonotope spanned by the
        // primitive ray generators; a per-coordinate bound suffices
        let bound: Vec<Int> = (0..self.rank)
            .map(|j| vrep.rays.iter().map(|r| r[j].abs()).sum())
            .collect();
        // strictly positive grading on the pointed cone
        let grade: Vec<Int> = (0..self.rank)
            .map(|j| self.inequalities.iter().map(|g| g[j]).sum())
            .collect();
        let mut points: Vec<LatticePoint> = Vec::new();
        let mut cursor = vec![0 as Int; self.rank];
        let mut coords: Vec<Int> = bound.iter().map(|b| -b).collect();
        loop {
            cursor.clone_from_slice(&coords);
            if self.contains(&cursor) && cursor.iter().any(|&x| x != 0) {
                points.push(cursor.clone());
            }
            let mut j = 0;
            loop {
                if j == self.rank {
                    points.sort_by_key(|p| (dot_ii(&grade, p), p.clone()));
                    let mut basis: Vec<LatticePoint> = Vec::new();
                    'outer: for p in points {
                        for b in &basis {
                            let diff: Vec<Int> = p.iter().zip(b).map(|(a, c)| a - c).collect();
                            if diff.iter().any(|&x| x != 0) && self.contains(&diff) {
                                continue 'outer;
                            }
                        }
                        basis.push(p);
                    }
                    basis.sort();
                    return Ok(basis);
                }
                if coords[j] < bound[j] {
                    coords[j] += 1;
                    break;
                }
                coords[j] = -bound[j];
                j += 1;
            }
        }
    }
}

/// A finitely generated monoid ideal in normal form: generators form an
/// antichain under divisibility (canonicalized modulo invertibles), and
/// the empty generator set denotes the -inf (zero) ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidIdeal {
    monoid: Arc<AffineMonoid>,
    generators: Vec<LatticePoint>,
}

impl MonoidIdeal {
    /// Normal form of the ideal generated by `points`: canonicalize,
    /// dedupe, drop every point divisible by another.
    pub fn minimalize(monoid: Arc<AffineMonoid>, points: &[LatticePoint]) -> Result<Self> {
        for p in points {
            monoid.check_member(p)?;
        }
        let mut gens: Vec<LatticePoint> = points.iter().map(|p| monoid.canonical(p)).collect();
        gens.sort();
        gens.dedup();
        let mut keep: Vec<LatticePoint> = Vec::new();
        'outer: for (i, p) in gens.iter().enumerate() {
            for (j, q) in gens.iter().enumerate() {
                if i != j {
                    // q divides p: drop p. Mutual divisibility cannot occur
                    // after canonicalization (the points would coincide).
                    let diff: Vec<Int> = p.iter().zip(q).map(|(a, b)| a - b).collect();
                    if monoid.contains(&diff) {
                        continue 'outer;
                    }
                }
            }
            keep.push(p.clone());
        }
        Ok(MonoidIdeal {
            monoid,
            generators: keep,
        })
    }

    pub fn neg_inf(monoid: Arc<AffineMonoid>) -> Self {
        MonoidIdeal {
            monoid,
            generators: vec![],
        }
    }

    pub fn principal(monoid: Arc<AffineMonoid>, point: &[Int]) -> Result<Self> {
        Self::minimalize(monoid, &[point.to_vec()])
    }

    pub fn monoid(&self) -> &Arc<AffineMonoid> {
        &self.monoid
    }

    pub fn generators(&self) -> &[LatticePoint] {
        &self.generators
    }

    pub fn is_neg_inf(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_principal(&self) -> bool {
        self.generators.len() == 1
    }

    fn check_same_monoid(&self, other: &Self) -> Result<()> {
        if *self.monoid == *other.monoid {
            Ok(())
        } else {
            Err(Error::MonoidMismatch)
        }
    }

    /// Ideal sum: least upper bound under inclusion.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.check_same_monoid(other)?;
        let mut pts = self.generators.clone();
        pts.extend(other.generators.iter().cloned());
        Self::minimalize(self.monoid.clone(), &pts)
    }

    /// Ideal product: Minkowski sum of the generators; -inf absorbs.
    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.check_same_monoid(other)?;
        if self.is_neg_inf() || other.is_neg_inf() {
            return Ok(Self::neg_inf(self.monoid.clone()));
        }
        let mut pts = Vec::with_capacity(self.generators.len() * other.generators.len());
        for p in &self.generators {
            for q in &other.generators {
                pts.push(p.iter().zip(q).map(|(a, b)| a + b).collect());
            }
        }
        Self::minimalize(self.monoid.clone(), &pts)
    }

    /// Inclusion of ideals: every generator of self divisible by some
    /// generator of other.
    pub fn leq(&self, other: &Self) -> Result<bool> {
        self.check_same_monoid(other)?;
        Ok(self.generators.iter().all(|p| {
            other.generators.iter().any(|q| {
                let diff: Vec<Int> = p.iter().zip(q).map(|(a, b)| a - b).collect();
                self.monoid.contains(&diff)
            })
        }))
    }

    pub fn contains_point(&self, p: &[Int]) -> bool {
        self.generators.iter().any(|g| {
            let diff: Vec<Int> = p.iter().zip(g).map(|(a, b)| a - b).collect();
            self.monoid.contains(&diff)
        })
    }
}

/// Serialization shape for ideals: just the generator matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonoidIdealJson {
    pub generators: Vec<Vec<Int>>,
}

impl From<&MonoidIdeal> for MonoidIdealJson {
    fn from(ideal: &MonoidIdeal) -> Self {
        MonoidIdealJson {
            generators: ideal.generators.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn nn(rank: usize) -> Arc<AffineMonoid> {
        Arc::new(AffineMonoid::free(rank))
    }

    #[test]
    fn divisibility_in_nn2() {
        let m = nn(2);
        assert!(m.divides(&[1, 0], &[2, 1]).unwrap());
        assert!(!m.divides(&[2, 0], &[1, 1]).unwrap());
        assert!(matches!(m.divides(&[-1, 0], &[0, 0]), Err(Error::NotMember(_))));
    }

    #[test]
    fn divisibility_in_skew_cone() {
        // {(a, b) : a >= 0, a + b >= 0}
        let m = Arc::new(AffineMonoid::new(2, vec![vec![1, 0], vec![1, 1]]).unwrap());
        assert!(m.divides(&[1, -1], &[2, 0]).unwrap());
    }

    #[test]
    fn minimalize_examples() {
        let m = nn(2);
        let i = MonoidIdeal::minimalize(m.clone(), &[vec![1, 0], vec![2, 0]]).unwrap();
        assert_eq!(i.generators(), &[vec![1, 0]]);
        let j = MonoidIdeal::minimalize(m.clone(), &[vec![2, 0], vec![1, 1]]).unwrap();
        assert_eq!(j.generators().len(), 2);
        let z = MonoidIdeal::minimalize(m, &[]).unwrap();
        assert!(z.is_neg_inf());
    }

    #[test]
    fn join_and_plus() {
        let m = nn(2);
        let a = MonoidIdeal::principal(m.clone(), &[2, 0]).unwrap();
        let b = MonoidIdeal::principal(m.clone(), &[1, 1]).unwrap();
        let joined = a.join(&b).unwrap();
        assert_eq!(joined.generators().len(), 2);
        let x = MonoidIdeal::principal(m.clone(), &[1, 0]).unwrap();
        let y = MonoidIdeal::principal(m.clone(), &[0, 1]).unwrap();
        assert_eq!(x.plus(&y).unwrap().generators(), &[vec![1, 1]]);
        let axes = x.join(&y).unwrap();
        let sq = axes.plus(&axes).unwrap();
        assert_eq!(
            sq.generators(),
            &[vec![0, 2], vec![1, 1], vec![2, 0]]
        );
        let ninf = MonoidIdeal::neg_inf(m);
        assert_eq!(a.join(&ninf).unwrap(), a);
        assert!(a.plus(&ninf).unwrap().is_neg_inf());
        assert_eq!(a.join(&a).unwrap(), a);
    }

    #[test]
    fn leq_is_inclusion() {
        let m = nn(2);
        let a = MonoidIdeal::principal(m.clone(), &[2, 1]).unwrap();
        let b = MonoidIdeal::principal(m.clone(), &[1, 0]).unwrap();
        assert!(a.leq(&b).unwrap());
        assert!(!b.leq(&a).unwrap());
        let ninf = MonoidIdeal::neg_inf(m);
        assert!(ninf.leq(&a).unwrap());
    }

    #[test]
    fn hilbert_basis_of_nn2() {
        let m = AffineMonoid::free(2);
        assert_eq!(m.hilbert_basis().unwrap(), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn hilbert_basis_with_redundant_inequality() {
        let m = AffineMonoid::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(m.hilbert_basis().unwrap(), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn hilbert_basis_needs_interior_generator() {
        // {a >= 0, 2b >= -a, b <= 0}: the rays are (1,0) and (2,-1); the
        // point (1,-0)... (1,0) and (2,-1) do not generate (1,0)+(2,-1)=(3,-1)?
        // brute check against box enumeration below.
        let m = AffineMonoid::new(2, vec![vec![1, 0], vec![1, 2], vec![0, -1]]).unwrap();
        let basis = m.hilbert_basis().unwrap();
        assert!(basis.contains(&vec![1, 0]));
        assert!(basis.contains(&vec![2, -1]));
        // (1,0),(2,-1) alone cannot produce oddly-placed diagonal points
        // like (1, 0)+(2,-1) combinations missing (3,-1)? verify via the
        // regeneration oracle instead of guessing:
        regenerates_box(&m, 6);
    }

    #[test]
    fn non_pointed_monoid_rejected() {
        let m = AffineMonoid::new(2, vec![vec![1, 0]]).unwrap();
        assert!(!m.pointed);
        assert!(matches!(m.hilbert_basis(), Err(Error::NotPointed)));
    }

    #[test]
    fn rank_cap_enforced() {
        let m = AffineMonoid::free(5);
        assert!(matches!(m.hilbert_basis(), Err(Error::RankTooLarge(5, _))));
    }

    /// Oracle: every monoid element in the box of the given radius must be
    /// an N-combination of the Hilbert basis.
    fn regenerates_box(m: &AffineMonoid, radius: Int) {
        let basis = m.hilbert_basis().unwrap();
        let mut coords = vec![-radius; m.rank];
        loop {
            if m.contains(&coords) {
                assert!(
                    representable(m, &basis, &coords),
                    "{coords:?} not generated by {basis:?}"
                );
            }
            let mut j = 0;
            loop {
                if j == m.rank {
                    return;
                }
                if coords[j] < radius {
                    coords[j] += 1;
                    break;
                }
                coords[j] = -radius;
                j += 1;
            }
        }
    }

    fn representable(m: &AffineMonoid, basis: &[LatticePoint], target: &[Int]) -> bool {
        if target.iter().all(|&x| x == 0) {
            return true;
        }
        for b in basis {
            let rest: Vec<Int> = target.iter().zip(b).map(|(a, c)| a - c).collect();
            if m.contains(&rest) && representable(m, basis, &rest) {
                return true;
            }
        }
        false
    }

    #[test]
    fn hilbert_basis_regenerates_random_cones() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut tested = 0;
        while tested < 8 {
            let rank = rng.gen_range(2..=3usize);
            let n_ineq = rng.gen_range(rank..=rank + 2);
            let ineqs: Vec<Vec<Int>> = (0..n_ineq)
                .map(|_| (0..rank).map(|_| rng.gen_range(-2..=2)).collect())
                .collect();
            let Ok(m) = AffineMonoid::new(rank, ineqs) else { continue };
            if !m.pointed || m.hilbert_basis().map_or(true, |b| b.is_empty()) {
                continue;
            }
            regenerates_box(&m, 4);
            tested += 1;
        }
    }

    #[test]
    fn semiring_axioms_on_random_ideals() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let monoids = [
            nn(2),
            Arc::new(AffineMonoid::new(2, vec![vec![1, 0], vec![1, 1]]).unwrap()),
            nn(3),
        ];
        for _ in 0..1000 {
            let m = &monoids[rng.gen_range(0..monoids.len())];
            let random_ideal = |rng: &mut ChaCha8Rng| {
                let k = rng.gen_range(0..=3);
                let pts: Vec<LatticePoint> = (0..k)
                    .map(|_| loop {
                        let p: LatticePoint =
                            (0..m.rank).map(|_| rng.gen_range(-3..=5)).collect();
                        if m.contains(&p) {
                            break p;
                        }
                    })
                    .collect();
                MonoidIdeal::minimalize(m.clone(), &pts).unwrap()
            };
            let a = random_ideal(&mut rng);
            let b = random_ideal(&mut rng);
            let c = random_ideal(&mut rng);
            assert_eq!(a.join(&b).unwrap(), b.join(&a).unwrap());
            assert_eq!(
                a.join(&b).unwrap().join(&c).unwrap(),
                a.join(&b.join(&c).unwrap()).unwrap()
            );
            assert_eq!(a.join(&a).unwrap(), a);
            assert_eq!(a.plus(&b).unwrap(), b.plus(&a).unwrap());
            assert_eq!(
                a.plus(&b).unwrap().plus(&c).unwrap(),
                a.plus(&b.plus(&c).unwrap()).unwrap()
            );
            // distributivity
            assert_eq!(
                a.plus(&b.join(&c).unwrap()).unwrap(),
                a.plus(&b).unwrap().join(&a.plus(&c).unwrap()).unwrap()
            );
            // normal-form uniqueness
            if a.leq(&b).unwrap() && b.leq(&a).unwrap() {
                assert_eq!(a.generators(), b.generators());
            }
        }
    }
}
