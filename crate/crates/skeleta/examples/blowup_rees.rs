//! The Rees model of a monomial blow-up: the free localization of
//! B{X,Y} at the ideal I = (X v Y), with exact or saturated equality of
//! twisted ideals J - nI.
//!
//! Run with: cargo run --example blowup_rees

use skeleta::localize::{free_localize_monomial, ReesElement};
use skeleta::monoid_ideal::{AffineMonoid, MonoidIdeal};
use std::sync::Arc;

fn main() -> skeleta::Result<()> {
    let m = Arc::new(AffineMonoid::free(2));
    let i = MonoidIdeal::minimalize(m.clone(), &[vec![1, 0], vec![0, 1]])?;
    let model = free_localize_monomial(m.clone(), i.clone())?;
    let unit = model.unit()?;

    // I - I = 0 and -I + I = 0: the ideal becomes invertible
    let i_minus_i = ReesElement { ideal: i.clone(), twist: 1 };
    println!("(X v Y) - I = 0:  {:?}", model.eq_localized(&i_minus_i, &unit)?);
    let back = model.plus(&model.inverse()?, &model.hom(i.clone()))?;
    println!("-I + I = 0:       {:?}", model.eq_localized(&back, &unit)?);

    // the join formula: (X) - I v (Y) - I = (X v Y) - I = 0
    let xm = ReesElement { ideal: MonoidIdeal::principal(m.clone(), &[1, 0])?, twist: 1 };
    let ym = ReesElement { ideal: MonoidIdeal::principal(m.clone(), &[0, 1])?, twist: 1 };
    let joined = model.join(&xm, &ym)?;
    println!("(X)-I v (Y)-I = 0: {:?}", model.eq_localized(&joined, &unit)?);

    // distinct sections stay distinct: the localization does not merge
    println!("(X)-I vs (Y)-I:   {:?}", model.eq_localized(&xm, &ym)?);

    // (X v Y)^2 - 2I = 0: squares of the exceptional ideal
    let sq = ReesElement { ideal: i.plus(&i)?, twist: 2 };
    println!("I^2 - 2I = 0:     {:?}", model.eq_localized(&sq, &unit)?);

    // a principal localization is exact: (2X) - (X) = (X)
    let px = MonoidIdeal::principal(m.clone(), &[1, 0])?;
    let principal = free_localize_monomial(m.clone(), px)?;
    let a = ReesElement { ideal: MonoidIdeal::principal(m.clone(), &[2, 0])?, twist: 1 };
    let b = principal.hom(MonoidIdeal::principal(m, &[1, 0])?);
    println!("(2X) - (X) = (X): {:?}", principal.eq_localized(&a, &b)?);
    Ok(())
}
