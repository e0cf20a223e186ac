//! Affine monoids and monomial-ideal normal forms: divisibility,
//! antichain generators, the idempotent-semiring operations, and
//! Hilbert bases of pointed cones.
//!
//! Run with: cargo run --example monomial_ideals

use skeleta::monoid_ideal::{AffineMonoid, MonoidIdeal};
use std::sync::Arc;

fn main() -> skeleta::Result<()> {
    // N^2 and a skew cone {a >= 0, a + b >= 0}
    let nn = Arc::new(AffineMonoid::free(2));
    let skew = Arc::new(AffineMonoid::new(2, vec![vec![1, 0], vec![1, 1]])?);

    println!("(1,0) divides (2,1) in N^2: {}", nn.divides(&[1, 0], &[2, 1])?);
    println!(
        "(1,-1) divides (2,0) in the skew cone: {}",
        skew.divides(&[1, -1], &[2, 0])?
    );

    // normal forms drop dominated generators
    let i = MonoidIdeal::minimalize(nn.clone(), &[vec![1, 0], vec![2, 0]])?;
    println!("ideal((1,0),(2,0)) = ideal{:?}", i.generators());

    // join is ideal sum, plus is the Minkowski product
    let x = MonoidIdeal::principal(nn.clone(), &[1, 0])?;
    let y = MonoidIdeal::principal(nn.clone(), &[0, 1])?;
    let axes = x.join(&y)?;
    println!("(X) v (Y)        = ideal{:?}", axes.generators());
    println!("(X) + (Y)        = ideal{:?}", x.plus(&y)?.generators());
    println!("(X v Y)^2        = ideal{:?}", axes.plus(&axes)?.generators());
    println!("(X)+(Y) <= (XvY): {}", x.plus(&y)?.leq(&axes)?);

    // Hilbert bases: unique minimal generating sets of pointed monoids
    println!("\nHilbert basis of N^2: {:?}", nn.hilbert_basis()?);
    let cone = AffineMonoid::new(2, vec![vec![1, 0], vec![1, 2], vec![0, -1]])?;
    println!(
        "Hilbert basis of {{a >= 0, a+2b >= 0, b <= 0}}: {:?}",
        cone.hilbert_basis()?
    );
    Ok(())
}
