//! Tropicalizing polynomials over t-adic coefficients: the tropical
//! line, its corner locus, the sampling oracle cross-check, and the
//! relations of the tropicalized subvariety.
//!
//! Run with: cargo run --example tropical_curve

use skeleta::dsl::parse_tpoly;
use skeleta::geometry::{rat_int, Rat};
use skeleta::polytope::RationalPolytope;
use skeleta::tropicalize::{corner_locus, grid_oracle, oracle_agrees, trop_relations, tropicalize_poly};

fn main() -> skeleta::Result<()> {
    // the quadrant {x, y <= 1} and the line x + y + t = 0
    let quadrant = RationalPolytope::lower_orthant(2, rat_int(1))?;
    let ps = quadrant.semiring()?;
    let f = parse_tpoly("x + y + t", None)?;
    let trop = tropicalize_poly(&f, &ps)?;
    println!("trop(x + y + t) = {}", trop.display(&ps.pres));

    let curve = corner_locus(&trop, &ps)?;
    println!("corner locus: vertices {:?}", curve.vertices);
    for (origin, dir) in &curve.rays {
        println!("  ray from {origin:?} in direction {dir:?}");
    }

    // the grid oracle marks cells where the maximizing term changes
    let window = RationalPolytope::square(rat_int(-4), rat_int(1))?;
    let oracle = grid_oracle(&trop, &ps, &Rat::new(1, 8), &window)?;
    println!(
        "grid oracle at h=1/8: {} marked cells, agrees with the curve: {}",
        oracle.marked.len(),
        oracle_agrees(&curve, &oracle)
    );

    // dropping any single monomial of f leaves the tropicalization
    // unchanged on the subvariety it cuts out
    let trop_pres = trop_relations(&[f], &ps)?;
    println!("\nrelations of Trop(C):");
    for r in trop_pres.relations() {
        println!(
            "  {} = {}",
            r.lhs.display(&trop_pres),
            r.rhs.display(&trop_pres)
        );
    }

    // a squared linear form: note the surviving cross term t*x
    let g = parse_tpoly("x^2 + 2*t*x + t^2", None)?;
    let quad1 = RationalPolytope::lower_orthant(1, rat_int(2))?.semiring()?;
    let tg = tropicalize_poly(&g, &quad1)?;
    println!("\ntrop(x^2 + 2tx + t^2) = {}", tg.display(&quad1.pres));
    Ok(())
}
