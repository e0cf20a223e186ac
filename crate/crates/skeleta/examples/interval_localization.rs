//! Localization of interval semirings: cutting [0,2] down to [0,1] by a
//! cellular localization, the degenerate cut to a vertex, bounded
//! localization with an admissible bound, and the factorization into a
//! subdivision followed by a cellular piece.
//!
//! Run with: cargo run --example interval_localization

use skeleta::geometry::{rat_int, Rat};
use skeleta::localize::{
    bounded_localization, cellular_cut, factor_cellular_subdivision, verify_factorization,
    BoundSpec, LocalizationSpec,
};
use skeleta::polytope::RationalPolytope;
use skeleta::presentation::{SemiringHom, TropPoly};
use skeleta::spectrum::enumerate_points;
use num_traits::Zero;

fn main() -> skeleta::Result<()> {
    let ps02 = RationalPolytope::interval(Rat::zero(), rat_int(2))?.semiring()?;
    let x = ps02.coordinate(0)?;

    // impose X <= 1: the lower cell [0,1]
    let cut = cellular_cut(&ps02.pres, &x.shift(&rat_int(-1)))?;
    let ps01 = RationalPolytope::interval(Rat::zero(), rat_int(1))?.semiring()?;
    let fwd = vec![
        ps01.pres.gen_poly("U")?.shift(&rat_int(-1)),
        ps01.pres.gen_poly("V")?,
    ];
    let to_small = SemiringHom::new(cut.result.clone(), ps01.pres.clone(), fwd)?;
    let bwd = vec![
        cut.result.gen_poly("U")?.shift(&rat_int(1)),
        cut.result.gen_poly("V")?,
    ];
    let to_big = SemiringHom::new(ps01.pres.clone(), cut.result.clone(), bwd)?;
    let mut ok = true;
    for i in 0..2 {
        let g = TropPoly::generator(i, 2);
        ok &= ps01.pres.eq(&g, &to_small.apply(&to_big.apply(&g)?)?)?.is_equal();
        ok &= cut.result.eq(&g, &to_big.apply(&to_small.apply(&g)?)?)?.is_equal();
    }
    println!("Zv{{[0,2]}} cut at X <= 1  ~  Zv{{[0,1]}}: mutually inverse generator maps: {ok}");

    // the degenerate cut X <= 0 evaluates at the vertex
    let vertex = cellular_cut(&ps02.pres, &x)?;
    println!(
        "cut at X <= 0: integral spectrum has {} point(s)",
        enumerate_points(&vertex.result)?.len()
    );

    // bounded localization at S = -X with bound T = -1: invert the
    // distance to the left endpoint, bounded by radius 1
    let spec = LocalizationSpec {
        at: ps02.pres.gen_poly("V")?,
        bound: BoundSpec::Element(TropPoly::constant(2, rat_int(-1))),
    };
    let loc = bounded_localization(&ps02.pres, &spec)?;
    println!("\nbounded localization at -X with bound -1:");
    for r in loc.result.relations() {
        let op = if r.kind == skeleta::presentation::RelKind::Eq { "=" } else { "<=" };
        println!("  {} {op} {}", r.lhs.display(&loc.result), r.rhs.display(&loc.result));
    }

    // it factors as a subdivision followed by a cellular localization
    let fact = factor_cellular_subdivision(&ps02.pres, &spec)?;
    println!(
        "factorization: subdivide at {}, then cut {} to zero",
        fact.subdivision.result.gens().last().unwrap().name,
        fact.cellular_element.display(&fact.subdivision.result)
    );
    verify_factorization(&ps02.pres, &spec)?;
    println!("composite isomorphic to the direct localization: verified");
    Ok(())
}
