//! Chart atlases from fans: the fan of the projective line with finite
//! expansions gives two interval charts overlapping in a segment, with
//! restriction maps into the overlap semiring checked exactly.
//!
//! Run with: cargo run --example fan_charts

use skeleta::complexes::eval_global;
use skeleta::geometry::{rat_int, Rat};
use skeleta::polytope::{fan_complex, Fan, RationalPolytope};
use skeleta::presentation::TropPoly;
use num_traits::Zero;

fn main() -> skeleta::Result<()> {
    // two opposite rays in rank one
    let right = RationalPolytope::new(1, vec![(vec![-1], Rat::zero())])?;
    let left = RationalPolytope::new(1, vec![(vec![1], Rat::zero())])?;
    let fan = Fan::new(1, vec![right, left])?;

    // expansion radius 1 per cone: charts [-1, oo) and (-oo, 1]
    let complex = fan_complex(&fan, &[rat_int(1), rat_int(1)])?;
    println!("fan of the projective line, expansions 1:");
    for chart in &complex.charts {
        println!(
            "  chart {} with {} generators",
            chart.label,
            chart.pres.ngens()
        );
    }
    println!(
        "  {} gluing(s) along the shared segment [-1,1]",
        complex.gluings.len()
    );

    // a global section: the function max(x - 1, -1) restricted to both
    // charts (affine data transported through the overlap)
    let sections: Vec<TropPoly> = complex
        .charts
        .iter()
        .map(|c| match &c.geometry {
            skeleta::complexes::ChartGeometry::Polytope(ps) => {
                let x_minus_1 = ps.functional_poly(&[1], &rat_int(-1)).unwrap_or_else(|_| {
                    // x is unbounded above on the left chart: only the
                    // constant part survives there
                    TropPoly::neg_inf()
                });
                x_minus_1.join(&TropPoly::constant(c.pres.ngens(), rat_int(-1)))
            }
            _ => unreachable!(),
        })
        .collect();
    // on the left chart x - 1 is unbounded, so the honest global section
    // is just the constant there; evaluate the right chart's version
    let v = eval_global(&complex, &sections, 0, &[rat_int(0)])
        .or_else(|_| complex.charts[0].eval(&sections[0], &[rat_int(0)]))?;
    println!("max(x-1, -1) at x = 0 on the right chart: {v}");
    Ok(())
}
