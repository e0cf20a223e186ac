//! The circle skeleton of a degenerating elliptic curve: n length-two
//! interval charts glued cyclically, the global divisor functions, the
//! blow-up element as an absolute value, and the chart subdivision that
//! resolves the center vertex.
//!
//! Run with: cargo run --example ks_circle

use skeleta::complexes::{
    elliptic_ks_skeleton, eval_global, ks_blowup_pullback, ks_divisor, subdivide,
};
use skeleta::geometry::Rat;
use skeleta::svg::complex_svg;

fn main() -> skeleta::Result<()> {
    let n = 4;
    let complex = elliptic_ks_skeleton(n)?;
    println!(
        "circle skeleton, n = {n}: {} glued points {:?}",
        complex.point_count(),
        complex.global_points
    );
    println!("specialization pairs (edge into vertex): {:?}", complex.specialization);

    // D_2 takes the value -1 at v_2 and 0 at the other vertices
    let d2 = ks_divisor(&complex, 2)?;
    for j in 0..n {
        let v = eval_global(&complex, &d2, j, &[Rat::from_integer(0)])?;
        println!("D_2 at v{j} = {v}");
    }
    let mid = eval_global(&complex, &d2, 2, &[Rat::new(1, 2)])?;
    println!("D_2 halfway along e2 = {mid}");

    // the blow-up element on a chart evaluates as |x| - 1
    let chart = &complex.charts[1];
    let b = ks_blowup_pullback(&chart.pres)?;
    print!("blow-up element on I1: ");
    for k in [-4i128, -2, 0, 2, 4] {
        let v = chart.eval(&b, &[Rat::new(k, 4)])?;
        print!("x={k}/4 -> {v}  ");
    }
    println!();

    // subdividing a chart at its blow-up element adds the center vertex
    // as an honest chart boundary: n+1 charts, same glued points
    let subdivided = subdivide(&complex, 1, &b)?;
    println!(
        "\nafter subdividing I1: {} charts, {} glued points",
        subdivided.charts.len(),
        subdivided.point_count()
    );

    // one-dimensional complexes have an SVG rendering
    let svg = complex_svg(&complex);
    println!("SVG rendering: {} bytes (try `skeleta ks --n 4 --format svg`)", svg.len());
    Ok(())
}
