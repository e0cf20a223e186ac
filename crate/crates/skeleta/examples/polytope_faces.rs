//! Polytope semirings: face lattices, the identification of the
//! integral spectrum's opens with unions of faces, exact real-point
//! evaluation and the refinement base change.
//!
//! Run with: cargo run --example polytope_faces

use skeleta::geometry::{rat_int, Rat};
use skeleta::polytope::{face_lattice, integral_spectrum_vs_faces, refinement_base_change, RationalPolytope};
use skeleta::presentation::TropPoly;
use num_traits::Zero;

fn main() -> skeleta::Result<()> {
    for (name, p) in [
        ("interval [0,1]", RationalPolytope::interval(Rat::zero(), rat_int(1))?),
        ("triangle conv{0,e1,e2}", RationalPolytope::standard_triangle()?),
        ("unit square", RationalPolytope::square(Rat::zero(), rat_int(1))?),
    ] {
        let faces = face_lattice(&p)?;
        let iso = integral_spectrum_vs_faces(&p)?;
        println!(
            "{name}: {} faces, {} opens = {} unions of faces",
            faces.len(),
            iso.opens_count,
            iso.downsets_count
        );
    }

    // the presentation of Zv{[0,2]}: two contracting generators with one
    // length relation
    let ps = RationalPolytope::interval(Rat::zero(), rat_int(2))?.semiring()?;
    println!("\nZv{{[0,2]}} generators:");
    for ((g, m), s) in ps.pres.gens().iter().zip(&ps.functionals).zip(&ps.shifts) {
        println!("  {} = X_{m:?} - {}", g.name, skeleta::geometry::fmt_rat(s));
    }
    for r in ps.pres.relations() {
        println!(
            "  relation: {} = {}",
            r.lhs.display(&ps.pres),
            r.rhs.display(&ps.pres)
        );
    }

    // |x| on [-1,1], evaluated exactly
    let sym = RationalPolytope::interval(rat_int(-1), rat_int(1))?.semiring()?;
    let abs = sym.coordinate(0)?.join(&sym.functional_poly(&[-1], &Rat::zero())?);
    print!("\n|x| on [-1,1]: ");
    for k in [-4i128, -2, 1, 3] {
        let v = sym.eval_real(&abs, &[Rat::new(k, 4)])?.unwrap();
        print!("x={k}/4 -> {}  ", skeleta::geometry::fmt_rat(&v));
    }
    println!();

    // affine functions are units; kinked elements are not
    let x = sym.coordinate(0)?;
    println!(
        "x + 1 invertible: {}",
        sym.pres.invert(&x.shift(&rat_int(1)))?.is_some()
    );
    let kink = x.join(&TropPoly::constant(sym.pres.ngens(), Rat::zero()));
    println!("x v 0 invertible: {}", sym.pres.invert(&kink)?.is_some());

    // refining the value group by 1/2 matches scaling the polytope by 2
    let cert = refinement_base_change(&RationalPolytope::interval(Rat::zero(), rat_int(1))?, 2)?;
    println!("\nrefinement 1/2 Zv{{[0,1]}} = Zv{{[0,2]}}: k = {}", cert.k);
    Ok(())
}
