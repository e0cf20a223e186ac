//! Prime spectra of contracting presentations: the Boolean polydisc,
//! the dual-intersection simplex chart, basic opens and the cellular
//! cover formula.
//!
//! Run with: cargo run --example polydisc_and_simplex

use skeleta::complexes::{dual_intersection_chart, SncStratum};
use skeleta::dsl::parse_presentation;
use skeleta::presentation::Presentation;
use skeleta::semifield::SemifieldTag;
use skeleta::spectrum::{cellular_cover_check, enumerate_points, open_of_localization};

fn main() -> skeleta::Result<()> {
    // the polydisc: Spec B{X1..Xk} has 2^k points
    for k in 1..=4usize {
        let names: Vec<String> = (1..=k).map(|i| format!("X{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let p = Presentation::freely_contracting(SemifieldTag::Bool, &refs)?;
        let spec = enumerate_points(&p)?;
        println!("|Spec B{{X1..X{k}}}| = {}", spec.len());
    }

    // the simplex chart -1 = X1 + X2 from the DSL
    let chart = parse_presentation(
        "semiring over Zv; gens X1 contracting, X2 contracting; rel -1 = X1 + X2;",
    )?;
    let spec = enumerate_points(&chart)?;
    println!("\nsimplex chart: {} points", spec.len());
    for (i, pt) in spec.points.iter().enumerate() {
        let shown: Vec<&str> = pt.assignment.iter().map(|&v| if v { "0" } else { "-inf" }).collect();
        println!("  point {i}: {shown:?}");
    }
    println!("specialization pairs: {:?}", spec.specialization);

    // the same chart through the stratum constructor, with multiplicities
    let weighted = dual_intersection_chart(&SncStratum {
        ambient: 2,
        multiplicities: vec![1, 2],
    })?;
    println!(
        "weighted chart real vertices: {:?}",
        weighted
            .feasible_vertices()?
            .iter()
            .map(|v| v.iter().map(skeleta::geometry::fmt_rat).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    );

    // U_S and the spectrum of the cellular localization coincide
    let p = Presentation::freely_contracting(SemifieldTag::Bool, &["X", "Y"])?;
    let x = p.gen_poly("X")?;
    let y = p.gen_poly("Y")?;
    let data = open_of_localization(&p, &x)?;
    println!("\nU_X in Spec B{{X,Y}}: {:?} (localized spectrum agrees)", data.open);
    let cert = cellular_cover_check(&p, &[x, y])?;
    println!(
        "cover U_(X v Y) = U_X u U_Y: {} ({} points on the left)",
        cert.holds,
        cert.join_open.len()
    );
    Ok(())
}
