//! Exact arithmetic in the coefficient semifields and normal forms of
//! tropical polynomials, including the classic witness that freely
//! contracting semirings are not cancellative.
//!
//! Run with: cargo run --example tropical_arithmetic

use skeleta::dsl::parse_element;
use skeleta::geometry::rat;
use skeleta::presentation::Presentation;
use skeleta::semifield::{SemifieldTag, SemifieldValue};

fn main() -> skeleta::Result<()> {
    // semifield values: join is max, plus is addition, -inf absorbs
    let a = SemifieldValue::int(3);
    let b = SemifieldValue::int(5);
    println!("3 v 5         = {}", a.join(&b)?);
    println!("3 + 5         = {}", a.plus(&b)?);
    let ninf = SemifieldValue::neg_inf(SemifieldTag::Rat);
    let r = SemifieldValue::rational(rat(2, 3));
    println!("-inf v 2/3    = {}", ninf.join(&r)?);
    println!("-inf + 2/3    = {}", ninf.plus(&r)?);
    println!("red(-1) in B  = {}", SemifieldValue::int(-1).reduce_to_bool()?);

    // Zv{X}: one contracting generator; (X+3) v 3 collapses since X <= 0
    let zx = Presentation::freely_contracting(SemifieldTag::Int, &["X"])?;
    let e = parse_element(&zx, "X + 3 v 3")?;
    println!("\nin Zv{{X}}:  X+3 v 3   ~> {}", zx.normalize(&e)?.display(&zx));

    // the non-cancellativity witness: 2(X v -1) and 2X v -2 agree as
    // real functions but differ as elements
    let lhs = parse_element(&zx, "X v -1")?.times(2, 1);
    let rhs = parse_element(&zx, "2X v -2")?;
    println!("2(X v -1)             ~> {}", zx.normalize(&lhs)?.display(&zx));
    println!("2X v -2               ~> {}", zx.normalize(&rhs)?.display(&zx));
    println!("equal as elements?       {:?}", zx.eq(&lhs, &rhs)?);
    let at = |x: i128| {
        let pt = vec![SemifieldValue::int(x)];
        (
            zx.eval(&lhs, &pt).unwrap().to_string(),
            zx.eval(&rhs, &pt).unwrap().to_string(),
        )
    };
    for x in [-3, -1, 0] {
        let (l, r) = at(x);
        println!("  at X={x}: {l} vs {r}");
    }
    Ok(())
}
