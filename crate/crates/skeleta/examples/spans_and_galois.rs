//! Finite spans (join-semilattices with bottom): free spans, the
//! lattice-completion isomorphism, right adjoints of join-preserving
//! maps, and quotients by pairs of homomorphisms.
//!
//! Run with: cargo run --example spans_and_galois

use skeleta::span::{coequalizer, lattice_completion, FiniteSpan, SpanHom};

fn main() -> skeleta::Result<()> {
    // the free span on {a, b}: the 4-element Boolean lattice
    let square = FiniteSpan::free(&["a", "b"])?;
    println!("free span on {{a,b}}: {} elements", square.len());
    println!("  {:?}", square.elements);

    // for a finite span every ideal is principal, so completion is an iso
    let emb = lattice_completion(&square)?;
    println!("lattice completion is an isomorphism: {}", emb.is_isomorphism());

    // a join-preserving map onto the 2-chain and its right adjoint
    let chain = FiniteSpan::new(
        vec!["bot".into(), "top".into()],
        &[(0, 1)],
    )?;
    let f = SpanHom::new(square.clone(), chain.clone(), vec![0, 1, 1, 1])?;
    let adj = f.right_adjoint()?;
    println!(
        "f sends non-empty subsets to top; f†(top) = {}",
        square.elements[adj[1]]
    );
    for x in 0..square.len() {
        assert!(square.leq(x, adj[f.apply(x)]), "id <= f†f");
    }
    for y in 0..chain.len() {
        assert!(chain.leq(f.apply(adj[y]), y), "f f† <= id");
    }
    println!("Galois laws id <= f†f and f f† <= id verified");

    // the quotient of the square identifying {a} with the empty set
    let two = FiniteSpan::new(vec!["bot".into(), "top".into()], &[(0, 1)])?;
    let s = SpanHom::new(two.clone(), square.clone(), vec![0, 1])?;
    let t = SpanHom::new(two, square.clone(), vec![0, 0])?;
    let q = coequalizer(&s, &t)?;
    println!(
        "square/({{a}} ~ -inf) has {} elements: {:?}",
        q.quotient.len(),
        q.quotient.elements
    );
    Ok(())
}
