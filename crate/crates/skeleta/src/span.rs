//! Finite spans: join-semilattices with a bottom element, their
//! homomorphisms, right adjoints (Galois connections), lattice
//! completion and quotients by pairs of homomorphisms.
//!
//! Elements are indices into a fixed carrier; the order is stored as a
//! full relation matrix. Every finite span is a complete lattice, every
//! ideal is principal, and the coequalizer construction below
//! terminates by finiteness.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub const FREE_SPAN_CAP: usize = 12;

/// A finite span: a partial order with all finite joins and a least
/// element. `leq[i][j]` means element i <= element j.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteSpan {
    pub elements: Vec<String>,
    leq: Vec<Vec<bool>>,
    bottom: usize,
}

impl FiniteSpan {
    /// Builds a span from labels and the full order relation, validating
    /// reflexivity, antisymmetry, transitivity and existence of joins.
    pub fn new(elements: Vec<String>, leq_pairs: &[(usize, usize)]) -> Result<Self> {
        let n = elements.len();
        if n == 0 {
            return Err(Error::Invalid("a span needs at least a bottom element".into()));
        }
        let mut leq = vec![vec![false; n]; n];
        for i in 0..n {
            leq[i][i] = true;
        }
        for &(i, j) in leq_pairs {
            if i >= n || j >= n {
                return Err(Error::Invalid("leq pair out of range".into()));
            }
            leq[i][j] = true;
        }
        // transitive closure
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(Error::Invalid(format!(
                        "order not antisymmetric on {} and {}",
                        elements[i], elements[j]
                    )));
                }
            }
        }
        let bottom = (0..n)
            .find(|&b| (0..n).all(|j| leq[b][j]))
            .ok_or_else(|| Error::Invalid("no bottom element".into()))?;
        let span = FiniteSpan { elements, leq, bottom };
        // joins must exist and be unique
        for i in 0..n {
            for j in 0..n {
                span.join(i, j)?;
            }
        }
        Ok(span)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    /// Least upper bound; fails when the upper bounds have no minimum.
    pub fn join(&self, i: usize, j: usize) -> Result<usize> {
        let n = self.len();
        let uppers: Vec<usize> = (0..n).filter(|&u| self.leq[i][u] && self.leq[j][u]).collect();
        let mut least = None;
        for &u in &uppers {
            if uppers.iter().all(|&v| self.leq[u][v]) {
                least = Some(u);
                break;
            }
        }
        least.ok_or_else(|| {
            Error::Invalid(format!(
                "no join of {} and {}",
                self.elements[i], self.elements[j]
            ))
        })
    }

    pub fn join_all(&self, items: impl IntoIterator<Item = usize>) -> Result<usize> {
        let mut acc = self.bottom;
        for i in items {
            acc = self.join(acc, i)?;
        }
        Ok(acc)
    }

    /// Pairs (i, j) with i <= j, for serialization.
    pub fn leq_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in 0..self.len() {
                if i != j && self.leq[i][j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// The free span on a finite generating set: all subsets of the
    /// generators ordered by inclusion, bottom the empty set.
    pub fn free(generators: &[&str]) -> Result<Self> {
        let k = generators.len();
        let mut names: Vec<&str> = generators.to_vec();
        names.sort();
        names.dedup();
        if names.len() != k {
            return Err(Error::Invalid("generator names must be distinct".into()));
        }
        if k > FREE_SPAN_CAP {
            return Err(Error::TooLarge(format!(
                "free span on {k} generators exceeds cap {FREE_SPAN_CAP}"
            )));
        }
        let n = 1usize << k;
        let elements: Vec<String> = (0..n)
            .map(|mask| {
                if mask == 0 {
                    "-inf".to_string()
                } else {
                    let mut parts: Vec<&str> = (0..k)
                        .filter(|b| mask & (1 << b) != 0)
                        .map(|b| generators[b])
                        .collect();
                    parts.sort();
                    parts.join("v")
                }
            })
            .collect();
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i & j == i {
                    pairs.push((i, j));
                }
            }
        }
        FiniteSpan::new(elements, &pairs)
    }

    /// All ideals (down-closed, join-closed subsets containing bottom) as
    /// element bitmasks. In a finite span each ideal is principal, so
    /// this is in bijection with the elements.
    pub fn ideals(&self) -> Vec<Vec<bool>> {
        (0..self.len())
            .map(|x| (0..self.len()).map(|y| self.leq[y][x]).collect())
            .collect()
    }

    pub fn to_json(&self) -> SpanJson {
        SpanJson {
            elements: self.elements.clone(),
            leq_pairs: self.leq_pairs(),
        }
    }

    pub fn from_json(j: &SpanJson) -> Result<Self> {
        FiniteSpan::new(j.elements.clone(), &j.leq_pairs)
    }
}

/// The wire shape {elements, leq_pairs}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpanJson {
    pub elements: Vec<String>,
    pub leq_pairs: Vec<(usize, usize)>,
}

/// A homomorphism of finite spans: preserves bottom and binary joins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanHom {
    pub source: FiniteSpan,
    pub target: FiniteSpan,
    pub map: Vec<usize>,
}

impl SpanHom {
    pub fn new(source: FiniteSpan, target: FiniteSpan, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() || map.iter().any(|&i| i >= target.len()) {
            return Err(Error::Invalid("hom map has wrong shape".into()));
        }
        let hom = SpanHom { source, target, map };
        hom.check_join_preserving()?;
        Ok(hom)
    }

    fn check_join_preserving(&self) -> Result<()> {
        if self.map[self.source.bottom()] != self.target.bottom() {
            return Err(Error::NotJoinPreserving("bottom".into()));
        }
        for i in 0..self.source.len() {
            for j in 0..self.source.len() {
                let lhs = self.map[self.source.join(i, j)?];
                let rhs = self.target.join(self.map[i], self.map[j])?;
                if lhs != rhs {
                    return Err(Error::NotJoinPreserving(format!(
                        "{} v {}",
                        self.source.elements[i], self.source.elements[j]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn is_isomorphism(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        for &i in &self.map {
            seen[i] = true;
        }
        self.source.len() == self.target.len()
            && seen.iter().all(|&s| s)
            && (0..self.source.len()).all(|i| {
                (0..self.source.len())
                    .all(|j| self.source.leq(i, j) == self.target.leq(self.map[i], self.map[j]))
            })
    }

    /// The right adjoint X -> sup { Y : f(Y) <= X }, a monotone map in
    /// the opposite direction. Defined since finite spans are complete.
    pub fn right_adjoint(&self) -> Result<Vec<usize>> {
        let mut adj = Vec::with_capacity(self.target.len());
        for x in 0..self.target.len() {
            let fibre = (0..self.source.len()).filter(|&y| self.target.leq(self.map[y], x));
            adj.push(self.source.join_all(fibre)?);
        }
        Ok(adj)
    }
}

/// The lattice-completion embedding X -> (ideal below X). For a finite
/// span every ideal is principal, so the embedding is an isomorphism
/// onto the span of ideals.
pub fn lattice_completion(s: &FiniteSpan) -> Result<SpanHom> {
    let ideals = s.ideals();
    let elements: Vec<String> = ideals
        .iter()
        .map(|ideal| {
            let mut members: Vec<&str> = (0..s.len())
                .filter(|&i| ideal[i])
                .map(|i| s.elements[i].as_str())
                .collect();
            members.sort();
            format!("{{{}}}", members.join(","))
        })
        .collect();
    let mut pairs = Vec::new();
    for (i, a) in ideals.iter().enumerate() {
        for (j, b) in ideals.iter().enumerate() {
            if a.iter().zip(b).all(|(x, y)| !x || *y) {
                pairs.push((i, j));
            }
        }
    }
    let target = FiniteSpan::new(elements, &pairs)?;
    let map: Vec<usize> = (0..s.len()).collect();
    SpanHom::new(s.clone(), target, map)
}

/// Result of coequalizing a pair of homomorphisms: the quotient span
/// together with the projection from the shared target.
#[derive(Debug, Clone)]
pub struct Coequalizer {
    pub quotient: FiniteSpan,
    pub projection: SpanHom,
}

/// Coequalizer of s, t : alpha -> beta. Computes, per element X of beta,
/// the smallest (s,t)-invariant ideal containing X by iterating the
/// closure `I <- I + t(s^-1 I) + s(t^-1 I)` on down-sets; the image of
/// X -> max(closure) is the quotient span.
pub fn coequalizer(s: &SpanHom, t: &SpanHom) -> Result<Coequalizer> {
    if s.source != t.source || s.target != t.target {
        return Err(Error::Invalid("coequalizer needs a parallel pair".into()));
    }
    let beta = &s.target;
    let alpha = &s.source;
    let n = beta.len();
    let closure_max = |x: usize| -> Result<usize> {
        // down-set of x as a bool mask, then closure
        let mut ideal: Vec<bool> = (0..n).map(|y| beta.leq(y, x)).collect();
        // cap = number of ideals = n; each round either stabilizes or grows
        for _ in 0..=n {
            let mut grew = false;
            let mut add = Vec::new();
            for a in 0..alpha.len() {
                if ideal[s.map[a]] && !ideal[t.map[a]] {
                    add.push(t.map[a]);
                }
                if ideal[t.map[a]] && !ideal[s.map[a]] {
                    add.push(s.map[a]);
                }
            }
            for v in add {
                if !ideal[v] {
                    ideal[v] = true;
                    grew = true;
                }
            }
            if grew {
                // close downward and under joins: a finite ideal is the
                // down-set of the join of its members
                let m = beta.join_all((0..n).filter(|&y| ideal[y]))?;
                for (y, slot) in ideal.iter_mut().enumerate() {
                    *slot = beta.leq(y, m);
                }
            } else {
                break;
            }
        }
        beta.join_all((0..n).filter(|&y| ideal[y]))
    };
    let reps: Vec<usize> = (0..n).map(closure_max).collect::<Result<_>>()?;
    let mut classes: Vec<usize> = reps.clone();
    classes.sort_unstable();
    classes.dedup();
    let elements: Vec<String> = classes.iter().map(|&c| beta.elements[c].clone()).collect();
    let mut pairs = Vec::new();
    for (qi, &ci) in classes.iter().enumerate() {
        for (qj, &cj) in classes.iter().enumerate() {
            if beta.leq(ci, cj) {
                pairs.push((qi, qj));
            }
        }
    }
    let quotient = FiniteSpan::new(elements, &pairs)?;
    let map: Vec<usize> = reps
        .iter()
        .map(|r| classes.iter().position(|c| c == r).unwrap())
        .collect();
    let projection = SpanHom::new(beta.clone(), quotient.clone(), map)?;
    Ok(Coequalizer { quotient, projection })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn chain(n: usize) -> FiniteSpan {
        let elements = (0..n).map(|i| format!("c{i}")).collect();
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i..n).map(move |j| (i, j)))
            .collect();
        FiniteSpan::new(elements, &pairs).unwrap()
    }

    #[test]
    fn free_span_shapes() {
        assert_eq!(FiniteSpan::free(&[]).unwrap().len(), 1);
        assert_eq!(FiniteSpan::free(&["a"]).unwrap().len(), 2);
        let sq = FiniteSpan::free(&["a", "b"]).unwrap();
        assert_eq!(sq.len(), 4);
        assert_eq!(sq.join(1, 2).unwrap(), 3);
        assert!(FiniteSpan::free(&["a", "a"]).is_err());
        let caps: Vec<String> = (0..13).map(|i| format!("g{i}")).collect();
        let refs: Vec<&str> = caps.iter().map(|s| s.as_str()).collect();
        assert!(matches!(FiniteSpan::free(&refs), Err(Error::TooLarge(_))));
    }

    #[test]
    fn lattice_completion_is_isomorphism_on_finite_spans() {
        for span in [chain(3), FiniteSpan::free(&["a", "b"]).unwrap(), chain(1)] {
            let emb = lattice_completion(&span).unwrap();
            assert!(emb.is_isomorphism());
        }
    }

    #[test]
    fn right_adjoint_formula() {
        // identity
        let sq = FiniteSpan::free(&["a", "b"]).unwrap();
        let id = SpanHom::new(sq.clone(), sq.clone(), (0..4).collect()).unwrap();
        assert_eq!(id.right_adjoint().unwrap(), vec![0, 1, 2, 3]);
        // collapse the square onto a 2-chain: empty -> bottom, rest -> top
        let two = chain(2);
        let f = SpanHom::new(sq.clone(), two.clone(), vec![0, 1, 1, 1]).unwrap();
        let adj = f.right_adjoint().unwrap();
        assert_eq!(adj[1], 3, "adjoint of top is the full subset");
        // constant-to-bottom map: adjoint is constant top
        let cb = SpanHom::new(two.clone(), sq.clone(), vec![0, 0]).unwrap();
        assert_eq!(cb.right_adjoint().unwrap(), vec![1; 4]);
        // a non-join-preserving map is rejected
        assert!(matches!(
            SpanHom::new(sq.clone(), two, vec![1, 1, 1, 1]),
            Err(Error::NotJoinPreserving(_))
        ));
    }

    #[test]
    fn coequalizer_identifies_generator_with_bottom() {
        // quotient of the square B^c{a,b} identifying {a} with the empty set
        let sq = FiniteSpan::free(&["a", "b"]).unwrap();
        let two = chain(2);
        let s = SpanHom::new(two.clone(), sq.clone(), vec![0, 1]).unwrap();
        let t = SpanHom::new(two, sq.clone(), vec![0, 0]).unwrap();
        let c = coequalizer(&s, &t).unwrap();
        assert_eq!(c.quotient.len(), 2);
        // {a} and empty collapse together; {b} and {a, b} collapse together
        assert_eq!(c.projection.map[0], c.projection.map[1]);
        assert_eq!(c.projection.map[2], c.projection.map[3]);
    }

    #[test]
    fn coequalizer_of_equal_pair_is_isomorphism() {
        let sq = FiniteSpan::free(&["a", "b"]).unwrap();
        let two = chain(2);
        let s = SpanHom::new(two.clone(), sq.clone(), vec![0, 3]).unwrap();
        let c = coequalizer(&s, &s).unwrap();
        assert!(c.projection.is_isomorphism());
    }

    #[test]
    fn coequalizer_matches_set_quotient_by_ideal() {
        // quotient of a 3-chain by the ideal below the middle element:
        // both nontrivial classes of the chain collapse as {c0,c1} and {c2}
        let three = chain(3);
        let two = chain(2);
        let s = SpanHom::new(two.clone(), three.clone(), vec![0, 1]).unwrap();
        let t = SpanHom::new(two, three.clone(), vec![0, 0]).unwrap();
        let c = coequalizer(&s, &t).unwrap();
        assert_eq!(c.quotient.len(), 2);
        assert_eq!(c.projection.map[0], c.projection.map[1]);
        assert_ne!(c.projection.map[1], c.projection.map[2]);
    }

    /// Builds a random join-closed sublattice of a free span, used as a
    /// target for random join-preserving maps.
    fn random_lattice(rng: &mut ChaCha8Rng, max_gens: usize) -> FiniteSpan {
        let k = rng.gen_range(1..=max_gens);
        let names: Vec<String> = (0..k).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        FiniteSpan::free(&refs).unwrap()
    }

    #[test]
    fn galois_connection_laws_on_random_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..100 {
            let src_gens = rng.gen_range(1..=5usize);
            let names: Vec<String> = (0..src_gens).map(|i| format!("g{i}")).collect();
            let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            let source = FiniteSpan::free(&refs).unwrap();
            let target = random_lattice(&mut rng, 5);
            // a map out of a free span is determined freely by generator images
            let images: Vec<usize> = (0..src_gens)
                .map(|_| rng.gen_range(0..target.len()))
                .collect();
            let map: Vec<usize> = (0..source.len())
                .map(|mask| {
                    target
                        .join_all((0..src_gens).filter(|b| mask & (1 << b) != 0).map(|b| images[b]))
                        .unwrap()
                })
                .collect();
            let f = SpanHom::new(source.clone(), target.clone(), map).unwrap();
            let adj = f.right_adjoint().unwrap();
            for x in 0..source.len() {
                // id <= f† f
                assert!(source.leq(x, adj[f.map[x]]));
                // f f† f = f
                assert_eq!(f.map[adj[f.map[x]]], f.map[x]);
            }
            for y in 0..target.len() {
                // f f† <= id
                assert!(target.leq(f.map[adj[y]], y));
                // f† f f† = f†
                assert_eq!(adj[f.map[adj[y]]], adj[y]);
            }
        }
    }

    #[test]
    fn free_span_is_left_adjoint_to_forgetting() {
        // maps S -> alpha correspond bijectively to homs B^c S -> alpha
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let k = rng.gen_range(0..=3usize);
            let names: Vec<String> = (0..k).map(|i| format!("s{i}")).collect();
            let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            let source = FiniteSpan::free(&refs).unwrap();
            let target = random_lattice(&mut rng, 2);
            // count homs by brute force
            let mut homs = 0usize;
            let mut stack = vec![vec![]];
            while let Some(partial) = stack.pop() {
                if partial.len() == source.len() {
                    if SpanHom::new(source.clone(), target.clone(), partial).is_ok() {
                        homs += 1;
                    }
                    continue;
                }
                for v in 0..target.len() {
                    let mut next = partial.clone();
                    next.push(v);
                    stack.push(next);
                }
            }
            let functions = target.len().pow(k as u32);
            assert_eq!(homs, functions);
        }
    }

    #[test]
    fn json_round_trip() {
        let sq = FiniteSpan::free(&["a", "b"]).unwrap();
        let j = sq.to_json();
        let text = serde_json::to_string(&j).unwrap();
        let back: crate::span::SpanJson = serde_json::from_str(&text).unwrap();
        assert_eq!(FiniteSpan::from_json(&back).unwrap(), sq);
    }

    #[test]
    fn bounded_families_have_finite_joins() {
        // in a finite span the sup of any family is the join of its members
        let sq = FiniteSpan::free(&["a", "b", "c"]).unwrap();
        let family: Vec<usize> = vec![1, 2, 4];
        let sup = sq.join_all(family.clone()).unwrap();
        assert_eq!(sup, 7);
        assert!(family.iter().all(|&x| sq.leq(x, sup)));
    }
}
