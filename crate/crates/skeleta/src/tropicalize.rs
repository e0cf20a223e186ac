//! t-adic tropicalization of polynomials, generation of tropical
//! relations for subvarieties of polyhedral domains, and exact corner
//! loci of plane tropical curves with a sampling cross-check oracle.

use crate::error::{Error, Result};
use crate::geometry::{dot_ir, primitive, rat_int, v_representation, HalfSpace, Int, Rat};
use crate::polytope::{PolytopeSemiring, RationalPolytope};
use crate::presentation::{Presentation, RelKind, Relation, TropPoly};
use num_traits::Zero;
use serde::Serialize;

/// A polynomial over Q with explicit t-powers: terms c * t^k * x^i ...
#[derive(Debug, Clone, PartialEq)]
pub struct TPoly {
    pub vars: Vec<String>,
    pub terms: Vec<TTerm>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TTerm {
    pub exps: Vec<u32>,
    pub tpow: u32,
    pub coeff: Rat,
}

impl TPoly {
    pub fn new(vars: Vec<String>, terms: Vec<TTerm>) -> Result<Self> {
        let mut seen: Vec<(Vec<u32>, u32)> = Vec::new();
        for t in &terms {
            if t.coeff.is_zero() {
                return Err(Error::Invalid("zero coefficient in term".into()));
            }
            if t.exps.len() != vars.len() {
                return Err(Error::Invalid("term arity mismatch".into()));
            }
            let key = (t.exps.clone(), t.tpow);
            if seen.contains(&key) {
                return Err(Error::Invalid("duplicate (exponent, t-power) term".into()));
            }
            seen.push(key);
        }
        Ok(TPoly { vars, terms })
    }

    /// Multiplies two polynomials over Q[t] (used by the subadditivity
    /// checks).
    pub fn product(&self, other: &TPoly) -> Result<TPoly> {
        if self.vars != other.vars {
            return Err(Error::Invalid("variable mismatch".into()));
        }
        let mut acc: Vec<TTerm> = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                let exps: Vec<u32> = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
                let tpow = a.tpow + b.tpow;
                let coeff = &a.coeff * &b.coeff;
                if let Some(existing) = acc
                    .iter_mut()
                    .find(|t| t.exps == exps && t.tpow == tpow)
                {
                    existing.coeff += coeff;
                } else {
                    acc.push(TTerm { exps, tpow, coeff });
                }
            }
        }
        acc.retain(|t| !t.coeff.is_zero());
        if acc.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        TPoly::new(self.vars.clone(), acc)
    }
}

/// Term-wise t-adic valuation: the join over terms of (sum i_a X_a) - k.
/// A norm, not a valuation.
pub fn tropicalize_poly(f: &TPoly, ps: &PolytopeSemiring) -> Result<TropPoly> {
    if f.terms.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    if f.vars.len() != ps.polytope.rank {
        return Err(Error::RankUnsupported(f.vars.len()));
    }
    let mut out = TropPoly::neg_inf();
    for t in &f.terms {
        let m: Vec<Int> = t.exps.iter().map(|&e| e as Int).collect();
        let term = ps.functional_poly(&m, &rat_int(-(t.tpow as Int)))?;
        out = out.join(&term);
    }
    ps.pres.normalize(&out)
}

/// For each generator f and each term of f, the relation
/// `trop(f) = join of the other terms`: dropping any single monomial
/// does not change the tropicalization on the subvariety it cuts out.
/// Returns the presentation of the tropicalized subvariety.
pub fn trop_relations(generators: &[TPoly], ps: &PolytopeSemiring) -> Result<Presentation> {
    let mut relations = ps.pres.relations().to_vec();
    for f in generators {
        if f.terms.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        if f.terms.len() == 1 {
            // a single monomial is a unit after inverting t: the cut
            // subscheme is empty
            return Err(Error::Invalid(
                "single-term generator cuts an inconsistent (empty) subscheme".into(),
            ));
        }
        let full = tropicalize_poly(f, ps)?;
        for skip in 0..f.terms.len() {
            let mut rest = TropPoly::neg_inf();
            for (i, t) in f.terms.iter().enumerate() {
                if i == skip {
                    continue;
                }
                let m: Vec<Int> = t.exps.iter().map(|&e| e as Int).collect();
                rest = rest.join(&ps.functional_poly(&m, &rat_int(-(t.tpow as Int)))?);
            }
            relations.push(Relation {
                kind: RelKind::Eq,
                lhs: full.clone(),
                rhs: ps.pres.normalize(&rest)?,
            });
        }
    }
    Presentation::new(ps.pres.base(), ps.pres.gens().to_vec(), relations)
}

/// An affine view of the terms of a tropical polynomial on the ambient
/// coordinates: slope vector and offset.
fn affine_terms(e: &TropPoly, ps: &PolytopeSemiring) -> Vec<(Vec<Int>, Rat)> {
    e.terms()
        .iter()
        .map(|t| {
            let mut m = vec![0 as Int; ps.polytope.rank];
            let mut c = t.coeff.clone();
            for (j, &a) in t.exps.iter().enumerate() {
                for (d, slot) in m.iter_mut().enumerate() {
                    *slot += a as Int * ps.functionals[j][d];
                }
                c -= Rat::from_integer(a as Int) * &ps.shifts[j];
            }
            (m, c)
        })
        .collect()
}

/// A plane tropical curve: the non-differentiability locus of the convex
/// piecewise-affine function of a tropical polynomial, clipped to the
/// polytope.
#[derive(Debug, Clone, Serialize)]
pub struct TropCurve {
    /// points where three or more terms tie and are maximal
    pub vertices: Vec<Vec<String>>,
    /// bounded edges interior to the domain
    pub segments: Vec<(Vec<String>, Vec<String>)>,
    /// edges leaving the domain (origin, primitive direction)
    pub rays: Vec<(Vec<String>, Vec<i64>)>,
    #[serde(skip)]
    pub geometry: CurveGeometry,
}

/// Exact rational geometry backing the printable curve data.
#[derive(Debug, Clone, Default)]
pub struct CurveGeometry {
    pub vertices: Vec<Vec<Rat>>,
    pub segments: Vec<(Vec<Rat>, Vec<Rat>)>,
    pub rays: Vec<(Vec<Rat>, Vec<Int>)>,
}

fn fmt_pt(p: &[Rat]) -> Vec<String> {
    p.iter().map(crate::geometry::fmt_rat).collect()
}

/// Computes the corner locus of a rank-2 tropical polynomial: for every
/// pair of terms, the locus where both are equal and jointly maximal,
/// intersected with the polytope.
pub fn corner_locus(e: &TropPoly, ps: &PolytopeSemiring) -> Result<TropCurve> {
    if ps.polytope.rank != 2 {
        return Err(Error::RankUnsupported(ps.polytope.rank));
    }
    let terms = affine_terms(&ps.pres.normalize(e)?, ps);
    let mut geom = CurveGeometry::default();
    if terms.len() < 2 {
        return Ok(TropCurve {
            vertices: vec![],
            segments: vec![],
            rays: vec![],
            geometry: geom,
        });
    }
    let domain_hs: Vec<HalfSpace> = ps
        .polytope
        .halfspaces
        .iter()
        .map(|(f, l)| HalfSpace::new(f.iter().map(|&x| rat_int(x)).collect(), l.clone()))
        .collect();
    let mut vertex_candidates: Vec<Vec<Rat>> = Vec::new();
    for i in 0..terms.len() {
        for j in i + 1..terms.len() {
            let (mi, ci) = &terms[i];
            let (mj, cj) = &terms[j];
            let diff: Vec<Rat> = mi.iter().zip(mj).map(|(a, b)| rat_int(a - b)).collect();
            if diff.iter().all(|x| x.is_zero()) {
                continue;
            }
            // ti = tj >= tk, inside the domain
            let mut hs = domain_hs.clone();
            hs.push(HalfSpace::new(diff.clone(), cj - ci));
            hs.push(HalfSpace::new(diff.iter().map(|x| -x).collect(), ci - cj));
            for (k, (mk, ck)) in terms.iter().enumerate() {
                if k == i || k == j {
                    continue;
                }
                // tk <= ti
                let n: Vec<Rat> = mk.iter().zip(mi).map(|(a, b)| rat_int(a - b)).collect();
                hs.push(HalfSpace::new(n, ci - ck));
            }
            let vrep = v_representation(&hs, 2);
            if vrep.is_empty() {
                continue;
            }
            let dim_est = vrep.vertices.len() + vrep.rays.len();
            if dim_est < 2 {
                // a single point: recorded only if three terms tie there
                vertex_candidates.push(vrep.vertices[0].clone());
                continue;
            }
            let classify_end = |p: &Vec<Rat>| -> usize {
                // number of jointly maximal terms at p
                let vals: Vec<Rat> = terms
                    .iter()
                    .map(|(m, c)| dot_ir(m, p) + c)
                    .collect();
                let mx = vals.iter().max().unwrap().clone();
                vals.iter().filter(|v| **v == mx).count()
            };
            let on_boundary = |p: &Vec<Rat>| -> bool {
                ps.polytope
                    .halfspaces
                    .iter()
                    .any(|(f, l)| dot_ir(f, p) == *l)
            };
            match (vrep.vertices.len(), vrep.rays.len()) {
                (2, 0) => {
                    let (p, q) = (vrep.vertices[0].clone(), vrep.vertices[1].clone());
                    for end in [&p, &q] {
                        if classify_end(end) >= 3 {
                            vertex_candidates.push(end.clone());
                        }
                    }
                    let p_cut = on_boundary(&p) && classify_end(&p) == 2;
                    let q_cut = on_boundary(&q) && classify_end(&q) == 2;
                    if p_cut && !q_cut {
                        geom.rays
                            .push((q.clone(), primitive(&sub(&p, &q))));
                    } else if q_cut && !p_cut {
                        geom.rays
                            .push((p.clone(), primitive(&sub(&q, &p))));
                    } else {
                        geom.segments.push((p, q));
                    }
                }
                (1, 1) => {
                    let p = vrep.vertices[0].clone();
                    if classify_end(&p) >= 3 {
                        vertex_candidates.push(p.clone());
                    }
                    geom.rays.push((p, vrep.rays[0].clone()));
                }
                _ => {
                    // a line through the domain: split by its vertices
                    if vrep.vertices.len() == 1 && vrep.rays.len() == 2 {
                        let p = vrep.vertices[0].clone();
                        for r in &vrep.rays {
                            geom.rays.push((p.clone(), r.clone()));
                        }
                    }
                }
            }
        }
    }
    for v in vertex_candidates {
        if !geom.vertices.contains(&v) {
            geom.vertices.push(v);
        }
    }
    geom.vertices.sort();
    geom.rays.sort_by_key(|(o, d)| (fmt_pt(o), d.clone()));
    geom.segments.sort_by_key(|(a, b)| (fmt_pt(a), fmt_pt(b)));
    Ok(TropCurve {
        vertices: geom.vertices.iter().map(|v| fmt_pt(v)).collect(),
        segments: geom
            .segments
            .iter()
            .map(|(a, b)| (fmt_pt(a), fmt_pt(b)))
            .collect(),
        rays: geom
            .rays
            .iter()
            .map(|(o, d)| (fmt_pt(o), d.iter().map(|&x| x as i64).collect()))
            .collect(),
        geometry: geom,
    })
}

fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// A sampled kink detector: marks grid cells where the maximizing term
/// changes across the cell corners.
#[derive(Debug)]
pub struct GridOracle {
    pub h: Rat,
    pub window: RationalPolytope,
    pub lo: Vec<Rat>,
    pub steps: Vec<i64>,
    pub marked: Vec<(i64, i64)>,
}

pub fn grid_oracle(e: &TropPoly, ps: &PolytopeSemiring, h: &Rat, window: &RationalPolytope) -> Result<GridOracle> {
    if ps.polytope.rank != 2 {
        return Err(Error::RankUnsupported(ps.polytope.rank));
    }
    if !window.is_compact() {
        return Err(Error::Invalid("clip window must be compact".into()));
    }
    let terms = affine_terms(&ps.pres.normalize(e)?, ps);
    let xs: Vec<Rat> = window.vertices().iter().map(|v| v[0].clone()).collect();
    let ys: Vec<Rat> = window.vertices().iter().map(|v| v[1].clone()).collect();
    let lo = vec![xs.iter().min().unwrap().clone(), ys.iter().min().unwrap().clone()];
    let hi = [xs.iter().max().unwrap().clone(), ys.iter().max().unwrap().clone()];
    let steps: Vec<i64> = (0..2)
        .map(|d| {
            let span = &hi[d] - &lo[d];
            let n = span / h.clone();
            n.ceil().to_integer() as i64
        })
        .collect();
    let argmax_set = |p: &[Rat]| -> Vec<usize> {
        let vals: Vec<Rat> = terms.iter().map(|(m, c)| dot_ir(m, p) + c).collect();
        let mx = vals.iter().max().unwrap().clone();
        vals.iter()
            .enumerate()
            .filter(|(_, v)| **v == mx)
            .map(|(i, _)| i)
            .collect()
    };
    let mut marked = Vec::new();
    for i in 0..steps[0] {
        for j in 0..steps[1] {
            let corners = [
                (i, j),
                (i + 1, j),
                (i, j + 1),
                (i + 1, j + 1),
            ];
            let sets: Vec<Vec<usize>> = corners
                .iter()
                .map(|&(a, b)| {
                    argmax_set(&[
                        &lo[0] + h.clone() * rat_int(a as Int),
                        &lo[1] + h.clone() * rat_int(b as Int),
                    ])
                })
                .collect();
            if sets.windows(2).any(|w| w[0] != w[1]) {
                marked.push((i, j));
            }
        }
    }
    Ok(GridOracle {
        h: h.clone(),
        window: window.clone(),
        lo,
        steps,
        marked,
    })
}

/// Cross-validation: every marked cell meets the curve, and every curve
/// point inside the window lies in the closure of a marked cell.
pub fn oracle_agrees(curve: &TropCurve, oracle: &GridOracle) -> bool {
    let h = &oracle.h;
    let lo = &oracle.lo;
    let cell_of = |p: &[Rat]| -> (i64, i64) {
        let fx = ((&p[0] - &lo[0]) / h.clone()).floor().to_integer() as i64;
        let fy = ((&p[1] - &lo[1]) / h.clone()).floor().to_integer() as i64;
        (fx, fy)
    };
    // curve points sampled along edges at h/4 resolution
    let mut samples: Vec<Vec<Rat>> = curve.geometry.vertices.clone();
    let quarter = h.clone() / rat_int(4);
    for (a, b) in &curve.geometry.segments {
        let len = sub(b, a);
        let norm = len.iter().map(|x| if x < &Rat::zero() { -x.clone() } else { x.clone() }).max().unwrap();
        let n = (norm / quarter.clone()).ceil().to_integer().max(1);
        for k in 0..=n {
            let t = Rat::new(k, n);
            samples.push(vec![
                &a[0] + (&b[0] - &a[0]) * &t,
                &a[1] + (&b[1] - &a[1]) * &t,
            ]);
        }
    }
    for (o, d) in &curve.geometry.rays {
        // walk the ray until it leaves the window
        let mut k = Rat::zero();
        loop {
            let p = vec![
                &o[0] + rat_int(d[0]) * &k,
                &o[1] + rat_int(d[1]) * &k,
            ];
            if !oracle.window.contains(&p) {
                break;
            }
            samples.push(p);
            k += quarter.clone();
        }
    }
    samples.retain(|p| oracle.window.contains(p));
    // direction 1: every sample lies in the closure of some marked cell
    for p in &samples {
        let (cx, cy) = cell_of(p);
        let mut ok = false;
        'search: for dx in -1..=1 {
            for dy in -1..=1 {
                if oracle.marked.contains(&(cx + dx, cy + dy)) {
                    // closure check: the sample must touch that cell
                    let x0 = &lo[0] + oracle.h.clone() * rat_int((cx + dx) as Int);
                    let y0 = &lo[1] + oracle.h.clone() * rat_int((cy + dy) as Int);
                    let x1 = &x0 + oracle.h.clone();
                    let y1 = &y0 + oracle.h.clone();
                    if p[0] >= x0 && p[0] <= x1 && p[1] >= y0 && p[1] <= y1 {
                        ok = true;
                        break 'search;
                    }
                }
            }
        }
        if !ok {
            return false;
        }
    }
    // direction 2: every marked cell's closed square meets the curve
    for &(i, j) in &oracle.marked {
        let x0 = &lo[0] + oracle.h.clone() * rat_int(i as Int);
        let y0 = &lo[1] + oracle.h.clone() * rat_int(j as Int);
        let x1 = &x0 + oracle.h.clone();
        let y1 = &y0 + oracle.h.clone();
        let meets = samples
            .iter()
            .any(|p| p[0] >= x0 && p[0] <= x1 && p[1] >= y0 && p[1] <= y1);
        if !meets {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn quadrant(lambda: i128) -> PolytopeSemiring {
        RationalPolytope::lower_orthant(2, rat_int(lambda))
            .unwrap()
            .semiring()
            .unwrap()
    }

    fn tpoly(vars: &[&str], terms: &[(&[u32], u32, i128)]) -> TPoly {
        TPoly::new(
            vars.iter().map(|s| s.to_string()).collect(),
            terms
                .iter()
                .map(|(e, k, c)| TTerm {
                    exps: e.to_vec(),
                    tpow: *k,
                    coeff: rat_int(*c),
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn tropicalization_examples() {
        let ps = quadrant(1);
        // x + y + t -> X v Y v -1
        let f = tpoly(&["x", "y"], &[(&[1, 0], 0, 1), (&[0, 1], 0, 1), (&[0, 0], 1, 1)]);
        let trop = tropicalize_poly(&f, &ps).unwrap();
        let expect = ps
            .coordinate(0)
            .unwrap()
            .join(&ps.coordinate(1).unwrap())
            .join(&TropPoly::constant(ps.pres.ngens(), rat_int(-1)));
        assert!(ps.pres.eq(&trop, &expect).unwrap().is_equal());
        // t^3 -> constant -3
        let g = tpoly(&["x", "y"], &[(&[0, 0], 3, 1)]);
        let tg = tropicalize_poly(&g, &ps).unwrap();
        assert!(ps
            .pres
            .eq(&tg, &TropPoly::constant(ps.pres.ngens(), rat_int(-3)))
            .unwrap()
            .is_equal());
        // x^2 + 2tx + t^2 (2 != 0 in Q) -> 2X v X-1 v -2
        let h = tpoly(&["x", "y"], &[(&[2, 0], 0, 1), (&[1, 0], 1, 2), (&[0, 0], 2, 1)]);
        let th = tropicalize_poly(&h, &ps).unwrap();
        let x = ps.coordinate(0).unwrap();
        let expect = x
            .times(2, ps.pres.ngens())
            .join(&x.shift(&rat_int(-1)))
            .join(&TropPoly::constant(ps.pres.ngens(), rat_int(-2)));
        assert!(ps.pres.eq(&th, &expect).unwrap().is_equal());
    }

    #[test]
    fn relations_for_a_line() {
        let ps = quadrant(1);
        let f = tpoly(&["x", "y"], &[(&[1, 0], 0, 1), (&[0, 1], 0, 1), (&[0, 0], 1, 1)]);
        let trop = trop_relations(&[f], &ps).unwrap();
        assert_eq!(trop.relations().len(), ps.pres.relations().len() + 3);
        // single-term generators are inconsistent
        let unit = tpoly(&["x", "y"], &[(&[0, 0], 3, 1)]);
        assert!(trop_relations(&[unit], &ps).is_err());
        // two generators x + t, y + t: four relations cutting (-1, -1)
        let gx = tpoly(&["x", "y"], &[(&[1, 0], 0, 1), (&[0, 0], 1, 1)]);
        let gy = tpoly(&["x", "y"], &[(&[0, 1], 0, 1), (&[0, 0], 1, 1)]);
        let cut = trop_relations(&[gx, gy], &ps).unwrap();
        assert_eq!(cut.relations().len(), ps.pres.relations().len() + 4);
        // the real point (-1, -1) satisfies all relations
        let vals = vec![
            crate::semifield::SemifieldValue::rational(rat_int(-1) - rat_int(1)),
            crate::semifield::SemifieldValue::rational(rat_int(-1) - rat_int(1)),
        ];
        // generator values at (-1,-1): X - 1 evaluates to -2, Y - 1 to -2
        let e = TropPoly::zero(cut.ngens());
        cut.eval(&e, &vals).unwrap();
    }

    #[test]
    fn corner_locus_of_tropical_line() {
        let ps = quadrant(1);
        let f = ps
            .coordinate(0)
            .unwrap()
            .join(&ps.coordinate(1).unwrap())
            .join(&TropPoly::constant(ps.pres.ngens(), rat_int(-1)));
        let curve = corner_locus(&f, &ps).unwrap();
        assert_eq!(curve.geometry.vertices, vec![vec![rat_int(-1), rat_int(-1)]]);
        assert_eq!(curve.geometry.rays.len(), 3);
        let dirs: Vec<Vec<Int>> = curve.geometry.rays.iter().map(|(_, d)| d.clone()).collect();
        assert!(dirs.contains(&vec![1, 1]));
        assert!(dirs.contains(&vec![-1, 0]));
        assert!(dirs.contains(&vec![0, -1]));
        assert!(curve.geometry.segments.is_empty());
    }

    #[test]
    fn corner_locus_degenerate_cases() {
        let ps = quadrant(2);
        // constant: empty curve
        let c = TropPoly::constant(ps.pres.ngens(), rat_int(-1));
        let curve = corner_locus(&c, &ps).unwrap();
        assert!(curve.geometry.vertices.is_empty() && curve.geometry.rays.is_empty());
        // X v (2X - 1): the vertical line x = 1
        let x = ps.coordinate(0).unwrap();
        let f = x.join(&x.times(2, ps.pres.ngens()).shift(&rat_int(-1)));
        let curve = corner_locus(&f, &ps).unwrap();
        assert!(curve.geometry.vertices.is_empty());
        // clipped to the quadrant x,y <= 2: a vertical ray going down
        assert_eq!(curve.geometry.rays.len(), 1);
        assert_eq!(curve.geometry.rays[0].1, vec![0, -1]);
    }

    #[test]
    fn oracle_agreement() {
        let ps = quadrant(1);
        let f = ps
            .coordinate(0)
            .unwrap()
            .join(&ps.coordinate(1).unwrap())
            .join(&TropPoly::constant(ps.pres.ngens(), rat_int(-1)));
        let curve = corner_locus(&f, &ps).unwrap();
        let window = RationalPolytope::square(rat_int(-4), rat_int(1)).unwrap();
        let oracle = grid_oracle(&f, &ps, &Rat::new(1, 8), &window).unwrap();
        assert!(!oracle.marked.is_empty());
        assert!(oracle_agrees(&curve, &oracle));
        // constant polynomial: no marked cells
        let c = TropPoly::constant(ps.pres.ngens(), rat_int(0));
        let oc = grid_oracle(&c, &ps, &Rat::new(1, 8), &window).unwrap();
        assert!(oc.marked.is_empty());
    }

    #[test]
    fn oracle_agreement_on_random_polynomials() {
        let mut rng = ChaCha8Rng::seed_from_u64(2025);
        let ps = quadrant(2);
        let window = RationalPolytope::square(rat_int(-4), rat_int(2)).unwrap();
        for h in [Rat::new(1, 4), Rat::new(1, 8)] {
            for _ in 0..12 {
                let nterms = rng.gen_range(3..=6);
                let e = TropPoly::from_terms(
                    (0..nterms)
                        .map(|_| crate::presentation::Term {
                            exps: vec![rng.gen_range(0..3u32), rng.gen_range(0..3u32)],
                            coeff: rat_int(rng.gen_range(-3..=3)),
                        })
                        .collect(),
                );
                let curve = corner_locus(&e, &ps).unwrap();
                let oracle = grid_oracle(&e, &ps, &h, &window).unwrap();
                assert!(oracle_agrees(&curve, &oracle), "disagreement for {e:?} at h={h}");
            }
        }
    }

    #[test]
    fn tropicalization_subadditive_under_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let ps = quadrant(2);
        for _ in 0..100 {
            let mk = |rng: &mut ChaCha8Rng| {
                let n = rng.gen_range(1..=3);
                let terms: Vec<TTerm> = (0..n)
                    .map(|i| TTerm {
                        exps: vec![rng.gen_range(0..2u32) + i as u32, rng.gen_range(0..2u32)],
                        tpow: rng.gen_range(0..3u32),
                        coeff: rat_int(*[-2, -1, 1, 2, 3].get(rng.gen_range(0..5)).unwrap()),
                    })
                    .collect();
                // dedupe keys
                TPoly::new(vec!["x".into(), "y".into()], dedupe(terms))
            };
            let (Ok(f), Ok(g)) = (mk(&mut rng), mk(&mut rng)) else {
                continue;
            };
            let Ok(prod) = f.product(&g) else { continue };
            let tf = tropicalize_poly(&f, &ps).unwrap();
            let tg = tropicalize_poly(&g, &ps).unwrap();
            let tp = tropicalize_poly(&prod, &ps).unwrap();
            // trop(fg) <= trop(f) + trop(g) always
            assert_eq!(
                ps.pres.leq(&tp, &tf.plus(&tg)).unwrap(),
                crate::presentation::Tri::True
            );
        }
    }

    fn dedupe(terms: Vec<TTerm>) -> Vec<TTerm> {
        let mut out: Vec<TTerm> = Vec::new();
        for t in terms {
            if !out.iter().any(|u| u.exps == t.exps && u.tpow == t.tpow) {
                out.push(t);
            }
        }
        out
    }

    #[test]
    fn relations_invariant_under_scaling_and_twists() {
        let ps = quadrant(1);
        let f = tpoly(&["x", "y"], &[(&[1, 0], 0, 1), (&[0, 1], 0, 1), (&[0, 0], 1, 1)]);
        // scaling by a nonzero rational changes nothing
        let scaled = TPoly::new(
            f.vars.clone(),
            f.terms
                .iter()
                .map(|t| TTerm {
                    exps: t.exps.clone(),
                    tpow: t.tpow,
                    coeff: &t.coeff * rat_int(3),
                })
                .collect(),
        )
        .unwrap();
        let a = trop_relations(&[f.clone()], &ps).unwrap();
        let b = trop_relations(&[scaled], &ps).unwrap();
        assert_eq!(a.relations(), b.relations());
        // multiplying by t^k shifts every relation by the unit -k
        let twisted = TPoly::new(
            f.vars.clone(),
            f.terms
                .iter()
                .map(|t| TTerm {
                    exps: t.exps.clone(),
                    tpow: t.tpow + 2,
                    coeff: t.coeff.clone(),
                })
                .collect(),
        )
        .unwrap();
        let c = trop_relations(&[twisted], &ps).unwrap();
        let base = ps.pres.relations().len();
        assert_eq!(a.relations().len(), c.relations().len());
        for (ra, rc) in a.relations()[base..].iter().zip(&c.relations()[base..]) {
            assert!(ps
                .pres
                .eq(&ra.lhs.shift(&rat_int(-2)), &rc.lhs)
                .unwrap()
                .is_equal());
            assert!(ps
                .pres
                .eq(&ra.rhs.shift(&rat_int(-2)), &rc.rhs)
                .unwrap()
                .is_equal());
        }
    }
}
