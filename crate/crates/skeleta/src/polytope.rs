//! Rational polytopes and fans, their tropical-function semirings, face
//! lattices, integral-model spectra, real-point evaluation and the
//! refinement base change. Everything is exact: vertices are enumerated
//! by active-set solving, and a polytope semiring is presented by one
//! contracting generator per monoid generator of the functionals
//! bounded above on the polytope.

use crate::error::{Error, Result};
use crate::geometry::{
    dot_ii, dot_ir, fmt_rat, gcd_int, integer_kernel, rat_int, v_representation, HalfSpace, Int,
    Rat,
};
use crate::monoid_ideal::AffineMonoid;
use crate::presentation::{Generator, Presentation, RelKind, Relation, Sort, Term, TropPoly};
use crate::semifield::SemifieldTag;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

pub const POLYTOPE_RANK_CAP: usize = 3;

/// A rational polytope (possibly unbounded, but always with a vertex)
/// described by supporting halfspaces `<x, f> <= lambda`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalPolytope {
    pub rank: usize,
    pub halfspaces: Vec<(Vec<Int>, Rat)>,
    vertices: Vec<Vec<Rat>>,
    rays: Vec<Vec<Int>>,
}

impl RationalPolytope {
    pub fn new(rank: usize, halfspaces: Vec<(Vec<Int>, Rat)>) -> Result<Self> {
        if halfspaces.iter().any(|(f, _)| f.len() != rank) {
            return Err(Error::Invalid("halfspace arity mismatch".into()));
        }
        let hs: Vec<HalfSpace> = halfspaces
            .iter()
            .map(|(f, l)| HalfSpace::new(f.iter().map(|&x| rat_int(x)).collect(), l.clone()))
            .collect();
        let vrep = v_representation(&hs, rank);
        if vrep.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        if !vrep.lineality.is_empty() {
            return Err(Error::NoVertex);
        }
        Ok(RationalPolytope {
            rank,
            halfspaces,
            vertices: vrep.vertices,
            rays: vrep.rays,
        })
    }

    pub fn interval(a: Rat, b: Rat) -> Result<Self> {
        RationalPolytope::new(1, vec![(vec![1], b), (vec![-1], -a)])
    }

    pub fn point() -> Result<Self> {
        RationalPolytope::new(0, vec![])
    }

    /// {x_i <= lambda for all i}: the lower quadrant/orthant.
    pub fn lower_orthant(rank: usize, lambda: Rat) -> Result<Self> {
        let halfspaces = (0..rank)
            .map(|i| {
                let mut f = vec![0; rank];
                f[i] = 1;
                (f, lambda.clone())
            })
            .collect();
        RationalPolytope::new(rank, halfspaces)
    }

    pub fn square(a: Rat, b: Rat) -> Result<Self> {
        RationalPolytope::new(
            2,
            vec![
                (vec![1, 0], b.clone()),
                (vec![-1, 0], -a.clone()),
                (vec![0, 1], b),
                (vec![0, -1], -a),
            ],
        )
    }

    /// conv{0, e1, e2}.
    pub fn standard_triangle() -> Result<Self> {
        RationalPolytope::new(
            2,
            vec![
                (vec![-1, 0], Rat::zero()),
                (vec![0, -1], Rat::zero()),
                (vec![1, 1], rat_int(1)),
            ],
        )
    }

    pub fn vertices(&self) -> &[Vec<Rat>] {
        &self.vertices
    }

    pub fn rays(&self) -> &[Vec<Int>] {
        &self.rays
    }

    pub fn is_compact(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        x.len() == self.rank
            && self
                .halfspaces
                .iter()
                .all(|(f, l)| dot_ir(f, x) <= *l)
    }

    /// The affine monoid of lattice points of the dual cone over the
    /// polytope placed at height one, in Z^(rank+1); the last coordinate
    /// is the twist (a monomial (m, n) is the function X_{-m} - n).
    pub fn cone_over(&self) -> Result<AffineMonoid> {
        self.cone_over_scaled(1)
    }

    /// Like `cone_over` but with the twist coordinate counting steps of
    /// 1/denom (needed when vertex coordinates are rational).
    pub fn cone_over_scaled(&self, denom: Int) -> Result<AffineMonoid> {
        let d = self.rank + 1;
        let mut ineqs: Vec<Vec<Int>> = Vec::new();
        for v in &self.vertices {
            // <v, m> + n/denom >= 0, denominators cleared
            let mut row: Vec<Rat> = v.clone();
            row.push(Rat::new(1, denom));
            ineqs.push(crate::geometry::primitive(&row));
        }
        for r in &self.rays {
            let mut row = r.clone();
            row.push(0);
            ineqs.push(row);
        }
        AffineMonoid::new(d, ineqs)
    }

    /// The presented semiring of tropical functions on the polytope: one
    /// contracting generator per non-twist element of a generating set
    /// of the cone monoid, with the monoid relations between them. The
    /// monoid generating set (rather than a bare list of coordinate
    /// functionals) is what makes the Boolean spectrum see exactly the
    /// faces.
    pub fn semiring(&self) -> Result<PolytopeSemiring> {
        if self.rank > POLYTOPE_RANK_CAP {
            return Err(Error::RankTooLarge(self.rank, POLYTOPE_RANK_CAP));
        }
        // the twist denominator: vertex coordinates may be rational
        let denom: Int = self
            .vertices
            .iter()
            .flatten()
            .fold(1, |acc, x| acc / gcd_int(acc, *x.denom()) * *x.denom());
        let monoid = self.cone_over_scaled(denom)?;
        let mut functionals: Vec<Vec<Int>> = Vec::new();
        let mut shifts: Vec<Rat> = Vec::new();
        for g in generating_set(&monoid)? {
            let m: Vec<Int> = g[..self.rank].iter().map(|&x| -x).collect();
            if m.iter().all(|&x| x == 0) {
                // a pure twist element: a base constant
                continue;
            }
            let shift = Rat::new(g[self.rank], denom);
            debug_assert_eq!(shift, self.sup(&m), "generator shift must be the sup");
            functionals.push(m);
            shifts.push(shift);
        }
        let all_integral = shifts.iter().all(|s| s.is_integer())
            && self.halfspaces.iter().all(|(_, l)| l.is_integer());
        let base = if all_integral {
            SemifieldTag::Int
        } else {
            SemifieldTag::Rat
        };
        let k = functionals.len();
        let gens: Vec<Generator> = (0..k)
            .map(|j| Generator {
                name: gen_name(j),
                sort: Sort::Contracting,
            })
            .collect();
        let mut relations: Vec<Relation> = Vec::new();
        // monoid relations: the integer kernel of (a_j) -> sum a_j m_j
        let rows: Vec<Vec<Int>> = (0..self.rank)
            .map(|d| functionals.iter().map(|m| m[d]).collect())
            .collect();
        for kappa in integer_kernel(&rows, k) {
            let mut pos = vec![0u32; k];
            let mut neg = vec![0u32; k];
            for (j, &c) in kappa.iter().enumerate() {
                if c > 0 {
                    pos[j] = c as u32;
                } else {
                    neg[j] = (-c) as u32;
                }
            }
            let s_pos: Rat = pos
                .iter()
                .zip(&shifts)
                .map(|(&a, s)| Rat::from_integer(a as Int) * s)
                .sum();
            let s_neg: Rat = neg
                .iter()
                .zip(&shifts)
                .map(|(&a, s)| Rat::from_integer(a as Int) * s)
                .sum();
            // functions agree: pos-term = neg-term + (s_neg - s_pos);
            // orient so the constant is nonpositive
            let (lhs_e, rhs_e, c) = if s_neg <= s_pos {
                (pos, neg, &s_neg - &s_pos)
            } else {
                (neg, pos, &s_pos - &s_neg)
            };
            relations.push(Relation {
                kind: RelKind::Eq,
                lhs: TropPoly::from_terms(vec![Term {
                    exps: lhs_e,
                    coeff: Rat::zero(),
                }]),
                rhs: TropPoly::from_terms(vec![Term {
                    exps: rhs_e,
                    coeff: c,
                }]),
            });
        }
        // the halfspace bounds are implied: every halfspace functional is
        // an N-combination of generators plus twists, and its combined
        // sup bound is at most lambda
        let mut halfspace_combos = Vec::new();
        for (f, _) in &self.halfspaces {
            let combo = combo_for(&functionals, f).ok_or_else(|| {
                Error::Invalid(format!("halfspace functional {f:?} not generated"))
            })?;
            halfspace_combos.push(combo);
        }
        let pres = Presentation::new(base, gens, relations)?;
        Ok(PolytopeSemiring {
            polytope: self.clone(),
            pres,
            functionals,
            shifts,
            halfspace_combos,
        })
    }

    /// sup of the functional m over the polytope (finite by membership
    /// in the dual of the recession cone).
    fn sup(&self, m: &[Int]) -> Rat {
        self.vertices
            .iter()
            .map(|v| dot_ir(m, v))
            .max()
            .expect("polytope has a vertex")
    }
}


/// A finite generating set of a (possibly non-pointed) affine monoid:
/// plus/minus a basis of the invertible directions, together with lifts
/// of the Hilbert basis of the pointed quotient.
pub fn generating_set(monoid: &AffineMonoid) -> Result<Vec<Vec<Int>>> {
    let lin = monoid.lineality().to_vec();
    if lin.is_empty() {
        return monoid.hilbert_basis();
    }
    let r = monoid.rank;
    let mut gens: Vec<Vec<Int>> = Vec::new();
    for l in &lin {
        gens.push(l.clone());
        gens.push(l.iter().map(|x| -x).collect());
    }
    let w = unimodular_complement(&lin, r)?;
    if !w.is_empty() {
        let ineqs: Vec<Vec<Int>> = monoid
            .inequalities
            .iter()
            .map(|g| w.iter().map(|wi| dot_ii(g, wi)).collect())
            .collect();
        let pointed = AffineMonoid::new(w.len(), ineqs)?;
        for h in pointed.hilbert_basis()? {
            let lifted: Vec<Int> = (0..r)
                .map(|d| h.iter().zip(&w).map(|(&c, wi)| c * wi[d]).sum())
                .collect();
            gens.push(lifted);
        }
    }
    gens.sort();
    gens.dedup();
    Ok(gens)
}

fn gen_name(j: usize) -> String {
    const NAMES: [&str; 8] = ["U", "V", "W", "P", "Q", "R", "S", "T"];
    if j < NAMES.len() {
        NAMES[j].to_string()
    } else {
        format!("G{j}")
    }
}

/// Completes a saturated lattice basis to a unimodular basis of Z^r by
/// small search; returns the complementary vectors.
fn unimodular_complement(lattice: &[Vec<Int>], r: usize) -> Result<Vec<Vec<Int>>> {
    let need = r - lattice.len();
    if need == 0 {
        return Ok(vec![]);
    }
    let mut chosen: Vec<Vec<Int>> = Vec::new();
    'next: while chosen.len() < need {
        // try small candidate vectors extending to full rank with
        // determinant +-1 on some completion check
        let mut cand = vec![-2 as Int; r];
        loop {
            let mut rows: Vec<Vec<Int>> = lattice.to_vec();
            rows.extend(chosen.iter().cloned());
            rows.push(cand.clone());
            if lattice_is_saturated_basis(&rows, r) {
                chosen.push(cand);
                continue 'next;
            }
            let mut j = 0;
            loop {
                if j == r {
                    return Err(Error::Invalid(
                        "no unimodular completion in search window".into(),
                    ));
                }
                if cand[j] < 2 {
                    cand[j] += 1;
                    break;
                }
                cand[j] = -2;
                j += 1;
            }
        }
    }
    Ok(chosen)
}

/// The rows generate a saturated sublattice of their rank (every integer
/// kernel direction of the orthogonal complement is hit).
fn lattice_is_saturated_basis(rows: &[Vec<Int>], r: usize) -> bool {
    // saturated iff the HNF pivots are all 1 after completing to square
    let h = crate::geometry::row_hnf(rows);
    if h.len() != rows.len().min(r) || h.len() != rows.len() {
        return false;
    }
    // pivots all 1: unimodular when square, primitively generated otherwise
    h.iter().all(|row| {
        row.iter()
            .position(|&x| x != 0)
            .is_some_and(|c| row[c] == 1)
    })
}

/// Expresses a functional as an N-combination of the generators (small
/// bounded search; generators and targets are desk-scale).
fn combo_for(gens: &[Vec<Int>], target: &[Int]) -> Option<Vec<u32>> {
    fn rec(gens: &[Vec<Int>], target: Vec<Int>, start: usize, acc: &mut Vec<u32>, depth: u32) -> Option<Vec<u32>> {
        if target.iter().all(|&x| x == 0) {
            return Some(acc.clone());
        }
        if depth == 0 {
            return None;
        }
        for j in start..gens.len() {
            let next: Vec<Int> = target.iter().zip(&gens[j]).map(|(t, g)| t - g).collect();
            // prune: norm must not grow
            let n0: Int = target.iter().map(|x| x.abs()).sum();
            let n1: Int = next.iter().map(|x| x.abs()).sum();
            if n1 > n0 {
                continue;
            }
            acc[j] += 1;
            if let Some(found) = rec(gens, next, j, acc, depth - 1) {
                return Some(found);
            }
            acc[j] -= 1;
        }
        None
    }
    let mut acc = vec![0u32; gens.len()];
    rec(gens, target.to_vec(), 0, &mut acc, 24)
}

/// A polytope semiring: the presentation together with the generator
/// dictionary (functional and shift of each generator: generator j is
/// the function X_{m_j} - s_j with s_j = sup of m_j).
#[derive(Debug, Clone)]
pub struct PolytopeSemiring {
    pub polytope: RationalPolytope,
    pub pres: Presentation,
    pub functionals: Vec<Vec<Int>>,
    pub shifts: Vec<Rat>,
    halfspace_combos: Vec<Vec<u32>>,
}

impl PolytopeSemiring {
    /// The element X_m + c for an integer functional m bounded above on
    /// the polytope.
    pub fn functional_poly(&self, m: &[Int], c: &Rat) -> Result<TropPoly> {
        let combo = combo_for(&self.functionals, m)
            .ok_or_else(|| Error::Invalid(format!("functional {m:?} not bounded above")))?;
        let shift: Rat = combo
            .iter()
            .zip(&self.shifts)
            .map(|(&a, s)| Rat::from_integer(a as Int) * s)
            .sum();
        Ok(TropPoly::from_terms(vec![Term {
            exps: combo,
            coeff: shift + c,
        }]))
    }

    /// The coordinate function x_d as an element (compact polytopes, or
    /// whenever +e_d is bounded above).
    pub fn coordinate(&self, d: usize) -> Result<TropPoly> {
        let mut m = vec![0; self.polytope.rank];
        m[d] = 1;
        self.functional_poly(&m, &Rat::zero())
    }

    /// Evaluates an element at a rational point of the polytope.
    pub fn eval_real(&self, e: &TropPoly, r: &[Rat]) -> Result<Option<Rat>> {
        if !self.polytope.contains(r) {
            return Err(Error::PointOutside);
        }
        let values: Vec<crate::semifield::SemifieldValue> = self
            .functionals
            .iter()
            .zip(&self.shifts)
            .map(|(m, s)| crate::semifield::SemifieldValue::rational(dot_ir(m, r) - s))
            .collect();
        let v = self.pres.eval(e, &values)?;
        Ok(v.payload().cloned())
    }

    /// The single-term integral element vanishing exactly on a face: the
    /// sum of the defining halfspace deficits.
    pub fn face_element(&self, face: &Face) -> Result<TropPoly> {
        let k = self.functionals.len();
        if face.active.is_empty() {
            return Ok(TropPoly::zero(k));
        }
        let mut exps = vec![0u32; k];
        let mut shift = Rat::zero();
        for &i in &face.active {
            for (j, &a) in self.halfspace_combos[i].iter().enumerate() {
                exps[j] += a;
            }
            let combo_shift: Rat = self.halfspace_combos[i]
                .iter()
                .zip(&self.shifts)
                .map(|(&a, s)| Rat::from_integer(a as Int) * s)
                .sum();
            shift += self.polytope.halfspaces[i].1.clone() - combo_shift;
        }
        Ok(TropPoly::from_terms(vec![Term {
            exps,
            coeff: -shift,
        }]))
    }
}

/// A face of a polytope: the (closed) active set of halfspace indices
/// and the dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub active: Vec<usize>,
    pub dim: usize,
}

impl Face {
    /// F <= G in the face lattice iff active(F) contains active(G).
    pub fn leq(&self, other: &Face) -> bool {
        other.active.iter().all(|i| self.active.contains(i))
    }
}

/// All nonempty faces (including the polytope itself), by active-set
/// enumeration with exact feasibility.
pub fn face_lattice(p: &RationalPolytope) -> Result<Vec<Face>> {
    if p.rank > POLYTOPE_RANK_CAP {
        return Err(Error::RankTooLarge(p.rank, POLYTOPE_RANK_CAP));
    }
    let m = p.halfspaces.len();
    let mut faces: Vec<Face> = Vec::new();
    for mask in 0..(1u32 << m) {
        let subset: Vec<usize> = (0..m).filter(|&i| mask & (1 << i) != 0).collect();
        if let Some(face) = face_of_active(p, &subset) {
            if !faces.contains(&face) {
                faces.push(face);
            }
        }
    }
    faces.sort_by_key(|f| (f.dim, f.active.clone()));
    Ok(faces)
}

/// The face cut by turning the given halfspaces into equalities; None
/// when empty. The returned active set is the closure (every halfspace
/// identically tight on the face).
fn face_of_active(p: &RationalPolytope, subset: &[usize]) -> Option<Face> {
    let mut hs: Vec<HalfSpace> = p
        .halfspaces
        .iter()
        .map(|(f, l)| HalfSpace::new(f.iter().map(|&x| rat_int(x)).collect(), l.clone()))
        .collect();
    for &i in subset {
        let (f, l) = &p.halfspaces[i];
        hs.push(HalfSpace::new(f.iter().map(|&x| rat_int(-x)).collect(), -l.clone()));
    }
    let vrep = v_representation(&hs, p.rank);
    if vrep.is_empty() {
        return None;
    }
    // closure: all constraints tight on every vertex and flat on every ray
    let active: Vec<usize> = (0..p.halfspaces.len())
        .filter(|&i| {
            let (f, l) = &p.halfspaces[i];
            vrep.vertices.iter().all(|v| dot_ir(f, v) == *l)
                && vrep.rays.iter().all(|r| dot_ii(f, r) == 0)
        })
        .collect();
    // dimension of the affine hull
    let v0 = &vrep.vertices[0];
    let mut rows: Vec<Vec<Rat>> = vrep.vertices[1..]
        .iter()
        .map(|v| v.iter().zip(v0).map(|(a, b)| a - b).collect())
        .collect();
    rows.extend(
        vrep.rays
            .iter()
            .map(|r| r.iter().map(|&x| rat_int(x)).collect::<Vec<Rat>>()),
    );
    let dim = crate::geometry::rank(&rows);
    Some(Face { active, dim })
}

/// Certificate that the open-set poset of the integral polytope spectrum
/// is isomorphic to the poset of unions of faces.
#[derive(Debug)]
pub struct FaceSpectrumIso {
    pub faces: Vec<Face>,
    /// face index assigned to each spectrum point
    pub point_face: Vec<usize>,
    pub opens_count: usize,
    pub downsets_count: usize,
}

/// Matches the spectrum of the integral model with the face lattice:
/// points biject with faces (reversing specialization against
/// inclusion), and opens biject with unions of faces.
pub fn integral_spectrum_vs_faces(p: &RationalPolytope) -> Result<FaceSpectrumIso> {
    let ps = p.semiring()?;
    let spec = crate::spectrum::enumerate_points(&ps.pres)?;
    let faces = face_lattice(p)?;
    let mut point_face = Vec::with_capacity(spec.points.len());
    for pt in &spec.points {
        // the face where every alive generator function vanishes
        let mut hs: Vec<HalfSpace> = p
            .halfspaces
            .iter()
            .map(|(f, l)| HalfSpace::new(f.iter().map(|&x| rat_int(x)).collect(), l.clone()))
            .collect();
        for (j, &alive) in pt.assignment.iter().enumerate() {
            if alive {
                // <x, m_j> = s_j
                let n: Vec<Rat> = ps.functionals[j].iter().map(|&x| rat_int(x)).collect();
                hs.push(HalfSpace::new(n.clone(), ps.shifts[j].clone()));
                hs.push(HalfSpace::new(n.iter().map(|x| -x).collect(), -ps.shifts[j].clone()));
            }
        }
        let vrep = v_representation(&hs, p.rank);
        if vrep.is_empty() {
            return Err(Error::Invalid("spectrum point cuts an empty face".into()));
        }
        let active: Vec<usize> = (0..p.halfspaces.len())
            .filter(|&i| {
                let (f, l) = &p.halfspaces[i];
                vrep.vertices.iter().all(|v| dot_ir(f, v) == *l)
                    && vrep.rays.iter().all(|r| dot_ii(f, r) == 0)
            })
            .collect();
        let idx = faces
            .iter()
            .position(|fc| fc.active == active)
            .ok_or_else(|| Error::Invalid("point face not in the lattice".into()))?;
        point_face.push(idx);
    }
    // bijectivity
    let mut seen = point_face.clone();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != faces.len() || point_face.len() != faces.len() {
        return Err(Error::Invalid(format!(
            "points ({}) do not biject with faces ({})",
            point_face.len(),
            faces.len()
        )));
    }
    // order: j specializes from i iff alive(j) is contained in alive(i)
    // iff F_i is a sub-face of F_j; the full-face point is the unique
    // closed point
    for i in 0..spec.points.len() {
        for j in 0..spec.points.len() {
            if i == j {
                continue;
            }
            let spec_rel = spec.specializes(i, j);
            let face_rel = faces[point_face[i]].leq(&faces[point_face[j]]);
            if spec_rel != face_rel {
                return Err(Error::Invalid(
                    "specialization does not match face inclusion".into(),
                ));
            }
        }
    }
    // opens correspond to unions of faces = down-closed face families
    let opens = spec.opens();
    let mut families: Vec<Vec<usize>> = Vec::new();
    for open in &opens {
        let mut fam: Vec<usize> = open.iter().map(|&i| point_face[i]).collect();
        fam.sort_unstable();
        if families.contains(&fam) {
            return Err(Error::Invalid("two opens give one face union".into()));
        }
        // down-closed under face inclusion
        for (fi, f) in faces.iter().enumerate() {
            if fam.iter().any(|&g| f.leq(&faces[g])) && !fam.contains(&fi) {
                return Err(Error::Invalid("open face family is not down-closed".into()));
            }
        }
        families.push(fam);
    }
    let downsets = count_downsets(&faces);
    if families.len() != downsets {
        return Err(Error::Invalid(format!(
            "opens ({}) do not exhaust face unions ({downsets})",
            families.len()
        )));
    }
    Ok(FaceSpectrumIso {
        faces,
        point_face,
        opens_count: opens.len(),
        downsets_count: downsets,
    })
}

fn count_downsets(faces: &[Face]) -> usize {
    let n = faces.len();
    let mut count = 0;
    'mask: for mask in 0..(1u32 << n) {
        for i in 0..n {
            if mask & (1 << i) != 0 {
                for j in 0..n {
                    if faces[j].leq(&faces[i]) && mask & (1 << j) == 0 {
                        continue 'mask;
                    }
                }
            }
        }
        count += 1;
    }
    count
}

/// Certificate for the refinement base change: refining the value group
/// by 1/k matches scaling the polytope by k on the cone monoids.
#[derive(Debug)]
pub struct RefinementCertificate {
    pub k: i64,
    pub refined: AffineMonoid,
    pub scaled: AffineMonoid,
}

pub fn refinement_base_change(p: &RationalPolytope, k: i64) -> Result<RefinementCertificate> {
    if !(1..=6).contains(&k) {
        return Err(Error::Invalid("refinement degree must be in 1..=6".into()));
    }
    if p.rank > POLYTOPE_RANK_CAP {
        return Err(Error::RankTooLarge(p.rank, POLYTOPE_RANK_CAP));
    }
    // monoid of (m, j) with j counting twist steps of 1/k: from a vertex
    // inequality <v, m> + n >= 0 with n = j/k we get <kv, m> + j >= 0
    let mut refined_ineqs: Vec<Vec<Int>> = Vec::new();
    for v in &p.vertices {
        let mut row: Vec<Rat> = v.iter().map(|x| x * rat_int(k as Int)).collect();
        row.push(Rat::from_integer(1));
        refined_ineqs.push(crate::geometry::primitive(&row));
    }
    for r in &p.rays {
        let mut row = r.clone();
        row.push(0);
        refined_ineqs.push(row);
    }
    let refined = AffineMonoid::new(p.rank + 1, refined_ineqs)?;
    // scaled polytope kDelta
    let scaled_poly = RationalPolytope::new(
        p.rank,
        p.halfspaces
            .iter()
            .map(|(f, l)| (f.clone(), l * rat_int(k as Int)))
            .collect(),
    )?;
    let scaled = scaled_poly.cone_over()?;
    // the identity map must carry one monoid onto the other
    let same = if refined.pointed && scaled.pointed && p.rank + 1 <= 4 {
        let hb_r = refined.hilbert_basis()?;
        let hb_s = scaled.hilbert_basis()?;
        hb_r.iter().all(|x| scaled.contains(x)) && hb_s.iter().all(|x| refined.contains(x))
    } else {
        // fall back to sampled mutual membership
        sample_box(p.rank + 1, 3)
            .into_iter()
            .all(|x| refined.contains(&x) == scaled.contains(&x))
    };
    if !same {
        return Err(Error::Invalid("refinement monoids differ".into()));
    }
    Ok(RefinementCertificate {
        k,
        refined,
        scaled,
    })
}

fn sample_box(dim: usize, radius: Int) -> Vec<Vec<Int>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        let mut next = Vec::new();
        for v in &out {
            for x in -radius..=radius {
                let mut w = v.clone();
                w.push(x);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// A fan: finitely many cones (polytopes with zero offsets) in a common
/// lattice, pairwise intersecting in faces.
#[derive(Debug, Clone)]
pub struct Fan {
    pub rank: usize,
    pub cones: Vec<RationalPolytope>,
}

impl Fan {
    pub fn new(rank: usize, cones: Vec<RationalPolytope>) -> Result<Self> {
        for c in &cones {
            if c.rank != rank {
                return Err(Error::IncompatibleFan("mixed ranks".into()));
            }
            if c.halfspaces.iter().any(|(_, l)| !l.is_zero()) {
                return Err(Error::IncompatibleFan("cone with nonzero offset".into()));
            }
        }
        // pairwise intersections must be faces of both
        for i in 0..cones.len() {
            for j in i + 1..cones.len() {
                let mut hs = cones[i].halfspaces.clone();
                hs.extend(cones[j].halfspaces.iter().cloned());
                let inter = RationalPolytope::new(rank, hs);
                let inter = match inter {
                    Ok(p) => p,
                    Err(Error::EmptyPolytope) => continue,
                    Err(e) => return Err(e),
                };
                for c in [&cones[i], &cones[j]] {
                    let is_face = face_lattice(c)?.iter().any(|f| {
                        face_of_active(c, &f.active).is_some_and(|_| {
                            // compare point sets through vertices and rays
                            let mut hs2: Vec<HalfSpace> = c
                                .halfspaces
                                .iter()
                                .map(|(fv, l)| {
                                    HalfSpace::new(
                                        fv.iter().map(|&x| rat_int(x)).collect(),
                                        l.clone(),
                                    )
                                })
                                .collect();
                            for &a in &f.active {
                                let (fv, l) = &c.halfspaces[a];
                                hs2.push(HalfSpace::new(
                                    fv.iter().map(|&x| rat_int(-x)).collect(),
                                    -l.clone(),
                                ));
                            }
                            let vr = v_representation(&hs2, rank);
                            vr.vertices == inter.vertices && vr.rays == inter.rays
                        })
                    });
                    if !is_face {
                        return Err(Error::IncompatibleFan(format!(
                            "cones {i} and {j} do not meet in a face"
                        )));
                    }
                }
            }
        }
        Ok(Fan { rank, cones })
    }
}

/// Builds the chart complex of a fan from per-cone expansion radii:
/// chart c is the expansion of cone c, and overlapping charts glue along
/// their (affine-open) intersections.
pub fn fan_complex(fan: &Fan, expansions: &[Rat]) -> Result<crate::complexes::CellComplex> {
    if fan.rank > 2 {
        return Err(Error::RankTooLarge(fan.rank, 2));
    }
    if expansions.len() != fan.cones.len() {
        return Err(Error::Invalid("one expansion radius per cone".into()));
    }
    if expansions.iter().any(|r| r.is_negative()) {
        return Err(Error::Invalid("expansion radii must be nonnegative".into()));
    }
    let charts: Vec<RationalPolytope> = fan
        .cones
        .iter()
        .zip(expansions)
        .map(|(c, r)| {
            RationalPolytope::new(
                fan.rank,
                c.halfspaces
                    .iter()
                    .map(|(f, l)| (f.clone(), l + r))
                    .collect(),
            )
        })
        .collect::<Result<_>>()?;
    crate::complexes::glue_polytope_charts(&charts)
}

/// JSON shape {rank, halfspaces: [{f, lambda}]}.
#[derive(Debug, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub rank: usize,
    pub halfspaces: Vec<HalfSpaceJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct HalfSpaceJson {
    pub f: Vec<i64>,
    pub lambda: String,
}

pub fn polytope_from_json(j: &PolytopeJson) -> Result<RationalPolytope> {
    let halfspaces = j
        .halfspaces
        .iter()
        .map(|h| {
            Ok((
                h.f.iter().map(|&x| x as Int).collect(),
                crate::semifield::parse_rat(&h.lambda)?,
            ))
        })
        .collect::<Result<_>>()?;
    RationalPolytope::new(j.rank, halfspaces)
}

pub fn polytope_to_json(p: &RationalPolytope) -> PolytopeJson {
    PolytopeJson {
        rank: p.rank,
        halfspaces: p
            .halfspaces
            .iter()
            .map(|(f, l)| HalfSpaceJson {
                f: f.iter().map(|&x| x as i64).collect(),
                lambda: fmt_rat(l),
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Tri;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cone_over_shapes() {
        // half-line (-inf, 0]: dual cone of functions is N^2 up to sign
        let half = RationalPolytope::new(1, vec![(vec![1], Rat::zero())]).unwrap();
        let m = half.cone_over().unwrap();
        assert!(m.pointed);
        assert_eq!(m.hilbert_basis().unwrap().len(), 2);
        // [0,1]: {(m, n): n >= 0, m + n >= 0}
        let i01 = RationalPolytope::interval(Rat::zero(), rat_int(1)).unwrap();
        let m = i01.cone_over().unwrap();
        assert!(m.contains(&[1, 0]));
        assert!(m.contains(&[-1, 1]));
        assert!(!m.contains(&[-1, 0]));
        // point at rank 0: N (twist only)
        let pt = RationalPolytope::point().unwrap();
        let m = pt.cone_over().unwrap();
        assert_eq!(m.rank, 1);
        assert!(m.contains(&[1]) && !m.contains(&[-1]));
    }

    #[test]
    fn interval_semiring_presentation() {
        let ps = RationalPolytope::interval(Rat::zero(), rat_int(2))
            .unwrap()
            .semiring()
            .unwrap();
        assert_eq!(ps.pres.ngens(), 2);
        // U + V = -2 (the length relation)
        assert_eq!(ps.pres.relations().len(), 1);
        let uv = ps.pres.gen_poly("U").unwrap().plus(&ps.pres.gen_poly("V").unwrap());
        assert!(ps
            .pres
            .eq(&uv, &TropPoly::constant(2, rat_int(-2)))
            .unwrap()
            .is_equal());
        // quadrant {x, y <= 3}: two generators, no relations
        let quad = RationalPolytope::lower_orthant(2, rat_int(3)).unwrap().semiring().unwrap();
        assert_eq!(quad.pres.ngens(), 2);
        assert!(quad.pres.relations().is_empty());
        // point: Zv itself
        let pt = RationalPolytope::point().unwrap().semiring().unwrap();
        assert_eq!(pt.pres.ngens(), 0);
    }

    #[test]
    fn face_lattices() {
        let i = RationalPolytope::interval(Rat::zero(), rat_int(1)).unwrap();
        assert_eq!(face_lattice(&i).unwrap().len(), 3);
        let sq = RationalPolytope::square(Rat::zero(), rat_int(1)).unwrap();
        assert_eq!(face_lattice(&sq).unwrap().len(), 9);
        let tri = RationalPolytope::standard_triangle().unwrap();
        assert_eq!(face_lattice(&tri).unwrap().len(), 7);
    }

    #[test]
    fn spectrum_matches_faces() {
        for p in [
            RationalPolytope::interval(Rat::zero(), rat_int(1)).unwrap(),
            RationalPolytope::standard_triangle().unwrap(),
            RationalPolytope::square(Rat::zero(), rat_int(1)).unwrap(),
        ] {
            let iso = integral_spectrum_vs_faces(&p).unwrap();
            assert_eq!(iso.opens_count, iso.downsets_count);
        }
        // interval: 5 opens
        let i = RationalPolytope::interval(Rat::zero(), rat_int(1)).unwrap();
        assert_eq!(integral_spectrum_vs_faces(&i).unwrap().opens_count, 5);
        // point: 2 opens
        let pt = RationalPolytope::point().unwrap();
        assert_eq!(integral_spectrum_vs_faces(&pt).unwrap().opens_count, 2);
    }

    #[test]
    fn absolute_value_on_symmetric_interval() {
        let ps = RationalPolytope::interval(rat_int(-1), rat_int(1))
            .unwrap()
            .semiring()
            .unwrap();
        let x = ps.coordinate(0).unwrap();
        let minus_x = ps.functional_poly(&[-1], &Rat::zero()).unwrap();
        let abs = x.join(&minus_x);
        let v = ps.eval_real(&abs, &[Rat::new(1, 2)]).unwrap().unwrap();
        assert_eq!(v, Rat::new(1, 2));
        assert!(matches!(
            ps.eval_real(&abs, &[rat_int(2)]),
            Err(Error::PointOutside)
        ));
    }

    #[test]
    fn eval_on_quadrant() {
        let ps = RationalPolytope::lower_orthant(2, rat_int(1)).unwrap().semiring().unwrap();
        let x = ps.coordinate(0).unwrap();
        let y = ps.coordinate(1).unwrap();
        let e = x.join(&y).join(&TropPoly::constant(2, rat_int(-1)));
        let v = ps.eval_real(&e, &[rat_int(-2), rat_int(-3)]).unwrap().unwrap();
        assert_eq!(v, rat_int(-1));
    }

    #[test]
    fn eval_real_is_convex() {
        let ps = RationalPolytope::interval(rat_int(-2), rat_int(2)).unwrap().semiring().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let nterms = rng.gen_range(1..=4);
            let e = TropPoly::from_terms(
                (0..nterms)
                    .map(|_| Term {
                        exps: vec![rng.gen_range(0..3u32), rng.gen_range(0..3u32)],
                        coeff: rat_int(rng.gen_range(-3..=3)),
                    })
                    .collect(),
            );
            for _ in 0..100 {
                let p = Rat::new(rng.gen_range(-8..=8), 4);
                let q = Rat::new(rng.gen_range(-8..=8), 4);
                let lambda = Rat::new(rng.gen_range(0..=4), 4);
                let mid = &lambda * &p + (rat_int(1) - &lambda) * &q;
                let vp = ps.eval_real(&e, &[p.clone()]).unwrap().unwrap();
                let vq = ps.eval_real(&e, &[q.clone()]).unwrap().unwrap();
                let vm = ps.eval_real(&e, &[mid]).unwrap().unwrap();
                assert!(vm <= &lambda * vp + (rat_int(1) - &lambda) * vq);
            }
        }
    }

    #[test]
    fn face_inclusion_gives_cellular_localization() {
        // every face of the interval, triangle and square: the spectrum of
        // the cellular localization at the face element matches the basic
        // open of that element
        for p in [
            RationalPolytope::interval(Rat::zero(), rat_int(2)).unwrap(),
            RationalPolytope::standard_triangle().unwrap(),
            RationalPolytope::square(Rat::zero(), rat_int(1)).unwrap(),
        ] {
            let ps = p.semiring().unwrap();
            for face in face_lattice(&p).unwrap() {
                let s = ps.face_element(&face).unwrap();
                assert_eq!(ps.pres.is_integral(&s).unwrap(), Tri::True);
                let data = crate::spectrum::open_of_localization(&ps.pres, &s).unwrap();
                assert_eq!(data.open.len(), data.localized.len());
            }
        }
    }

    #[test]
    fn affine_functions_are_invertible_on_intervals() {
        let ps = RationalPolytope::interval(Rat::zero(), rat_int(2)).unwrap().semiring().unwrap();
        for m in [-1i128, 0, 1] {
            for c in [-2i128, 0, 3] {
                let a = ps.functional_poly(&[m], &rat_int(c)).unwrap();
                assert!(
                    ps.pres.invert(&a).unwrap().is_some(),
                    "affine {m}X+{c} must be a unit"
                );
            }
        }
        // the twist -1 is an admissible bound
        let minus_one = TropPoly::constant(ps.pres.ngens(), rat_int(-1));
        assert_eq!(ps.pres.is_integral(&minus_one).unwrap(), Tri::True);
        assert!(ps.pres.invert(&minus_one).unwrap().is_some());
        // an element with a kink inside the interval is not invertible
        let x = ps.coordinate(0).unwrap();
        let kink = x.shift(&rat_int(-1)).join(&TropPoly::zero(ps.pres.ngens()));
        assert_eq!(ps.pres.normalize(&kink).unwrap().terms().len(), 2);
        assert!(ps.pres.invert(&kink).unwrap().is_none());
    }

    #[test]
    fn rational_vertices_use_the_rational_base() {
        // [0, 1/2]: the twist refines to half-integers and the base is Qv
        let ps = RationalPolytope::interval(Rat::zero(), Rat::new(1, 2))
            .unwrap()
            .semiring()
            .unwrap();
        assert_eq!(ps.pres.base(), crate::semifield::SemifieldTag::Rat);
        assert_eq!(crate::spectrum::enumerate_points(&ps.pres).unwrap().len(), 3);
        let x = ps.coordinate(0).unwrap();
        let v = ps.eval_real(&x, &[Rat::new(1, 4)]).unwrap().unwrap();
        assert_eq!(v, Rat::new(1, 4));
        // the length relation carries the rational constant -1/2
        let u_plus_v = TropPoly::from_terms(vec![Term {
            exps: vec![1, 1],
            coeff: Rat::zero(),
        }]);
        assert!(ps
            .pres
            .eq(&u_plus_v, &TropPoly::constant(2, Rat::new(-1, 2)))
            .unwrap()
            .is_equal());
    }

    #[test]
    fn refinement_certificates() {
        let i = RationalPolytope::interval(Rat::zero(), rat_int(1)).unwrap();
        refinement_base_change(&i, 1).unwrap();
        let cert = refinement_base_change(&i, 2).unwrap();
        // (m, j) with X - j/2: (1, 0) is in both; (-1, 1) means -X + 1/2 >= 0
        // on [0, 2]... membership agreement is the certificate
        assert!(cert.refined.contains(&[1, 0]));
        let pt = RationalPolytope::point().unwrap();
        refinement_base_change(&pt, 3).unwrap();
    }

    #[test]
    fn fan_compatibility() {
        // fan of P^1: two opposite rays
        let c1 = RationalPolytope::new(1, vec![(vec![-1], Rat::zero())]).unwrap();
        let c2 = RationalPolytope::new(1, vec![(vec![1], Rat::zero())]).unwrap();
        Fan::new(1, vec![c1, c2]).unwrap();
        // two overlapping 2D quadrants sharing only a 1D ray are fine;
        // overlapping in a 2D region is not a face
        let q1 = RationalPolytope::new(2, vec![(vec![-1, 0], Rat::zero()), (vec![0, -1], Rat::zero())]).unwrap();
        let q_bad = RationalPolytope::new(2, vec![(vec![-1, -1], Rat::zero()), (vec![0, -1], Rat::zero())]).unwrap();
        assert!(Fan::new(2, vec![q1, q_bad]).is_err());
    }

    #[test]
    fn fan_complexes() {
        // a single cone gives a single truncated chart
        let half = RationalPolytope::new(1, vec![(vec![1], Rat::zero())]).unwrap();
        let single = Fan::new(1, vec![half]).unwrap();
        let complex = fan_complex(&single, &[rat_int(1)]).unwrap();
        assert_eq!(complex.charts.len(), 1);
        assert!(complex.gluings.is_empty());
        // the fan of P^1 x P^1: four quadrant cones, four square-ish
        // charts, glued along every shared face expansion
        let quadrant = |sx: Int, sy: Int| {
            RationalPolytope::new(2, vec![(vec![sx, 0], Rat::zero()), (vec![0, sy], Rat::zero())])
                .unwrap()
        };
        let fan = Fan::new(
            2,
            vec![quadrant(1, 1), quadrant(-1, 1), quadrant(1, -1), quadrant(-1, -1)],
        )
        .unwrap();
        let r = Rat::new(1, 2);
        let complex = fan_complex(&fan, &[r.clone(), r.clone(), r.clone(), r]).unwrap();
        assert_eq!(complex.charts.len(), 4);
        assert!(complex.gluings.len() >= 4);
        // a shared global section evaluates consistently on an overlap
        let sections: Vec<TropPoly> = complex
            .charts
            .iter()
            .map(|c| TropPoly::constant(c.pres.ngens(), rat_int(-2)))
            .collect();
        let v = crate::complexes::eval_global(&complex, &sections, 0, &[Rat::zero(), Rat::zero()])
            .unwrap();
        assert_eq!(v, crate::semifield::SemifieldValue::rational(rat_int(-2)));
    }
}
