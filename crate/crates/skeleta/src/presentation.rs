//! Finitely presented semirings over B, Zv or Qv: tropical-polynomial
//! elements, canonical normal forms, a complete equality decision for
//! monomial-admissible presentations, tensor sums, contraction and
//! homomorphism checking.
//!
//! A presentation is monomial-admissible when every relation compares
//! single terms (or constants). Such a presentation embeds into a
//! monomial-ideal model: a term is a lattice point (exponents,
//! coefficient), the relations carve a rational polyhedron F out of
//! generator space, and one term dominates another exactly when their
//! difference is nonpositive against every vertex and recession ray of
//! F. Normal forms are antichains of class representatives, which makes
//! equality a finite check. General presentations fall back to a sound
//! but incomplete three-valued procedure (structural pruning, bounded
//! rewriting, point separation).

use crate::error::{Error, Result};
use crate::geometry::{
    dot_ii, dot_ir, fmt_rat, gcd_int, integer_kernel, primitive, rat_int, v_representation,
    HalfSpace, Int, Rat,
};
use crate::semifield::{SemifieldTag, SemifieldValue};
use num_traits::{Signed, Zero};
use std::fmt;
use std::sync::{Arc, OnceLock};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sort {
    Free,
    Contracting,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub sort: Sort,
}

/// One tropical monomial: an N-vector of generator exponents plus an
/// additive constant from the base semifield. `3X + 2Y - 1` has
/// exponents (3, 2) and coefficient -1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Term {
    pub exps: Vec<u32>,
    pub coeff: Rat,
}

impl Term {
    pub fn constant(ngens: usize, coeff: Rat) -> Self {
        Term {
            exps: vec![0; ngens],
            coeff,
        }
    }

    pub fn generator(index: usize, ngens: usize) -> Self {
        let mut exps = vec![0; ngens];
        exps[index] = 1;
        Term {
            exps,
            coeff: Rat::zero(),
        }
    }

    fn plus(&self, other: &Term) -> Term {
        Term {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
            coeff: &self.coeff + &other.coeff,
        }
    }
}

/// A finite join of terms; the empty join is -inf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropPoly {
    terms: Vec<Term>,
}

impl TropPoly {
    pub fn neg_inf() -> Self {
        TropPoly { terms: vec![] }
    }

    pub fn from_terms(mut terms: Vec<Term>) -> Self {
        // merge equal exponent vectors by coefficient join
        terms.sort();
        let mut merged: Vec<Term> = Vec::new();
        for t in terms {
            if let Some(last) = merged.last_mut() {
                if last.exps == t.exps {
                    if t.coeff > last.coeff {
                        last.coeff = t.coeff;
                    }
                    continue;
                }
            }
            merged.push(t);
        }
        TropPoly { terms: merged }
    }

    pub fn constant(ngens: usize, coeff: Rat) -> Self {
        TropPoly {
            terms: vec![Term::constant(ngens, coeff)],
        }
    }

    pub fn zero(ngens: usize) -> Self {
        Self::constant(ngens, Rat::zero())
    }

    pub fn generator(index: usize, ngens: usize) -> Self {
        TropPoly {
            terms: vec![Term::generator(index, ngens)],
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_neg_inf(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn single_term(&self) -> Option<&Term> {
        if self.terms.len() == 1 {
            Some(&self.terms[0])
        } else {
            None
        }
    }

    pub fn join(&self, other: &TropPoly) -> TropPoly {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        TropPoly::from_terms(terms)
    }

    pub fn plus(&self, other: &TropPoly) -> TropPoly {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(a.plus(b));
            }
        }
        TropPoly::from_terms(terms)
    }

    /// n-fold tropical multiple (repeated plus); 0e is the unit 0.
    pub fn times(&self, n: u32, ngens: usize) -> TropPoly {
        let mut acc = TropPoly::zero(ngens);
        for _ in 0..n {
            acc = acc.plus(self);
        }
        acc
    }

    pub fn shift(&self, c: &Rat) -> TropPoly {
        TropPoly {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    exps: t.exps.clone(),
                    coeff: &t.coeff + c,
                })
                .collect(),
        }
    }

    /// Re-indexes exponents into a wider generator list.
    pub fn embed(&self, positions: &[usize], new_ngens: usize) -> TropPoly {
        TropPoly {
            terms: self
                .terms
                .iter()
                .map(|t| {
                    let mut exps = vec![0; new_ngens];
                    for (old, &new) in positions.iter().enumerate() {
                        exps[new] = t.exps[old];
                    }
                    Term {
                        exps,
                        coeff: t.coeff.clone(),
                    }
                })
                .collect(),
        }
    }

    pub fn display<'a>(&'a self, pres: &'a Presentation) -> TropPolyDisplay<'a> {
        TropPolyDisplay { poly: self, pres }
    }
}

pub struct TropPolyDisplay<'a> {
    poly: &'a TropPoly,
    pres: &'a Presentation,
}

impl fmt::Display for TropPolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.terms.is_empty() {
            return write!(f, "-inf");
        }
        let rendered: Vec<String> = self
            .poly
            .terms
            .iter()
            .map(|t| {
                let mut parts: Vec<String> = Vec::new();
                for (i, &e) in t.exps.iter().enumerate() {
                    if e == 1 {
                        parts.push(self.pres.gens[i].name.clone());
                    } else if e > 1 {
                        parts.push(format!("{e}{}", self.pres.gens[i].name));
                    }
                }
                if !t.coeff.is_zero() || parts.is_empty() {
                    parts.push(fmt_rat(&t.coeff));
                }
                parts.join(" + ")
            })
            .collect();
        write!(f, "{}", rendered.join(" v "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelKind {
    Eq,
    Leq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub kind: RelKind,
    pub lhs: TropPoly,
    pub rhs: TropPoly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresClass {
    MonomialAdmissible,
    General,
}

/// Result of an equality query. Equality is a complete decision for
/// monomial-admissible presentations and three-valued in general.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EqResult {
    Equal,
    Distinct(Option<Witness>),
    Unknown,
}

impl EqResult {
    pub fn is_equal(&self) -> bool {
        matches!(self, EqResult::Equal)
    }
    pub fn is_distinct(&self) -> bool {
        matches!(self, EqResult::Distinct(_))
    }
}

/// A separating point for a Distinct verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// generator -> {0 (true), -inf (false)}
    BPoint(Vec<bool>),
    /// rational values per generator
    RatPoint(Vec<Rat>),
}

/// Three-valued predicate answers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tri {
    True,
    False,
    Unknown,
}

/// Free localization data attached to a subdivision: elements of the
/// localized presentation are read as `J - n I` with J an ideal of the
/// base model and n the exponent of the inverse generator.
#[derive(Debug)]
pub struct ReesBacking {
    pub base: Presentation,
    /// normalized generators of the inverted ideal, over the base
    pub ideal: Vec<Term>,
    /// index of the inverse generator in the localized presentation
    pub y_index: usize,
}

#[derive(Debug)]
pub struct Presentation {
    base: SemifieldTag,
    gens: Vec<Generator>,
    relations: Vec<Relation>,
    class: PresClass,
    model: OnceLock<std::result::Result<MonomialModel, Error>>,
    pub(crate) rees: Option<Arc<ReesBacking>>,
}

impl Clone for Presentation {
    fn clone(&self) -> Self {
        Presentation {
            base: self.base,
            gens: self.gens.clone(),
            relations: self.relations.clone(),
            class: self.class,
            model: OnceLock::new(),
            rees: self.rees.clone(),
        }
    }
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.gens == other.gens && self.relations == other.relations
    }
}

impl Presentation {
    pub fn new(
        base: SemifieldTag,
        gens: Vec<Generator>,
        relations: Vec<Relation>,
    ) -> Result<Self> {
        let mut names: Vec<&str> = gens.iter().map(|g| g.name.as_str()).collect();
        names.sort();
        names.dedup();
        if names.len() != gens.len() {
            return Err(Error::Invalid("generator names must be distinct".into()));
        }
        for rel in &relations {
            for side in [&rel.lhs, &rel.rhs] {
                for t in side.terms() {
                    if t.exps.len() != gens.len() {
                        return Err(Error::UnknownGenerator(format!(
                            "relation term arity {} vs {} generators",
                            t.exps.len(),
                            gens.len()
                        )));
                    }
                    check_coeff(base, &t.coeff)?;
                }
            }
        }
        let class = classify(&relations);
        Ok(Presentation {
            base,
            gens,
            relations,
            class,
            model: OnceLock::new(),
            rees: None,
        })
    }

    /// The free semiring on the named generators.
    pub fn free_semiring(base: SemifieldTag, names: &[&str]) -> Result<Self> {
        let gens = names
            .iter()
            .map(|n| Generator {
                name: n.to_string(),
                sort: Sort::Free,
            })
            .collect();
        Presentation::new(base, gens, vec![])
    }

    /// The freely contracting semiring: every generator satisfies g <= 0.
    pub fn freely_contracting(base: SemifieldTag, names: &[&str]) -> Result<Self> {
        let gens = names
            .iter()
            .map(|n| Generator {
                name: n.to_string(),
                sort: Sort::Contracting,
            })
            .collect();
        Presentation::new(base, gens, vec![])
    }

    pub fn base(&self) -> SemifieldTag {
        self.base
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn class(&self) -> PresClass {
        self.class
    }

    pub fn gen_index(&self, name: &str) -> Result<usize> {
        self.gens
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.into()))
    }

    pub fn gen_poly(&self, name: &str) -> Result<TropPoly> {
        Ok(TropPoly::generator(self.gen_index(name)?, self.ngens()))
    }

    fn check_arity(&self, e: &TropPoly) -> Result<()> {
        for t in e.terms() {
            if t.exps.len() != self.ngens() {
                return Err(Error::UnknownGenerator(format!(
                    "element arity {} vs {} generators",
                    t.exps.len(),
                    self.ngens()
                )));
            }
            check_coeff(self.base, &t.coeff)?;
        }
        Ok(())
    }

    pub(crate) fn model(&self) -> Result<&MonomialModel> {
        if self.class != PresClass::MonomialAdmissible {
            return Err(Error::Invalid(
                "no monomial model for a general presentation".into(),
            ));
        }
        self.model
            .get_or_init(|| MonomialModel::build(self))
            .as_ref()
            .map_err(|e| e.clone())
    }

    /// Vertices of the feasible region cut out by the sorts and
    /// relations; the exact rational vertex set of the real-point body.
    pub fn feasible_vertices(&self) -> Result<Vec<Vec<Rat>>> {
        Ok(self.model()?.verts.clone())
    }

    /// Canonical form. Complete for monomial-admissible presentations;
    /// for general ones only merging and sort-certified pruning apply.
    pub fn normalize(&self, e: &TropPoly) -> Result<TropPoly> {
        self.check_arity(e)?;
        if let Some(rees) = &self.rees {
            return rees_normalize(rees, e);
        }
        match self.class {
            PresClass::MonomialAdmissible => {
                let model = self.model()?;
                Ok(model.normalize(e))
            }
            PresClass::General => Ok(self.structural_normalize(e)),
        }
    }

    fn structural_normalize(&self, e: &TropPoly) -> TropPoly {
        let merged = TropPoly::from_terms(e.terms().to_vec());
        let terms = merged.terms();
        let mut keep: Vec<Term> = Vec::new();
        'outer: for (i, t) in terms.iter().enumerate() {
            for (j, u) in terms.iter().enumerate() {
                // mutual sort-domination of distinct terms is impossible
                // (it would force identical terms, already merged)
                if i != j && self.sort_dominates(t, u) {
                    continue 'outer;
                }
            }
            keep.push(t.clone());
        }
        TropPoly::from_terms(keep)
    }

    /// Sound sort-only dominance: t <= u certified by exponent surplus on
    /// contracting generators alone.
    fn sort_dominates(&self, t: &Term, u: &Term) -> bool {
        if t.coeff > u.coeff {
            return false;
        }
        for (i, g) in self.gens.iter().enumerate() {
            match g.sort {
                Sort::Contracting => {
                    if t.exps[i] < u.exps[i] {
                        return false;
                    }
                }
                Sort::Free => {
                    if t.exps[i] != u.exps[i] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Decides equality of two elements.
    pub fn eq(&self, a: &TropPoly, b: &TropPoly) -> Result<EqResult> {
        self.check_arity(a)?;
        self.check_arity(b)?;
        if let Some(rees) = &self.rees {
            return rees_eq_elements(rees, a, b);
        }
        match self.class {
            PresClass::MonomialAdmissible => {
                let model = self.model()?;
                if model.trivial {
                    return Ok(EqResult::Equal);
                }
                let na = model.normalize(a);
                let nb = model.normalize(b);
                if na == nb {
                    Ok(EqResult::Equal)
                } else {
                    Ok(EqResult::Distinct(self.find_witness(&na, &nb)?))
                }
            }
            PresClass::General => self.eq_general(a, b),
        }
    }

    /// a <= b, i.e. a v b = b.
    pub fn leq(&self, a: &TropPoly, b: &TropPoly) -> Result<Tri> {
        match self.eq(&a.join(b), b)? {
            EqResult::Equal => Ok(Tri::True),
            EqResult::Distinct(_) => Ok(Tri::False),
            EqResult::Unknown => Ok(Tri::Unknown),
        }
    }

    /// Membership in the semiring of integers: e <= 0.
    pub fn is_integral(&self, e: &TropPoly) -> Result<Tri> {
        self.leq(e, &TropPoly::zero(self.ngens()))
    }

    /// If `e` is a unit, returns its additive inverse.
    pub fn invert(&self, e: &TropPoly) -> Result<Option<TropPoly>> {
        let n = self.normalize(e)?;
        let Some(t) = n.single_term() else {
            return Ok(None);
        };
        let model = match self.model() {
            Ok(m) => m,
            // without a model only exponent-free terms invert
            Err(_) => {
                return Ok(if t.exps.iter().all(|&x| x == 0) {
                    Some(TropPoly::constant(self.ngens(), -t.coeff.clone()))
                } else {
                    None
                })
            }
        };
        if model.trivial {
            return Ok(Some(TropPoly::neg_inf()));
        }
        let raw: Vec<Int> = t.exps.iter().map(|&x| -(x as Int)).collect();
        Ok(model
            .canonical_raw(&raw, &-t.coeff.clone())
            .map(|u| TropPoly { terms: vec![u] }))
    }

    fn find_witness(&self, a: &TropPoly, b: &TropPoly) -> Result<Option<Witness>> {
        // Boolean points first (only meaningful when every coefficient
        // reduces), then the rational vertices of the feasible region.
        if let Some(w) = self.bpoint_witness(a, b) {
            return Ok(Some(w));
        }
        if let Ok(model) = self.model() {
            for v in &model.verts {
                let va = eval_at_rat(a, v);
                let vb = eval_at_rat(b, v);
                if va != vb {
                    return Ok(Some(Witness::RatPoint(v.clone())));
                }
            }
        }
        Ok(None)
    }

    fn bpoint_witness(&self, a: &TropPoly, b: &TropPoly) -> Option<Witness> {
        if self.ngens() > 12 {
            return None;
        }
        let assignments = self.bool_points().ok()?;
        for pt in assignments {
            let va = eval_element_bool(a, &pt)?;
            let vb = eval_element_bool(b, &pt)?;
            if va != vb {
                return Some(Witness::BPoint(pt));
            }
        }
        None
    }

    /// All generator assignments into {0, -inf} satisfying the relations
    /// after coefficient reduction, and consistent with the monomial
    /// model where one exists (a generator must take the value of its
    /// canonical form). Errors if a relation fails to reduce.
    pub(crate) fn bool_points(&self) -> Result<Vec<Vec<bool>>> {
        let n = self.ngens();
        // congruence constraints from the relation lattice: for a lattice
        // vector with exponent surplus pos - neg and shift d <= 0, the
        // identity (neg-monomial) = (pos-monomial) + d forces the alive
        // sets to agree, and to carry the shift only when d = 0. A general
        // presentation is swept against the (sound) model of its
        // single-term-sided relations.
        let mut constraints: Vec<(Vec<usize>, Vec<usize>, bool)> = Vec::new();
        if self.rees.is_none() {
            let model = match self.class {
                PresClass::MonomialAdmissible => Some(self.model()?),
                PresClass::General => None,
            };
            let partial;
            let model = match model {
                Some(m) => m,
                None => {
                    partial = MonomialModel::build_from_relations(self, &self.relations)?;
                    &partial
                }
            };
            if model.trivial {
                return Ok(vec![]);
            }
            for (le, dc) in model.lattice_window(4) {
                // orient so the shift is nonpositive
                let (le, dc) = if dc > Rat::zero() {
                    (le.iter().map(|x| -x).collect::<Vec<Int>>(), -dc)
                } else {
                    (le, dc)
                };
                let pos: Vec<usize> = (0..n).filter(|&j| le[j] > 0).collect();
                let neg: Vec<usize> = (0..n).filter(|&j| le[j] < 0).collect();
                let c = (pos, neg, dc.is_zero());
                if !constraints.contains(&c) {
                    constraints.push(c);
                }
            }
        }
        let mut points = Vec::new();
        'mask: for mask in 0..(1u32 << n) {
            let pt: Vec<bool> = (0..n).map(|i| mask & (1 << i) != 0).collect();
            for rel in &self.relations {
                let l = eval_element_bool(&rel.lhs, &pt)
                    .ok_or_else(|| Error::NotContracting("positive constant in relation".into()))?;
                let r = eval_element_bool(&rel.rhs, &pt)
                    .ok_or_else(|| Error::NotContracting("positive constant in relation".into()))?;
                let holds = match rel.kind {
                    RelKind::Eq => l == r,
                    RelKind::Leq => !l || r,
                };
                if !holds {
                    continue 'mask;
                }
            }
            for (pos, neg, shift_zero) in &constraints {
                let pos_alive = pos.iter().all(|&j| pt[j]);
                let neg_alive = neg.iter().all(|&j| pt[j]);
                let ok = if *shift_zero {
                    pos_alive == neg_alive
                } else {
                    // neg-monomial = pos-monomial + (strictly negative
                    // constant): the neg support cannot be fully alive
                    !neg_alive
                };
                if !ok {
                    continue 'mask;
                }
            }
            points.push(pt);
        }
        Ok(points)
    }

    fn eq_general(&self, a: &TropPoly, b: &TropPoly) -> Result<EqResult> {
        let na = self.structural_normalize(a);
        let nb = self.structural_normalize(b);
        if na == nb {
            return Ok(EqResult::Equal);
        }
        // point separation is sound for Distinct
        if self.gens.iter().all(|g| g.sort == Sort::Contracting) && self.ngens() <= 12 {
            if let Some(w) = self.bpoint_witness(&na, &nb) {
                return Ok(EqResult::Distinct(Some(w)));
            }
        }
        // bounded rewriting joins provably equal forms
        if self.rewriting_joins(&na, &nb, 6) {
            return Ok(EqResult::Equal);
        }
        Ok(EqResult::Unknown)
    }

    /// Breadth-first application of relations (both directions for Eq,
    /// absorption for Leq) up to the given depth.
    fn rewriting_joins(&self, a: &TropPoly, b: &TropPoly, depth: usize) -> bool {
        let mut seen_a = vec![a.clone()];
        let mut seen_b = vec![b.clone()];
        for _ in 0..depth {
            if seen_a.iter().any(|x| seen_b.contains(x)) {
                return true;
            }
            let next_a = self.rewrite_frontier(&seen_a);
            let next_b = self.rewrite_frontier(&seen_b);
            let mut grew = false;
            for x in next_a {
                if !seen_a.contains(&x) {
                    seen_a.push(x);
                    grew = true;
                }
            }
            for x in next_b {
                if !seen_b.contains(&x) {
                    seen_b.push(x);
                    grew = true;
                }
            }
            if !grew {
                break;
            }
            if seen_a.len() > 400 || seen_b.len() > 400 {
                break;
            }
        }
        seen_a.iter().any(|x| seen_b.contains(x))
    }

    fn rewrite_frontier(&self, forms: &[TropPoly]) -> Vec<TropPoly> {
        let mut out = Vec::new();
        for f in forms {
            for rel in &self.relations {
                match rel.kind {
                    RelKind::Eq => {
                        out.extend(self.rewrite_with(f, &rel.lhs, &rel.rhs));
                        out.extend(self.rewrite_with(f, &rel.rhs, &rel.lhs));
                    }
                    RelKind::Leq => {
                        // l <= r: a shifted copy of l already dominated by the
                        // matching shifted r may be absorbed, and conversely a
                        // shifted r may absorb nothing new; only absorption is
                        // applied
                        out.extend(self.absorb_with(f, &rel.lhs, &rel.rhs));
                    }
                }
            }
        }
        out.into_iter().map(|f| self.structural_normalize(&f)).collect()
    }

    /// Rewrites occurrences of `pattern` (a shifted sub-join) to `image`.
    fn rewrite_with(&self, f: &TropPoly, pattern: &TropPoly, image: &TropPoly) -> Vec<TropPoly> {
        let Some(first) = pattern.terms().first() else {
            return vec![];
        };
        let mut out = Vec::new();
        for anchor in f.terms() {
            // try shift = anchor - first
            let Some(shift) = term_difference(anchor, first) else {
                continue;
            };
            let shifted: Vec<Term> = pattern.terms().iter().map(|t| t.plus(&shift)).collect();
            if shifted.iter().all(|t| f.terms().contains(t)) {
                let rest: Vec<Term> = f
                    .terms()
                    .iter()
                    .filter(|t| !shifted.contains(t))
                    .cloned()
                    .collect();
                let mut replaced = TropPoly::from_terms(rest);
                replaced = replaced.join(&image.clone().shift_by(&shift));
                out.push(replaced);
            }
        }
        out
    }

    fn absorb_with(&self, f: &TropPoly, small: &TropPoly, large: &TropPoly) -> Vec<TropPoly> {
        let Some(first) = small.terms().first() else {
            return vec![];
        };
        let mut out = Vec::new();
        for anchor in f.terms() {
            let Some(shift) = term_difference(anchor, first) else {
                continue;
            };
            let s_shift: Vec<Term> = small.terms().iter().map(|t| t.plus(&shift)).collect();
            let l_shift: Vec<Term> = large.terms().iter().map(|t| t.plus(&shift)).collect();
            if s_shift.iter().all(|t| f.terms().contains(t))
                && l_shift.iter().all(|t| f.terms().contains(t))
            {
                let rest: Vec<Term> = f
                    .terms()
                    .iter()
                    .filter(|t| !s_shift.contains(t))
                    .cloned()
                    .collect();
                out.push(TropPoly::from_terms(rest));
            }
        }
        out
    }

    /// Evaluates an element at a point. The point must respect sorts
    /// (contracting generators get values <= 0) and satisfy every
    /// relation of the presentation.
    pub fn eval(&self, e: &TropPoly, pt: &[SemifieldValue]) -> Result<SemifieldValue> {
        self.check_arity(e)?;
        if pt.len() != self.ngens() {
            return Err(Error::Invalid("point arity mismatch".into()));
        }
        let tag = pt
            .first()
            .map(|v| v.tag())
            .unwrap_or(SemifieldTag::Rat);
        for (g, v) in self.gens.iter().zip(pt) {
            if v.tag() != tag {
                return Err(Error::TagMismatch(tag.to_string(), v.tag().to_string()));
            }
            if g.sort == Sort::Contracting {
                let zero = SemifieldValue::finite(tag, Rat::zero())?;
                if !v.leq(&zero)? {
                    return Err(Error::SortViolated(g.name.clone()));
                }
            }
        }
        for (i, rel) in self.relations.iter().enumerate() {
            let l = eval_unchecked(&rel.lhs, pt, tag)?;
            let r = eval_unchecked(&rel.rhs, pt, tag)?;
            let holds = match rel.kind {
                RelKind::Eq => l == r,
                RelKind::Leq => l.leq(&r)?,
            };
            if !holds {
                return Err(Error::RelationViolated(i));
            }
        }
        eval_unchecked(e, pt, tag)
    }

    /// Evaluates at a rational point without tag juggling (real points).
    pub fn eval_rat(&self, e: &TropPoly, pt: &[Rat]) -> Result<Option<Rat>> {
        let values: Vec<SemifieldValue> = pt.iter().map(|r| SemifieldValue::rational(r.clone())).collect();
        let v = self.eval(e, &values)?;
        Ok(v.payload().cloned())
    }

    /// Disjoint union of two presentations over the same base, with the
    /// two inclusion homomorphisms. Clashing generator names get a
    /// numeric suffix.
    pub fn tensor_sum(p1: &Presentation, p2: &Presentation) -> Result<(Presentation, SemiringHom, SemiringHom)> {
        if p1.base != p2.base {
            return Err(Error::BaseMismatch);
        }
        let mut gens = p1.gens.clone();
        for g in &p2.gens {
            let mut name = g.name.clone();
            let mut k = 2;
            while gens.iter().any(|h| h.name == name) {
                name = format!("{}_{k}", g.name);
                k += 1;
            }
            gens.push(Generator {
                name,
                sort: g.sort,
            });
        }
        let n = gens.len();
        let pos1: Vec<usize> = (0..p1.ngens()).collect();
        let pos2: Vec<usize> = (p1.ngens()..n).collect();
        let mut relations: Vec<Relation> = p1
            .relations
            .iter()
            .map(|r| Relation {
                kind: r.kind,
                lhs: r.lhs.embed(&pos1, n),
                rhs: r.rhs.embed(&pos1, n),
            })
            .collect();
        relations.extend(p2.relations.iter().map(|r| Relation {
            kind: r.kind,
            lhs: r.lhs.embed(&pos2, n),
            rhs: r.rhs.embed(&pos2, n),
        }));
        let sum = Presentation::new(p1.base, gens, relations)?;
        let inc1 = SemiringHom::new(
            p1.clone(),
            sum.clone(),
            pos1.iter().map(|&i| TropPoly::generator(i, n)).collect(),
        )?;
        let inc2 = SemiringHom::new(
            p2.clone(),
            sum.clone(),
            pos2.iter().map(|&i| TropPoly::generator(i, n)).collect(),
        )?;
        Ok((sum, inc1, inc2))
    }

    /// The universal contracting quotient: base constants collapse to 0
    /// (every unit must map to the unit) and every generator becomes
    /// contracting.
    pub fn contracting_quotient(&self) -> Result<(Presentation, SemiringHom)> {
        let gens: Vec<Generator> = self
            .gens
            .iter()
            .map(|g| Generator {
                name: g.name.clone(),
                sort: Sort::Contracting,
            })
            .collect();
        let forget = |e: &TropPoly| {
            TropPoly::from_terms(
                e.terms()
                    .iter()
                    .map(|t| Term {
                        exps: t.exps.clone(),
                        coeff: Rat::zero(),
                    })
                    .collect(),
            )
        };
        let relations: Vec<Relation> = self
            .relations
            .iter()
            .map(|r| Relation {
                kind: r.kind,
                lhs: forget(&r.lhs),
                rhs: forget(&r.rhs),
            })
            .collect();
        let target = Presentation::new(SemifieldTag::Bool, gens, relations)?;
        let images = (0..self.ngens())
            .map(|i| TropPoly::generator(i, self.ngens()))
            .collect();
        let hom = SemiringHom::new_collapsing(self.clone(), target.clone(), images);
        Ok((target, hom))
    }
}

fn classify(relations: &[Relation]) -> PresClass {
    for rel in relations {
        for side in [&rel.lhs, &rel.rhs] {
            if side.terms().len() > 1 {
                return PresClass::General;
            }
        }
        // a -inf side against a term with generator support has no
        // monomial model (the term's ideal must collapse)
        let minf_vs_support = |a: &TropPoly, b: &TropPoly| {
            a.is_neg_inf()
                && b.single_term().is_some_and(|t| t.exps.iter().any(|&x| x > 0))
        };
        if minf_vs_support(&rel.lhs, &rel.rhs) || minf_vs_support(&rel.rhs, &rel.lhs) {
            return PresClass::General;
        }
    }
    PresClass::MonomialAdmissible
}

fn check_coeff(base: SemifieldTag, c: &Rat) -> Result<()> {
    match base {
        SemifieldTag::Bool if !c.is_zero() => Err(Error::Invalid(
            "coefficients over B must be 0".into(),
        )),
        SemifieldTag::Int if !c.is_integer() => Err(Error::Invalid(format!(
            "coefficient {} is not an integer",
            fmt_rat(c)
        ))),
        _ => Ok(()),
    }
}

fn term_difference(a: &Term, b: &Term) -> Option<Term> {
    let mut exps = Vec::with_capacity(a.exps.len());
    for (&x, &y) in a.exps.iter().zip(&b.exps) {
        if x < y {
            return None;
        }
        exps.push(x - y);
    }
    Some(Term {
        exps,
        coeff: &a.coeff - &b.coeff,
    })
}

impl TropPoly {
    fn shift_by(&self, t: &Term) -> TropPoly {
        TropPoly {
            terms: self.terms.iter().map(|u| u.plus(t)).collect(),
        }
    }
}

fn eval_unchecked(e: &TropPoly, pt: &[SemifieldValue], tag: SemifieldTag) -> Result<SemifieldValue> {
    let mut acc = SemifieldValue::neg_inf(tag);
    for t in e.terms() {
        let mut val = SemifieldValue::finite(tag, t.coeff.clone())?;
        for (i, &e_i) in t.exps.iter().enumerate() {
            for _ in 0..e_i {
                val = val.plus(&pt[i])?;
            }
        }
        acc = acc.join(&val)?;
    }
    Ok(acc)
}

fn eval_at_rat(e: &TropPoly, pt: &[Rat]) -> Option<Rat> {
    e.terms()
        .iter()
        .map(|t| {
            let lin: Rat = t
                .exps
                .iter()
                .zip(pt)
                .map(|(&e_i, x)| Rat::from_integer(e_i as Int) * x)
                .sum();
            lin + &t.coeff
        })
        .max()
}

/// Evaluates with Boolean generator values after reducing coefficients.
/// A term whose support is alive takes its constant's reduction (None
/// when the constant is positive: a unit with no Boolean value); a term
/// with dead support is -inf regardless of its constant.
pub(crate) fn eval_element_bool(e: &TropPoly, pt: &[bool]) -> Option<bool> {
    let mut any = false;
    for t in e.terms() {
        let alive = t
            .exps
            .iter()
            .enumerate()
            .all(|(i, &e_i)| e_i == 0 || pt[i]);
        if alive {
            if t.coeff.is_positive() {
                return None;
            }
            if t.coeff.is_zero() {
                any = true;
            }
        }
    }
    Some(any)
}

/// The monomial-ideal model of a monomial-admissible presentation.
#[derive(Debug)]
pub(crate) struct MonomialModel {
    ngens: usize,
    pub(crate) trivial: bool,
    pub(crate) verts: Vec<Vec<Rat>>,
    rays: Vec<Vec<Int>>,
    lins: Vec<Vec<Int>>,
    /// integer lattice of exponent shifts acting trivially on F, with the
    /// coefficient shift each induces
    lattice: Vec<(Vec<Int>, Rat)>,
}

impl MonomialModel {
    fn build(p: &Presentation) -> std::result::Result<MonomialModel, Error> {
        Self::build_from_relations(p, &p.relations)
    }

    /// Builds the model over a subset of relations. For a monomial-
    /// admissible presentation with all its relations this is the full
    /// model; a general presentation can still be swept soundly against
    /// the model of its single-term-sided relations.
    fn build_from_relations(
        p: &Presentation,
        relations: &[Relation],
    ) -> std::result::Result<MonomialModel, Error> {
        let k = p.ngens();
        let mut hs: Vec<HalfSpace> = Vec::new();
        let mut trivial = false;
        for (i, g) in p.gens.iter().enumerate() {
            if g.sort == Sort::Contracting {
                let mut n = vec![Rat::zero(); k];
                n[i] = Rat::from_integer(1);
                hs.push(HalfSpace::new(n, Rat::zero()));
            }
        }
        for rel in relations {
            match (rel.lhs.single_term(), rel.rhs.single_term()) {
                (Some(l), Some(r)) => {
                    // l <= r: <e_l - e_r, x> <= c_r - c_l
                    let n: Vec<Rat> = l
                        .exps
                        .iter()
                        .zip(&r.exps)
                        .map(|(&a, &b)| rat_int(a as Int - b as Int))
                        .collect();
                    let off = &r.coeff - &l.coeff;
                    hs.push(HalfSpace::new(n.clone(), off.clone()));
                    if rel.kind == RelKind::Eq {
                        hs.push(HalfSpace::new(n.iter().map(|x| -x).collect(), -off));
                    }
                }
                _ => {
                    // a side collapsed to -inf forces the other side down
                    // to -inf (for Eq, either side; for Leq, only the
                    // left); a collapsing constant trivializes the whole
                    // presentation. Multi-term sides are skipped, which is
                    // sound when this model is used for sweeping.
                    let collapsing = if rel.rhs.is_neg_inf() {
                        Some(&rel.lhs)
                    } else if rel.lhs.is_neg_inf() && rel.kind == RelKind::Eq {
                        Some(&rel.rhs)
                    } else {
                        None
                    };
                    if let Some(side) = collapsing {
                        if side
                            .single_term()
                            .is_some_and(|t| t.exps.iter().all(|&x| x == 0))
                        {
                            trivial = true;
                        }
                    }
                }
            }
        }
        let vrep = v_representation(&hs, k);
        if vrep.is_empty() {
            trivial = true;
        }
        if trivial {
            return Ok(MonomialModel {
                ngens: k,
                trivial,
                verts: vec![],
                rays: vec![],
                lins: vec![],
                lattice: vec![],
            });
        }
        let verts = vrep.vertices;
        let rays = vrep.rays;
        let lins = vrep.lineality;
        // lattice of exponent shifts e with <x, e> constant on F
        let mut rows: Vec<Vec<Int>> = Vec::new();
        let v0 = &verts[0];
        for v in &verts[1..] {
            let diff: Vec<Rat> = v.iter().zip(v0).map(|(a, b)| a - b).collect();
            rows.push(primitive(&diff));
        }
        rows.extend(rays.iter().cloned());
        rows.extend(lins.iter().cloned());
        let kernel = integer_kernel(&rows, k);
        // a class shift must stay inside the base value group: all of Q
        // for Qv, the integers for Zv, zero for B. Refine the lattice to
        // the sublattice with admissible shifts.
        let shifts: Vec<Rat> = kernel.iter().map(|e| -dot_ir(e, v0)).collect();
        let kernel = match p.base {
            SemifieldTag::Rat => kernel,
            SemifieldTag::Int | SemifieldTag::Bool => {
                let d = kernel.len();
                let q: Int = shifts
                    .iter()
                    .fold(1, |acc, s| acc / gcd_int(acc, *s.denom()) * *s.denom());
                let nums: Vec<Int> = shifts.iter().map(|s| s.numer() * (q / s.denom())).collect();
                let zs: Vec<Vec<Int>> = if p.base == SemifieldTag::Int {
                    // sum z_i nums_i must be divisible by q
                    let mut row = nums.clone();
                    row.push(q);
                    integer_kernel(&[row], d + 1)
                        .into_iter()
                        .map(|v| v[..d].to_vec())
                        .collect()
                } else {
                    // shifts must vanish outright over B
                    integer_kernel(&[nums.clone()], d)
                };
                zs.iter()
                    .map(|z| {
                        (0..k)
                            .map(|j| z.iter().zip(&kernel).map(|(&zi, b)| zi * b[j]).sum())
                            .collect()
                    })
                    .collect()
            }
        };
        let lattice = kernel
            .into_iter()
            .map(|e| {
                let shift = -dot_ir(&e, v0);
                (e, shift)
            })
            .collect();
        Ok(MonomialModel {
            ngens: k,
            trivial,
            verts,
            rays,
            lins,
            lattice,
        })
    }

    /// Nonzero lattice vectors with their shifts from a bounded window of
    /// basis combinations; the finite congruence data used to sweep
    /// Boolean points.
    fn lattice_window(&self, width: Int) -> Vec<(Vec<Int>, Rat)> {
        let d = self.lattice.len();
        if d == 0 {
            return vec![];
        }
        let w = if d <= 4 { width } else { 1 };
        let mut out = Vec::new();
        let mut z = vec![-w; d];
        loop {
            if z.iter().any(|&x| x != 0) {
                let le: Vec<Int> = (0..self.ngens)
                    .map(|j| z.iter().zip(&self.lattice).map(|(&zi, (b, _))| zi * b[j]).sum())
                    .collect();
                let dc: Rat = z
                    .iter()
                    .zip(&self.lattice)
                    .map(|(&zi, (_, s))| Rat::from_integer(zi) * s)
                    .sum();
                out.push((le, dc));
            }
            let mut j = 0;
            loop {
                if j == d {
                    return out;
                }
                if z[j] < w {
                    z[j] += 1;
                    break;
                }
                z[j] = -w;
                j += 1;
            }
        }
    }

    /// t <= u as functions on F (single monomials).
    pub(crate) fn dominates(&self, t: &Term, u: &Term) -> bool {
        let de: Vec<Int> = t
            .exps
            .iter()
            .zip(&u.exps)
            .map(|(&a, &b)| a as Int - b as Int)
            .collect();
        let dc = &t.coeff - &u.coeff;
        self.raw_nonpositive(&de, &dc)
    }

    fn raw_nonpositive(&self, de: &[Int], dc: &Rat) -> bool {
        self.verts
            .iter()
            .all(|v| dot_ir(de, v) + dc <= Rat::zero())
            && self.rays.iter().all(|r| dot_ii(r, de) <= 0)
            && self.lins.iter().all(|l| dot_ii(l, de) == 0)
    }

    /// Canonical representative of the term's class modulo the relation
    /// lattice: the member of the class with N-exponents minimizing
    /// (total degree, lex order).
    fn canonical_term(&self, t: &Term) -> Term {
        if self.lattice.is_empty() {
            return t.clone();
        }
        let raw: Vec<Int> = t.exps.iter().map(|&x| x as Int).collect();
        self.canonical_raw(&raw, &t.coeff)
            .expect("class of a valid term is nonempty")
    }

    /// Finds the canonical N-exponent representative of the class of the
    /// (possibly invalid) raw point, if one exists.
    pub(crate) fn canonical_raw(&self, e0: &[Int], c0: &Rat) -> Option<Term> {
        if self.lattice.is_empty() {
            return if e0.iter().all(|&x| x >= 0) {
                Some(Term {
                    exps: e0.iter().map(|&x| x as u32).collect(),
                    coeff: c0.clone(),
                })
            } else {
                None
            };
        }
        let d = self.lattice.len();
        let k = self.ngens;
        // z-space constraints: e0 + K z >= 0 coordinatewise
        let mut hs: Vec<HalfSpace> = Vec::new();
        for j in 0..k {
            let n: Vec<Rat> = (0..d).map(|i| rat_int(-self.lattice[i].0[j])).collect();
            hs.push(HalfSpace::new(n, rat_int(e0[j])));
        }
        // first pass: find any feasible integer z near the vertices
        let feasible = |z: &[Int]| -> bool {
            (0..k).all(|j| {
                e0[j] + (0..d).map(|i| self.lattice[i].0[j] * z[i]).sum::<Int>() >= 0
            })
        };
        let apply = |z: &[Int]| -> Term {
            let exps: Vec<u32> = (0..k)
                .map(|j| {
                    (e0[j] + (0..d).map(|i| self.lattice[i].0[j] * z[i]).sum::<Int>()) as u32
                })
                .collect();
            let mut coeff = c0.clone();
            for (i, (_, shift)) in self.lattice.iter().enumerate() {
                coeff += shift * rat_int(z[i]);
            }
            Term { exps, coeff }
        };
        let seed = self
            .integer_points_near(&hs, d, 4)
            .into_iter()
            .find(|z| feasible(z))?;
        // second pass: bounded search below the seed's total degree
        let seed_term = apply(&seed);
        let cap: Int = seed_term.exps.iter().map(|&x| x as Int).sum();
        let mut capped = hs.clone();
        let n: Vec<Rat> = (0..d)
            .map(|i| rat_int(self.lattice[i].0.iter().sum::<Int>()))
            .collect();
        let e0_sum: Int = e0.iter().sum();
        capped.push(HalfSpace::new(n, rat_int(cap - e0_sum)));
        let mut best = seed_term;
        for z in self.integer_points_near(&capped, d, 1) {
            if !feasible(&z) {
                continue;
            }
            let cand = apply(&z);
            let key = |t: &Term| (t.exps.iter().map(|&x| x as Int).sum::<Int>(), t.exps.clone());
            if key(&cand) < key(&best) {
                best = cand;
            }
        }
        Some(best)
    }

    /// Integer points inside the bounding box (plus margin) of the
    /// polyhedron's vertices.
    fn integer_points_near(&self, hs: &[HalfSpace], d: usize, margin: Int) -> Vec<Vec<Int>> {
        let vrep = v_representation(hs, d);
        if vrep.is_empty() {
            return vec![];
        }
        let mut lo = vec![Int::MAX; d];
        let mut hi = vec![Int::MIN; d];
        for v in &vrep.vertices {
            for (j, x) in v.iter().enumerate() {
                let f = x.floor().to_integer();
                let c = x.ceil().to_integer();
                lo[j] = lo[j].min(f - margin);
                hi[j] = hi[j].max(c + margin);
            }
        }
        // pure enumeration; the boxes here are tiny
        let mut out = Vec::new();
        let mut z: Vec<Int> = lo.clone();
        loop {
            out.push(z.clone());
            let mut j = 0;
            loop {
                if j == d {
                    return out;
                }
                if z[j] < hi[j] {
                    z[j] += 1;
                    break;
                }
                z[j] = lo[j];
                j += 1;
            }
        }
    }

    pub(crate) fn normalize(&self, e: &TropPoly) -> TropPoly {
        if self.trivial {
            return TropPoly::neg_inf();
        }
        let canon: Vec<Term> = e.terms().iter().map(|t| self.canonical_term(t)).collect();
        let merged = TropPoly::from_terms(canon);
        let terms = merged.terms();
        let mut keep: Vec<Term> = Vec::new();
        'outer: for (i, t) in terms.iter().enumerate() {
            for (j, u) in terms.iter().enumerate() {
                if i != j && self.dominates(t, u) {
                    // mutual domination is impossible for distinct
                    // canonical representatives
                    continue 'outer;
                }
            }
            keep.push(t.clone());
        }
        TropPoly::from_terms(keep)
    }
}

/// A homomorphism of presented semirings, given by generator images.
#[derive(Debug, Clone)]
pub struct SemiringHom {
    pub source: Presentation,
    pub target: Presentation,
    pub images: Vec<TropPoly>,
    /// base-change behavior on coefficients: identity, or the collapse
    /// c -> 0 of the universal contracting quotient
    pub collapse_constants: bool,
}

impl SemiringHom {
    /// Builds and validates: images must respect sorts (contracting
    /// generators map to integral elements) and every source relation
    /// must hold in the target.
    pub fn new(source: Presentation, target: Presentation, images: Vec<TropPoly>) -> Result<Self> {
        let hom = Self::new_unchecked(source, target, images);
        hom.validate()?;
        Ok(hom)
    }

    pub fn new_unchecked(source: Presentation, target: Presentation, images: Vec<TropPoly>) -> Self {
        SemiringHom {
            source,
            target,
            images,
            collapse_constants: false,
        }
    }

    /// A homomorphism that also collapses every finite base constant to
    /// 0 (the base change through the universal contracting quotient).
    pub fn new_collapsing(source: Presentation, target: Presentation, images: Vec<TropPoly>) -> Self {
        SemiringHom {
            source,
            target,
            images,
            collapse_constants: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.images.len() != self.source.ngens() {
            return Err(Error::Invalid("one image per generator required".into()));
        }
        for (g, img) in self.source.gens().iter().zip(&self.images) {
            if g.sort == Sort::Contracting {
                match self.target.is_integral(img)? {
                    Tri::True => {}
                    Tri::False => return Err(Error::NotIntegral(g.name.clone())),
                    Tri::Unknown => {
                        return Err(Error::Undecided(format!(
                            "integrality of the image of {}",
                            g.name
                        )))
                    }
                }
            }
        }
        for (i, rel) in self.source.relations().iter().enumerate() {
            let l = self.apply(&rel.lhs)?;
            let r = self.apply(&rel.rhs)?;
            let holds = match rel.kind {
                RelKind::Eq => self.target.eq(&l, &r)?.is_equal(),
                RelKind::Leq => self.target.leq(&l, &r)? == Tri::True,
            };
            if !holds {
                return Err(Error::Invalid(format!("relation {i} not preserved")));
            }
        }
        Ok(())
    }

    /// Substitutes generator images into an element.
    pub fn apply(&self, e: &TropPoly) -> Result<TropPoly> {
        let n = self.target.ngens();
        let mut out = TropPoly::neg_inf();
        for t in e.terms() {
            let coeff = if self.collapse_constants {
                Rat::zero()
            } else {
                t.coeff.clone()
            };
            let mut term_val = TropPoly::constant(n, coeff);
            for (i, &e_i) in t.exps.iter().enumerate() {
                if e_i > 0 {
                    term_val = term_val.plus(&self.images[i].times(e_i, n));
                }
            }
            out = out.join(&term_val);
        }
        Ok(out)
    }
}

// ---- free-localization (Rees) backing -------------------------------

/// An ideal over the base model of a Rees backing: a normalized antichain
/// of terms.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct TermIdeal(pub Vec<Term>);

pub(crate) fn term_ideal(base: &Presentation, terms: Vec<Term>) -> Result<TermIdeal> {
    let n = base.normalize(&TropPoly::from_terms(terms))?;
    Ok(TermIdeal(n.terms().to_vec()))
}

impl TermIdeal {
    pub(crate) fn plus(&self, other: &Self, base: &Presentation) -> Result<Self> {
        let mut t = Vec::new();
        for a in &self.0 {
            for b in &other.0 {
                t.push(a.plus(b));
            }
        }
        term_ideal(base, t)
    }
}

/// Decomposes an element of a localized presentation into (ideal over
/// the base, twist) with a common twist.
fn rees_decompose(rees: &ReesBacking, e: &TropPoly) -> Result<(TermIdeal, u32)> {
    let y = rees.y_index;
    let strip = |t: &Term| -> (Term, u32) {
        let n = t.exps[y];
        let mut exps = t.exps.clone();
        exps.remove(y);
        (
            Term {
                exps,
                coeff: t.coeff.clone(),
            },
            n,
        )
    };
    let parts: Vec<(Term, u32)> = e.terms().iter().map(strip).collect();
    let twist = parts.iter().map(|(_, n)| *n).max().unwrap_or(0);
    let ideal_terms = TermIdeal(rees.ideal.clone());
    let mut total: Vec<Term> = Vec::new();
    for (t, n) in parts {
        // lift t by (twist - n) copies of I
        let mut lifted = TermIdeal(vec![t]);
        for _ in n..twist {
            lifted = lifted.plus(&ideal_terms, &rees.base)?;
        }
        total.extend(lifted.0);
    }
    Ok((term_ideal(&rees.base, total)?, twist))
}

fn rees_recompose(rees: &ReesBacking, ideal: &TermIdeal, twist: u32) -> TropPoly {
    let y = rees.y_index;
    let terms: Vec<Term> = ideal
        .0
        .iter()
        .map(|t| {
            let mut exps = t.exps.clone();
            exps.insert(y, twist);
            Term {
                exps,
                coeff: t.coeff.clone(),
            }
        })
        .collect();
    TropPoly::from_terms(terms)
}

fn rees_normalize(rees: &ReesBacking, e: &TropPoly) -> Result<TropPoly> {
    let (mut ideal, mut twist) = rees_decompose(rees, e)?;
    // strip common ideal factors to lower the twist where possible
    'strip: while twist > 0 {
        if ideal.0.is_empty() {
            twist = 0;
            break;
        }
        // candidate quotient generators g - i that stay valid
        let mut quotient: Vec<Term> = Vec::new();
        for g in &ideal.0 {
            for i in &rees.ideal {
                if let Some(d) = term_difference(g, i) {
                    quotient.push(d);
                }
            }
        }
        if quotient.is_empty() {
            break;
        }
        let q = term_ideal(&rees.base, quotient)?;
        let back = q.plus(&TermIdeal(rees.ideal.clone()), &rees.base)?;
        if back == ideal {
            ideal = q;
            twist -= 1;
            continue 'strip;
        }
        break;
    }
    Ok(rees_recompose(rees, &ideal, twist))
}

fn rees_eq_elements(
    rees: &ReesBacking,
    a: &TropPoly,
    b: &TropPoly,
) -> Result<EqResult> {
    let (ja, na) = rees_decompose(rees, a)?;
    let (jb, nb) = rees_decompose(rees, b)?;
    crate::localize::rees_eq_ideals(
        &rees.base,
        &rees.ideal,
        &ja,
        na,
        &jb,
        nb,
        crate::localize::saturation_cap(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn zv_contracting(names: &[&str]) -> Presentation {
        Presentation::freely_contracting(SemifieldTag::Int, names).unwrap()
    }

    fn poly(p: &Presentation, s: &str) -> TropPoly {
        crate::dsl::parse_element(p, s).unwrap()
    }

    #[test]
    fn free_semiring_normal_forms() {
        let p = Presentation::free_semiring(SemifieldTag::Int, &["X"]).unwrap();
        let x = p.gen_poly("X").unwrap();
        assert_eq!(p.normalize(&x.join(&x)).unwrap(), x);
        // (X + -1) v X -> X (coefficient join on equal exponents)
        let xm1 = x.shift(&rat_int(-1));
        assert_eq!(p.normalize(&xm1.join(&x)).unwrap(), x);
        // X and 2X are incomparable
        let two_x = x.times(2, 1);
        assert_eq!(p.normalize(&x.join(&two_x)).unwrap().terms().len(), 2);
    }

    #[test]
    fn freely_contracting_normal_forms() {
        let b = Presentation::freely_contracting(SemifieldTag::Bool, &["X"]).unwrap();
        let x = b.gen_poly("X").unwrap();
        let two_x = x.times(2, 1);
        assert_eq!(b.normalize(&x.join(&two_x)).unwrap(), x);
        // Zv{X}: (X+3) v 3 -> 3
        let p = zv_contracting(&["X"]);
        let e = poly(&p, "X + 3 v 3");
        assert_eq!(p.normalize(&e).unwrap(), poly(&p, "3"));
    }

    #[test]
    fn non_cancellative_witness() {
        // 2(X v -1) = 2X v X-1 v -2 stays a 3-term antichain in Zv{X},
        // distinct from 2X v -2 though equal as a real function
        let p = zv_contracting(&["X"]);
        let lhs = poly(&p, "X v -1").times(2, 1);
        let rhs = poly(&p, "2X v -2");
        assert_eq!(p.normalize(&lhs).unwrap().terms().len(), 3);
        assert!(p.eq(&lhs, &rhs).unwrap().is_distinct());
        // all real-point evaluations agree
        for i in -50..=0 {
            let pt = vec![rat(i, 3)];
            assert_eq!(p.eval_rat(&lhs, &pt).unwrap(), p.eval_rat(&rhs, &pt).unwrap());
        }
    }

    #[test]
    fn eq_of_normalized_and_witnesses() {
        let p = Presentation::freely_contracting(SemifieldTag::Bool, &["X", "Y"]).unwrap();
        let x = p.gen_poly("X").unwrap();
        let y = p.gen_poly("Y").unwrap();
        let e = x.join(&y.times(2, 2));
        assert!(p.eq(&e, &p.normalize(&e).unwrap()).unwrap().is_equal());
        match p.eq(&x, &y).unwrap() {
            EqResult::Distinct(Some(Witness::BPoint(pt))) => {
                assert_ne!(pt[0], pt[1]);
            }
            other => panic!("expected a separating B-point, got {other:?}"),
        }
    }

    #[test]
    fn monomial_relation_collapses_terms() {
        // Zv{U, V}/(U + V = -2): U + V + 2 is the unit
        let mut gens = vec![];
        for n in ["U", "V"] {
            gens.push(Generator {
                name: n.into(),
                sort: Sort::Contracting,
            });
        }
        let rel = Relation {
            kind: RelKind::Eq,
            lhs: TropPoly::from_terms(vec![Term {
                exps: vec![1, 1],
                coeff: Rat::zero(),
            }]),
            rhs: TropPoly::constant(2, rat_int(-2)),
        };
        let p = Presentation::new(SemifieldTag::Int, gens, vec![rel]).unwrap();
        assert_eq!(p.class(), PresClass::MonomialAdmissible);
        let uv2 = poly(&p, "U + V + 2");
        assert!(p.eq(&uv2, &poly(&p, "0")).unwrap().is_equal());
        // U v -2 normalizes to U: -2 = U+V <= U since V <= 0
        assert_eq!(p.normalize(&poly(&p, "U v -2")).unwrap(), poly(&p, "U"));
        // U v V is a genuine antichain
        assert_eq!(p.normalize(&poly(&p, "U v V")).unwrap().terms().len(), 2);
    }

    #[test]
    fn general_presentations_rewrite_and_separate() {
        // a relation with a join side leaves the monomial-admissible
        // class; equality is then three-valued, decided here by rewriting
        let gens = vec![
            Generator { name: "X".into(), sort: Sort::Contracting },
            Generator { name: "Y".into(), sort: Sort::Contracting },
        ];
        let rel = Relation {
            kind: RelKind::Eq,
            lhs: TropPoly::generator(0, 2),
            rhs: TropPoly::generator(1, 2).join(&TropPoly::constant(2, rat_int(-1))),
        };
        let p = Presentation::new(SemifieldTag::Int, gens, vec![rel]).unwrap();
        assert_eq!(p.class(), PresClass::General);
        let x = p.gen_poly("X").unwrap();
        let y_v_1 = p.gen_poly("Y").unwrap().join(&TropPoly::constant(2, rat_int(-1)));
        assert!(p.eq(&x, &y_v_1).unwrap().is_equal());
        // a shifted copy rewrites too
        assert!(p
            .eq(&x.plus(&x), &y_v_1.plus(&y_v_1))
            .unwrap()
            .is_equal());
        // a separating Boolean point yields Distinct
        match p.eq(&p.gen_poly("Y").unwrap(), &TropPoly::zero(2)).unwrap() {
            EqResult::Distinct(Some(_)) => {}
            other => panic!("expected a witnessed Distinct, got {other:?}"),
        }
    }

    #[test]
    fn null_presentation_is_trivial() {
        let p = Presentation::new(
            SemifieldTag::Bool,
            vec![],
            vec![Relation {
                kind: RelKind::Eq,
                lhs: TropPoly::zero(0),
                rhs: TropPoly::neg_inf(),
            }],
        )
        .unwrap();
        assert!(p
            .eq(&TropPoly::zero(0), &TropPoly::neg_inf())
            .unwrap()
            .is_equal());
    }

    #[test]
    fn tensor_sum_basics() {
        let p1 = Presentation::freely_contracting(SemifieldTag::Bool, &["X"]).unwrap();
        let p2 = Presentation::freely_contracting(SemifieldTag::Bool, &["Y"]).unwrap();
        let (sum, i1, i2) = Presentation::tensor_sum(&p1, &p2).unwrap();
        assert_eq!(sum.ngens(), 2);
        i1.validate().unwrap();
        i2.validate().unwrap();
        // unit: tensoring with the empty presentation changes nothing
        let unit = Presentation::freely_contracting(SemifieldTag::Bool, &[]).unwrap();
        let (same, _, _) = Presentation::tensor_sum(&p1, &unit).unwrap();
        assert_eq!(same.ngens(), 1);
        // name clashes get suffixes
        let (clash, _, _) = Presentation::tensor_sum(&p1, &p1).unwrap();
        assert_eq!(clash.gens()[1].name, "X_2");
        let int1 = Presentation::free_semiring(SemifieldTag::Int, &["X"]).unwrap();
        assert!(matches!(
            Presentation::tensor_sum(&p1, &int1),
            Err(Error::BaseMismatch)
        ));
    }

    #[test]
    fn integrality() {
        let zx = zv_contracting(&["X"]);
        assert_eq!(zx.is_integral(&zx.gen_poly("X").unwrap()).unwrap(), Tri::True);
        let free = Presentation::free_semiring(SemifieldTag::Int, &["X"]).unwrap();
        assert_eq!(
            free.is_integral(&free.gen_poly("X").unwrap()).unwrap(),
            Tri::False
        );
        assert_eq!(
            free.is_integral(&TropPoly::constant(1, rat_int(-2))).unwrap(),
            Tri::True
        );
    }

    #[test]
    fn contracting_quotient_of_free_is_bool_contracting() {
        let zx = Presentation::free_semiring(SemifieldTag::Int, &["X"]).unwrap();
        let (q, proj) = zx.contracting_quotient().unwrap();
        assert_eq!(q.base(), SemifieldTag::Bool);
        assert_eq!(q.gens()[0].sort, Sort::Contracting);
        // the projection forgets coefficients
        let e = poly(&zx, "X + -3 v 2");
        let img = proj.apply(&e).unwrap();
        let expect = q.gen_poly("X").unwrap().join(&TropPoly::zero(1));
        assert!(q.eq(&img, &expect).unwrap().is_equal());
        // idempotent on an already contracting presentation
        let bx = Presentation::freely_contracting(SemifieldTag::Bool, &["X"]).unwrap();
        let (q2, _) = bx.contracting_quotient().unwrap();
        assert_eq!(q2, bx);
        // degenerate base case
        let b = Presentation::freely_contracting(SemifieldTag::Bool, &[]).unwrap();
        let (qb, _) = b.contracting_quotient().unwrap();
        assert_eq!(qb, b);
    }

    #[test]
    fn contracting_quotient_universal_property() {
        // homs B{X} -> beta correspond to integral elements of beta; lifting
        // through the quotient of Zv[X] must agree on random images
        let zx = Presentation::free_semiring(SemifieldTag::Int, &["X"]).unwrap();
        let (q, proj) = zx.contracting_quotient().unwrap();
        let beta = Presentation::freely_contracting(SemifieldTag::Bool, &["T", "U"]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..20 {
            // a random integral element of beta
            let nterms = rng.gen_range(1..=2);
            let terms: Vec<Term> = (0..nterms)
                .map(|_| Term {
                    exps: vec![rng.gen_range(0..3u32), rng.gen_range(0..3u32)],
                    coeff: Rat::zero(),
                })
                .collect();
            let img = TropPoly::from_terms(terms);
            if beta.is_integral(&img).unwrap() != Tri::True {
                continue;
            }
            let hom_from_quotient =
                SemiringHom::new(q.clone(), beta.clone(), vec![img.clone()]).unwrap();
            // the composite Zv[X] -> q -> beta equals the forced hom sending
            // every constant to 0
            let e = poly(&zx, "2X + -5 v 1");
            let via_quotient = hom_from_quotient.apply(&proj.apply(&e).unwrap()).unwrap();
            let direct = {
                let forget = proj.apply(&e).unwrap();
                SemiringHom::new_unchecked(q.clone(), beta.clone(), vec![img.clone()])
                    .apply(&forget)
                    .unwrap()
            };
            assert!(beta.eq(&via_quotient, &direct).unwrap().is_equal());
        }
    }

    #[test]
    fn eval_checks_and_values() {
        let p = zv_contracting(&["X"]);
        let e = poly(&p, "2X v -2");
        let val = p.eval(&e, &[SemifieldValue::int(-1)]).unwrap();
        assert_eq!(val, SemifieldValue::int(-2));
        assert_eq!(
            p.eval(&TropPoly::neg_inf(), &[SemifieldValue::int(-7)]).unwrap(),
            SemifieldValue::neg_inf(SemifieldTag::Int)
        );
        assert!(matches!(
            p.eval(&e, &[SemifieldValue::int(1)]),
            Err(Error::SortViolated(_))
        ));
        // relation checking
        let chart = crate::complexes::dual_intersection_chart(&crate::complexes::SncStratum {
            ambient: 2,
            multiplicities: vec![1, 1],
        })
        .unwrap();
        let bad = chart.eval(
            &chart.gen_poly("X1").unwrap(),
            &[SemifieldValue::int(-1), SemifieldValue::int(-1)],
        );
        assert!(matches!(bad, Err(Error::RelationViolated(0))));
    }

    #[test]
    fn eval_is_homomorphism_on_random_points() {
        let p = zv_contracting(&["X", "Y"]);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let mk = |rng: &mut ChaCha8Rng| {
                let n = rng.gen_range(0..=3);
                TropPoly::from_terms(
                    (0..n)
                        .map(|_| Term {
                            exps: vec![rng.gen_range(0..3u32), rng.gen_range(0..3u32)],
                            coeff: rat_int(rng.gen_range(-4..=4)),
                        })
                        .collect(),
                )
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            let pt = vec![
                SemifieldValue::int(rng.gen_range(-5..=0)),
                SemifieldValue::int(rng.gen_range(-5..=0)),
            ];
            let join_then = p.eval(&a.join(&b), &pt).unwrap();
            let then_join = p.eval(&a, &pt).unwrap().join(&p.eval(&b, &pt).unwrap()).unwrap();
            assert_eq!(join_then, then_join);
            let plus_then = p.eval(&a.plus(&b), &pt).unwrap();
            let then_plus = p.eval(&a, &pt).unwrap().plus(&p.eval(&b, &pt).unwrap()).unwrap();
            assert_eq!(plus_then, then_plus);
        }
    }

    #[test]
    fn normalization_is_idempotent_and_congruent() {
        let p = zv_contracting(&["X", "Y"]);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..300 {
            let mk = |rng: &mut ChaCha8Rng| {
                let n = rng.gen_range(0..=3);
                TropPoly::from_terms(
                    (0..n)
                        .map(|_| Term {
                            exps: vec![rng.gen_range(0..4u32), rng.gen_range(0..4u32)],
                            coeff: rat_int(rng.gen_range(-3..=3)),
                        })
                        .collect(),
                )
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            let c = mk(&mut rng);
            let na = p.normalize(&a).unwrap();
            assert_eq!(p.normalize(&na).unwrap(), na);
            if p.eq(&a, &b).unwrap().is_equal() {
                assert!(p.eq(&a.join(&c), &b.join(&c)).unwrap().is_equal());
                assert!(p.eq(&a.plus(&c), &b.plus(&c)).unwrap().is_equal());
            }
        }
    }

    #[test]
    fn freely_contracting_adjunction_window() {
        // maps S -> beta° correspond to homs alpha{S} -> beta: an image
        // assignment is a valid hom exactly when every image is integral
        let src = Presentation::freely_contracting(SemifieldTag::Bool, &["A", "B"]).unwrap();
        let beta = Presentation::freely_contracting(SemifieldTag::Bool, &["T", "U"]).unwrap();
        let window: Vec<TropPoly> = {
            let mut v = vec![TropPoly::neg_inf(), TropPoly::zero(2)];
            for (i, j) in [(1u32, 0u32), (0, 1), (1, 1), (2, 0)] {
                v.push(TropPoly::from_terms(vec![Term {
                    exps: vec![i, j],
                    coeff: Rat::zero(),
                }]));
            }
            // one non-integral candidate cannot appear over B (no positive
            // constants), so all window elements are integral; check that
            // each pair of images yields a hom and distinct pairs stay
            // distinct
            v
        };
        let mut homs = 0;
        for a in &window {
            for b in &window {
                if SemiringHom::new(src.clone(), beta.clone(), vec![a.clone(), b.clone()]).is_ok() {
                    homs += 1;
                }
            }
        }
        assert_eq!(homs, window.len() * window.len());
    }
}
