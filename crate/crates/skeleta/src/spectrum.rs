//! Prime spectra of contracting presentations at finite scale: B-point
//! enumeration, the topology generated by basic opens U_X, the
//! specialization order, and the cellular cover formula.
//!
//! A point is an assignment of generators into {0, -inf} satisfying
//! every relation after reducing coefficients to B. Basic opens satisfy
//! U_{X v Y} = U_X u U_Y and U_{X+Y} = U_X n U_Y, so the generator and
//! relation-side probes generate the topology.

use crate::error::{Error, Result};
use crate::presentation::{eval_element_bool, Presentation, Sort, Tri, TropPoly};
use serde::Serialize;
use std::collections::BTreeMap;

pub const GENERATOR_CAP: usize = 20;

/// A Boolean point: generator -> {0 (true), -inf (false)}.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BPoint {
    pub assignment: Vec<bool>,
}

impl BPoint {
    /// Generators sent to -inf: the open prime ideal the point represents.
    pub fn kernel(&self) -> Vec<usize> {
        self.assignment
            .iter()
            .enumerate()
            .filter(|(_, &v)| !v)
            .map(|(i, _)| i)
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct FiniteSpectrum {
    pub points: Vec<BPoint>,
    /// canonical element text -> indices of points in its basic open
    pub basic_opens: BTreeMap<String, Vec<usize>>,
    /// pairs (i, j) with j a specialization of i (j in the closure of i)
    pub specialization: Vec<(usize, usize)>,
}

impl FiniteSpectrum {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// j specializes from i: every basic open containing j contains i,
    /// i.e. the zero set of j is contained in that of i.
    pub fn specializes(&self, i: usize, j: usize) -> bool {
        i == j || self.specialization.contains(&(i, j))
    }

    /// All opens of the finite space: the generization-closed subsets.
    pub fn opens(&self) -> Vec<Vec<usize>> {
        let n = self.points.len();
        let mut opens = Vec::new();
        'mask: for mask in 0..(1u32 << n) {
            for j in 0..n {
                if mask & (1 << j) != 0 {
                    for i in 0..n {
                        if self.specializes(i, j) && mask & (1 << i) == 0 {
                            continue 'mask;
                        }
                    }
                }
            }
            opens.push((0..n).filter(|&j| mask & (1 << j) != 0).collect());
        }
        opens
    }
}

fn ensure_contracting(p: &Presentation) -> Result<()> {
    if let Some(g) = p.gens().iter().find(|g| g.sort != Sort::Contracting) {
        return Err(Error::NotContracting(format!(
            "generator {} is not contracting",
            g.name
        )));
    }
    Ok(())
}

/// Enumerates the B-points of a contracting presentation and computes
/// the topology from the generator and relation-side probes.
pub fn enumerate_points(p: &Presentation) -> Result<FiniteSpectrum> {
    enumerate_points_with_probes(p, &[])
}

pub fn enumerate_points_with_probes(
    p: &Presentation,
    extra_probes: &[TropPoly],
) -> Result<FiniteSpectrum> {
    ensure_contracting(p)?;
    if p.ngens() > GENERATOR_CAP {
        return Err(Error::TooManyGenerators(p.ngens(), GENERATOR_CAP));
    }
    let points: Vec<BPoint> = p
        .bool_points()?
        .into_iter()
        .map(|assignment| BPoint { assignment })
        .collect();
    let mut probes: Vec<TropPoly> = (0..p.ngens())
        .map(|i| TropPoly::generator(i, p.ngens()))
        .collect();
    for rel in p.relations() {
        probes.push(rel.lhs.clone());
        probes.push(rel.rhs.clone());
    }
    probes.extend(extra_probes.iter().cloned());
    let mut basic_opens = BTreeMap::new();
    for probe in &probes {
        let open = basic_open_indices(p, probe, &points)?;
        basic_opens.insert(p.normalize(probe)?.display(p).to_string(), open);
    }
    let mut specialization = Vec::new();
    for i in 0..points.len() {
        for j in 0..points.len() {
            if i != j && zero_subset(&points[j], &points[i]) {
                specialization.push((i, j));
            }
        }
    }
    Ok(FiniteSpectrum {
        points,
        basic_opens,
        specialization,
    })
}

/// zero(a) subset of zero(b)
fn zero_subset(a: &BPoint, b: &BPoint) -> bool {
    a.assignment
        .iter()
        .zip(&b.assignment)
        .all(|(&x, &y)| !x || y)
}

fn basic_open_indices(p: &Presentation, e: &TropPoly, points: &[BPoint]) -> Result<Vec<usize>> {
    // evaluate the canonical form, so that opens agree with the monomial
    // model's equality
    let e = p.normalize(e)?;
    points
        .iter()
        .enumerate()
        .filter_map(|(i, pt)| match eval_element_bool(&e, &pt.assignment) {
            Some(true) => Some(Ok(i)),
            Some(false) => None,
            None => Some(Err(Error::NotContracting(
                "element does not reduce to B".into(),
            ))),
        })
        .collect()
}

/// The basic open U_S of an integral element.
pub fn basic_open(p: &Presentation, s: &TropPoly) -> Result<Vec<usize>> {
    let spec = enumerate_points(p)?;
    basic_open_indices(p, s, &spec.points)
}

/// Result of identifying the spectrum of a cellular localization with a
/// basic open of the base.
#[derive(Debug)]
pub struct OpenOfLocalization {
    pub open: Vec<usize>,
    pub localized: FiniteSpectrum,
    /// index into the base spectrum for each localized point
    pub embedding: Vec<usize>,
}

/// Computes U_S and the spectrum of the cellular localization at S, and
/// verifies the canonical bijection between the two.
pub fn open_of_localization(p: &Presentation, s: &TropPoly) -> Result<OpenOfLocalization> {
    match p.is_integral(s)? {
        Tri::True => {}
        _ => return Err(Error::NotIntegral(format!("{}", s.display(p)))),
    }
    let base = enumerate_points(p)?;
    let open = basic_open_indices(p, s, &base.points)?;
    let loc = crate::localize::cellular_localization(p, s)?;
    let localized = enumerate_points(&loc.result)?;
    let mut embedding = Vec::with_capacity(localized.points.len());
    for q in &localized.points {
        let idx = base
            .points
            .iter()
            .position(|b| b.assignment == q.assignment)
            .ok_or_else(|| Error::Invalid("localized point does not extend".into()))?;
        embedding.push(idx);
    }
    let mut embedded: Vec<usize> = embedding.clone();
    embedded.sort_unstable();
    let mut expected = open.clone();
    expected.sort_unstable();
    if embedded != expected {
        return Err(Error::Invalid(
            "localized spectrum does not match the basic open".into(),
        ));
    }
    Ok(OpenOfLocalization {
        open,
        localized,
        embedding,
    })
}

/// Certificate for the cellular cover formula on a presentation: which
/// points of U_{v parts} lie in which U_part.
#[derive(Debug, Serialize)]
pub struct CoverCertificate {
    pub holds: bool,
    pub join_open: Vec<usize>,
    pub part_opens: Vec<Vec<usize>>,
}

/// Verifies U_{v S_i} = union of the U_{S_i} pointwise, including the
/// identification of each side with the spectrum of the corresponding
/// cellular localization.
pub fn cellular_cover_check(p: &Presentation, parts: &[TropPoly]) -> Result<CoverCertificate> {
    if parts.is_empty() {
        return Err(Error::Invalid("cover check needs at least one part".into()));
    }
    let mut join = TropPoly::neg_inf();
    for part in parts {
        match p.is_integral(part)? {
            Tri::True => {}
            _ => return Err(Error::NotIntegral(format!("{}", part.display(p)))),
        }
        join = join.join(part);
    }
    let join_data = open_of_localization(p, &join)?;
    let mut part_opens = Vec::new();
    let mut union: Vec<usize> = Vec::new();
    for part in parts {
        let data = open_of_localization(p, part)?;
        union.extend(data.open.iter().copied());
        part_opens.push(data.open);
    }
    union.sort_unstable();
    union.dedup();
    let mut join_open = join_data.open.clone();
    join_open.sort_unstable();
    let holds = join_open == union;
    Ok(CoverCertificate {
        holds,
        join_open: join_data.open,
        part_opens,
    })
}

/// JSON shape for the `spec` CLI verb.
#[derive(Debug, Serialize)]
pub struct SpectrumJson {
    pub schema: &'static str,
    pub points: Vec<Vec<&'static str>>,
    pub specialization_pairs: Vec<(usize, usize)>,
    pub basic_opens: BTreeMap<String, Vec<usize>>,
}

pub fn spectrum_json(spec: &FiniteSpectrum) -> SpectrumJson {
    SpectrumJson {
        schema: "skeleta/1",
        points: spec
            .points
            .iter()
            .map(|p| {
                p.assignment
                    .iter()
                    .map(|&v| if v { "0" } else { "-inf" })
                    .collect()
            })
            .collect(),
        specialization_pairs: spec.specialization.clone(),
        basic_opens: spec.basic_opens.clone(),
    }
}
