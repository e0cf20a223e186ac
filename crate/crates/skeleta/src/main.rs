//! Thin command-line front end over the skeleta library: DSL parsing,
//! command dispatch and JSON/SVG emission. Exit codes: 0 on success, 1
//! on a domain error (with machine-readable error JSON on stderr), 2 on
//! a parse error.

use clap::{Parser, Subcommand};
use serde_json::json;
use skeleta::complexes::{dual_intersection_chart, elliptic_ks_skeleton, SncStratum};
use skeleta::dsl;
use skeleta::error::Error;
use skeleta::geometry::fmt_rat;
use skeleta::localize::{bounded_localization, cellular_cut, BoundSpec, LocalizationSpec};
use skeleta::polytope::{face_lattice, polytope_from_json, RationalPolytope};
use skeleta::presentation::{EqResult, Presentation, Witness};
use skeleta::semifield::parse_rat;
use skeleta::spectrum::{cellular_cover_check, enumerate_points, spectrum_json};
use skeleta::svg;
use skeleta::tropicalize::{corner_locus, grid_oracle, oracle_agrees, trop_relations};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "skeleta", version, about = "exact tropical semiring computations")]
struct Cli {
    /// Output file; stdout when omitted
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, default_value = "text")]
    format: String,
    /// Seed for randomized suites (SKELETA_SEED as fallback)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Saturation cap for localized equality
    #[arg(long, global = true)]
    kmax: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normalize an element of a presented semiring
    Normalize {
        /// presentation file (.sr DSL)
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
    },
    /// Decide equality of two elements
    Eq {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        lhs: String,
        #[arg(long, allow_hyphen_values = true)]
        rhs: String,
    },
    /// Enumerate the prime spectrum of a contracting presentation
    Spec { file: PathBuf },
    /// Localize a presentation at an element
    Localize {
        file: PathBuf,
        /// element to invert (or cut below when --bound cut)
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        /// bound expression, or one of: zero, free, cut
        #[arg(long, allow_hyphen_values = true)]
        bound: String,
    },
    /// Polytope queries: faces, spec, eval, semiring
    Polytope {
        verb: String,
        /// polytope JSON file {rank, halfspaces:[{f, lambda}]}
        #[arg(long)]
        polytope: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        expr: Option<String>,
        /// rational point, comma separated
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
    /// Dual intersection chart of a normal-crossings stratum
    Dualcx {
        /// ambient coordinate count
        #[arg(long)]
        ambient: usize,
        /// multiplicities of the stratum components, comma separated
        #[arg(long, allow_hyphen_values = true)]
        mults: String,
    },
    /// The circle skeleton of a degenerating elliptic curve
    Ks {
        #[arg(long)]
        n: usize,
    },
    /// Tropicalize a polynomial and compute its corner locus
    Trop {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// polytope JSON file for the domain
        #[arg(long)]
        polytope: Option<PathBuf>,
        /// clip window like "[-4,1]^2" (also the domain when no polytope)
        #[arg(long)]
        clip: Option<String>,
        /// emit the presentation of the tropicalized subvariety
        #[arg(long)]
        relations: bool,
        /// grid oracle resolution (e.g. 1/8) for cross-validation
        #[arg(long)]
        resolution: Option<String>,
    },
    /// Check the cellular cover formula on a presentation
    CoverCheck {
        file: PathBuf,
        /// parts, ';' separated element expressions
        #[arg(long, allow_hyphen_values = true)]
        parts: String,
    },
    /// Run the acceptance suite
    Accept {
        #[arg(long)]
        case: Option<usize>,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Some(k) = cli.kmax {
        skeleta::localize::set_saturation_cap(k);
    }
    match run(&cli) {
        Ok(output) => {
            emit(&cli, &output);
        }
        Err(e @ Error::Parse { .. }) => {
            eprintln!("{}", error_json(&e));
            std::process::exit(2);
        }
        Err(e) => {
            eprintln!("{}", error_json(&e));
            std::process::exit(1);
        }
    }
}

fn error_json(e: &Error) -> String {
    json!({ "schema": "skeleta/1", "error": e.to_string() }).to_string()
}

fn emit(cli: &Cli, output: &str) {
    match &cli.out {
        Some(path) => std::fs::write(path, output).expect("write output"),
        None => println!("{output}"),
    }
}

fn seed(cli: &Cli) -> u64 {
    cli.seed
        .or_else(|| {
            std::env::var("SKELETA_SEED")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(17)
}

fn load_presentation(path: &PathBuf) -> Result<Presentation, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    dsl::parse_presentation(&text)
}

fn load_polytope(path: &PathBuf) -> Result<RationalPolytope, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
    let j: skeleta::polytope::PolytopeJson =
        serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("bad polytope JSON: {e}")))?;
    polytope_from_json(&j)
}

fn parse_clip(clip: &str) -> Result<RationalPolytope, Error> {
    // "[a,b]^2"
    let inner = clip
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix("]^2"))
        .ok_or_else(|| Error::Invalid("clip must look like [a,b]^2".into()))?;
    let (a, b) = inner
        .split_once(',')
        .ok_or_else(|| Error::Invalid("clip must look like [a,b]^2".into()))?;
    RationalPolytope::square(parse_rat(a.trim())?, parse_rat(b.trim())?)
}

fn witness_json(w: &Option<Witness>) -> serde_json::Value {
    match w {
        None => serde_json::Value::Null,
        Some(Witness::BPoint(pt)) => json!({
            "kind": "b-point",
            "assignment": pt.iter().map(|&v| if v { "0" } else { "-inf" }).collect::<Vec<_>>(),
        }),
        Some(Witness::RatPoint(pt)) => json!({
            "kind": "rational-point",
            "coords": pt.iter().map(fmt_rat).collect::<Vec<_>>(),
        }),
    }
}

fn run(cli: &Cli) -> Result<String, Error> {
    match &cli.command {
        Command::Normalize { file, expr } => {
            let p = load_presentation(file)?;
            let e = dsl::parse_element(&p, expr)?;
            let n = p.normalize(&e)?;
            if cli.format == "json" {
                Ok(json!({ "schema": "skeleta/1", "normal_form": n.display(&p).to_string() })
                    .to_string())
            } else {
                Ok(n.display(&p).to_string())
            }
        }
        Command::Eq { file, lhs, rhs } => {
            let p = load_presentation(file)?;
            let a = dsl::parse_element(&p, lhs)?;
            let b = dsl::parse_element(&p, rhs)?;
            let verdict = p.eq(&a, &b)?;
            let (word, witness) = match &verdict {
                EqResult::Equal => ("equal", serde_json::Value::Null),
                EqResult::Distinct(w) => ("distinct", witness_json(w)),
                EqResult::Unknown => ("unknown", serde_json::Value::Null),
            };
            if cli.format == "json" {
                Ok(json!({ "schema": "skeleta/1", "verdict": word, "witness": witness })
                    .to_string())
            } else {
                Ok(word.to_string())
            }
        }
        Command::Spec { file } => {
            let p = load_presentation(file)?;
            let spec = enumerate_points(&p)?;
            Ok(serde_json::to_string_pretty(&spectrum_json(&spec)).unwrap())
        }
        Command::Localize { file, at, bound } => {
            let p = load_presentation(file)?;
            let at_poly = dsl::parse_element(&p, at)?;
            let loc = match bound.as_str() {
                "cut" => cellular_cut(&p, &at_poly)?,
                "zero" => bounded_localization(
                    &p,
                    &LocalizationSpec { at: at_poly, bound: BoundSpec::Zero },
                )?,
                "free" => bounded_localization(
                    &p,
                    &LocalizationSpec { at: at_poly, bound: BoundSpec::SelfBound },
                )?,
                expr => {
                    let t = dsl::parse_element(&p, expr)?;
                    bounded_localization(
                        &p,
                        &LocalizationSpec { at: at_poly, bound: BoundSpec::Element(t) },
                    )?
                }
            };
            let gens: Vec<serde_json::Value> = loc
                .result
                .gens()
                .iter()
                .map(|g| {
                    json!({
                        "name": g.name,
                        "contracting": g.sort == skeleta::presentation::Sort::Contracting
                    })
                })
                .collect();
            let rels: Vec<String> = loc
                .result
                .relations()
                .iter()
                .map(|r| {
                    format!(
                        "{} {} {}",
                        r.lhs.display(&loc.result),
                        if r.kind == skeleta::presentation::RelKind::Eq { "=" } else { "<=" },
                        r.rhs.display(&loc.result)
                    )
                })
                .collect();
            Ok(json!({ "schema": "skeleta/1", "generators": gens, "relations": rels }).to_string())
        }
        Command::Polytope { verb, polytope, expr, point } => {
            let p = load_polytope(polytope)?;
            match verb.as_str() {
                "faces" => {
                    let faces = face_lattice(&p)?;
                    let list: Vec<serde_json::Value> = faces
                        .iter()
                        .map(|f| json!({ "active": f.active, "dim": f.dim }))
                        .collect();
                    Ok(json!({ "schema": "skeleta/1", "faces": list }).to_string())
                }
                "spec" => {
                    let ps = p.semiring()?;
                    let spec = enumerate_points(&ps.pres)?;
                    Ok(serde_json::to_string_pretty(&spectrum_json(&spec)).unwrap())
                }
                "semiring" => {
                    let ps = p.semiring()?;
                    let gens: Vec<String> = ps
                        .pres
                        .gens()
                        .iter()
                        .zip(&ps.functionals)
                        .zip(&ps.shifts)
                        .map(|((g, m), s)| format!("{} = X_{m:?} - {}", g.name, fmt_rat(s)))
                        .collect();
                    let rels: Vec<String> = ps
                        .pres
                        .relations()
                        .iter()
                        .map(|r| {
                            format!(
                                "{} {} {}",
                                r.lhs.display(&ps.pres),
                                if r.kind == skeleta::presentation::RelKind::Eq { "=" } else { "<=" },
                                r.rhs.display(&ps.pres)
                            )
                        })
                        .collect();
                    Ok(json!({ "schema": "skeleta/1", "generators": gens, "relations": rels })
                        .to_string())
                }
                "eval" => {
                    let ps = p.semiring()?;
                    let e = dsl::parse_element(
                        &ps.pres,
                        expr.as_deref().ok_or_else(|| Error::Invalid("--expr required".into()))?,
                    )?;
                    let pt: Vec<skeleta::geometry::Rat> = point
                        .as_deref()
                        .ok_or_else(|| Error::Invalid("--point required".into()))?
                        .split(',')
                        .map(|s| parse_rat(s.trim()))
                        .collect::<Result<_, _>>()?;
                    let v = ps.eval_real(&e, &pt)?;
                    Ok(match v {
                        Some(r) => fmt_rat(&r),
                        None => "-inf".to_string(),
                    })
                }
                other => Err(Error::Invalid(format!("unknown polytope verb {other}"))),
            }
        }
        Command::Dualcx { ambient, mults } => {
            let multiplicities: Vec<u32> = mults
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| Error::Invalid("bad multiplicity".into())))
                .collect::<Result<_, _>>()?;
            let chart = dual_intersection_chart(&SncStratum {
                ambient: *ambient,
                multiplicities,
            })?;
            let spec = enumerate_points(&chart)?;
            Ok(serde_json::to_string_pretty(&spectrum_json(&spec)).unwrap())
        }
        Command::Ks { n } => {
            let complex = elliptic_ks_skeleton(*n)?;
            if cli.format == "svg" {
                Ok(svg::complex_svg(&complex))
            } else {
                Ok(json!({
                    "schema": "skeleta/1",
                    "charts": complex.charts.iter().map(|c| c.label.clone()).collect::<Vec<_>>(),
                    "points": complex.global_points,
                    "specialization_pairs": complex.specialization,
                })
                .to_string())
            }
        }
        Command::Trop { poly, polytope, clip, relations, resolution } => {
            let domain = match (polytope, clip) {
                (Some(path), _) => load_polytope(path)?,
                (None, Some(c)) => parse_clip(c)?,
                (None, None) => {
                    return Err(Error::Invalid("--polytope or --clip required".into()))
                }
            };
            let ps = domain.semiring()?;
            let f = dsl::parse_tpoly(poly, None)?;
            let trop = skeleta::tropicalize::tropicalize_poly(&f, &ps)?;
            if *relations {
                let pres = trop_relations(&[f], &ps)?;
                let rels: Vec<String> = pres
                    .relations()
                    .iter()
                    .map(|r| {
                        format!(
                            "rel {} {} {};",
                            r.lhs.display(&pres),
                            if r.kind == skeleta::presentation::RelKind::Eq { "=" } else { "<=" },
                            r.rhs.display(&pres)
                        )
                    })
                    .collect();
                return Ok(rels.join("\n"));
            }
            let curve = corner_locus(&trop, &ps)?;
            if cli.format == "svg" {
                let vs = domain.vertices();
                let xs: Vec<f64> = vs.iter().map(|v| *v[0].numer() as f64 / *v[0].denom() as f64).collect();
                let ys: Vec<f64> = vs.iter().map(|v| *v[1].numer() as f64 / *v[1].denom() as f64).collect();
                let lo_x = xs.iter().cloned().fold(f64::INFINITY, f64::min) - 1.0;
                let hi_x = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 1.0;
                let lo_y = ys.iter().cloned().fold(f64::INFINITY, f64::min) - 1.0;
                let hi_y = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 1.0;
                return Ok(svg::curve_svg(&curve, (lo_x, lo_y, hi_x, hi_y)));
            }
            let mut out = json!({
                "schema": "skeleta/1",
                "tropicalization": trop.display(&ps.pres).to_string(),
                "vertices": curve.vertices,
                "segments": curve.segments,
                "rays": curve.rays,
            });
            if let Some(res) = resolution {
                let h = parse_rat(res)?;
                let window = match clip {
                    Some(c) => parse_clip(c)?,
                    None if domain.is_compact() => domain.clone(),
                    None => return Err(Error::Invalid("--clip required for the oracle".into())),
                };
                let oracle = grid_oracle(&trop, &ps, &h, &window)?;
                out["oracle_marked_cells"] = json!(oracle.marked.len());
                out["oracle_agrees"] = json!(oracle_agrees(&curve, &oracle));
            }
            Ok(out.to_string())
        }
        Command::CoverCheck { file, parts } => {
            let p = load_presentation(file)?;
            let parts: Vec<skeleta::presentation::TropPoly> = parts
                .split(';')
                .map(|s| dsl::parse_element(&p, s.trim()))
                .collect::<Result<_, _>>()?;
            let cert = cellular_cover_check(&p, &parts)?;
            Ok(serde_json::to_string_pretty(&json!({
                "schema": "skeleta/1",
                "holds": cert.holds,
                "join_open": cert.join_open,
                "part_opens": cert.part_opens,
            }))
            .unwrap())
        }
        Command::Accept { case } => {
            let seed = seed(cli);
            let results = match case {
                Some(id) => vec![skeleta::accept::run_case(*id, seed)],
                None => skeleta::accept::run_all(seed),
            };
            let mut lines = Vec::new();
            let mut all_pass = true;
            for r in &results {
                all_pass &= r.pass;
                lines.push(format!(
                    "{} {:2} {:<20} {:>6} ms  {}",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.id,
                    r.name,
                    r.millis,
                    r.detail
                ));
            }
            let table = lines.join("\n");
            if all_pass {
                Ok(table)
            } else {
                emit(cli, &table);
                Err(Error::Invalid("acceptance suite failed".into()))
            }
        }
    }
}
