//! Command-line front end: builds curves, inflection components, intersections,
//! modifications and patchworks, and cross-checks them numerically.

pub mod input;
pub mod svg;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tropinflect_core::gen::{honeycomb, random, HoneycombOptions};
use tropinflect_core::inflect::{genericity_check, inflection_components, inflection_report};
use tropinflect_core::intersect::{components as intersection_components, stable_points};
use tropinflect_core::modify::{modify_curve, modify_plane, restriction_divisor, vertical_ends};
use tropinflect_core::patchwork::{patchwork_curve, SignedTriangulation};
use tropinflect_core::rational::fmt_rat;
use tropinflect_core::{build_curve, Piece, RationalPoint, TropicalCurve, TropicalPolynomial};
use tropinflect_oracle::numeric::{numeric_inflections, parse_t, DEFAULT_PREC};
use tropinflect_oracle::verify::{choose_t, min_gap, report_from, TOL_FRACTION};
use tropinflect_oracle::ClassicalCurve;

use crate::svg::{render_svg, Scene};

pub const PREC_ENV: &str = "TROPINFLECT_PREC";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Svg,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "tropinflect", version, about = "Tropical curves and their inflection points")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Instantiation value for the oracle, e.g. `1e-3` or `1/1000`.
    #[arg(long, global = true)]
    pub t: Option<String>,
    /// Working precision in bits (overrides TROPINFLECT_PREC).
    #[arg(long, global = true)]
    pub prec: Option<usize>,
    /// Clustering radius in valuation units; defaults to 0.2 times the smallest component gap.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Length of ray stubs in SVG output, in plane units.
    #[arg(long = "stub-len", global = true)]
    pub stub_len: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a curve and report balancing.
    Curve {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Inflection components and their multiplicities.
    Inflect {
        #[arg(allow_hyphen_values = true)]
        poly: String,
    },
    /// Stable intersection of two curves.
    Intersect {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Modification along a polynomial: of the plane, or of a curve given with `--curve`.
    Modify {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        curve: Option<String>,
        /// Divisor JSON; defaults to the restriction divisor of the polynomial on the curve.
        #[arg(long)]
        divisor: Option<PathBuf>,
    },
    /// Numeric inflection points of a realization, clustered onto the tropical components.
    OracleVerify { realization: PathBuf },
    /// Combinatorial patchwork of a primitive triangulation.
    Patchwork {
        #[arg(allow_hyphen_values = true)]
        poly: String,
        /// `harnack`, `plus`, `minus` or a JSON file `[[i, j, sign], ...]`.
        #[arg(long, default_value = "harnack")]
        signs: String,
    },
    /// Example generators.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    Honeycomb {
        d: u32,
        #[arg(long, default_value = "1")]
        scale: String,
        /// Skip the symmetry-breaking perturbation.
        #[arg(long)]
        symmetric: bool,
        /// Emit a realization with the given signs instead of the tropical polynomial.
        #[arg(long)]
        realize: Option<String>,
    },
    Random {
        d: u32,
        #[arg(long)]
        realize: Option<String>,
    },
}

/// Exit code and the text destined for stdout and stderr.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Artifact {
    body: String,
    mismatch: bool,
}

impl Artifact {
    fn ok(body: String) -> Self {
        Artifact { body, mismatch: false }
    }
}

fn json<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("serializable");
    s.push('\n');
    s
}

fn pt(p: &RationalPoint) -> String {
    format!("({}, {})", fmt_rat(&p.x), fmt_rat(&p.y))
}

fn piece_text(p: &Piece) -> String {
    match p {
        Piece::Point(a) => format!("point {}", pt(a)),
        Piece::Segment(a, b) => format!("segment {} -- {}", pt(a), pt(b)),
        Piece::Ray(a, d) => format!("ray {} + s({}, {})", pt(a), d.i, d.j),
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli) {
        Ok(a) => {
            let code = if a.mismatch { EXIT_MISMATCH } else { EXIT_OK };
            match &cli.out {
                Some(path) => match std::fs::write(path, &a.body) {
                    Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
                    Err(e) => Outcome { code: EXIT_INVALID, stdout: String::new(), stderr: format!("error: writing {}: {e}\n", path.display()) },
                },
                None => Outcome { code, stdout: a.body, stderr: String::new() },
            }
        }
        Err(e) => Outcome { code: EXIT_INVALID, stdout: String::new(), stderr: format!("error: {e:#}\n") },
    }
}

fn precision(cli: &Cli) -> Result<usize> {
    if let Some(p) = cli.prec {
        return Ok(p);
    }
    match std::env::var(PREC_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| anyhow!("{PREC_ENV}=`{v}` is not a bit count")),
        Err(_) => Ok(DEFAULT_PREC),
    }
}

fn execute(cli: &Cli) -> Result<Artifact> {
    let seed = cli.seed.unwrap_or(0);
    let load = |s: &str| input::polynomial(s, seed);
    let svg = |scene: Scene| Artifact::ok(render_svg(&scene, cli.stub_len));
    match &cli.command {
        Command::Curve { poly } => {
            let c = build_curve(&load(poly)?)?;
            Ok(match cli.format {
                Format::Json => Artifact::ok(json(&CurveOut::new(&c))),
                Format::Svg => svg(Scene::curve(&c)),
                Format::Text => Artifact::ok(curve_text(&c)),
            })
        }
        Command::Inflect { poly } => {
            let c = build_curve(&load(poly)?)?;
            let report = inflection_report(&c)?;
            Ok(match cli.format {
                Format::Json => Artifact::ok(json(&report)),
                Format::Svg => svg(Scene::inflection(&c, &report.components)),
                Format::Text => {
                    let mut s = String::new();
                    for (k, comp) in report.components.iter().enumerate() {
                        let geo: Vec<String> = comp.geometry.iter().map(piece_text).collect();
                        let _ = writeln!(s, "component {k}: mu={} mu_real={} {}", comp.mu, comp.mu_real, geo.join("; "));
                    }
                    let m = &report.summary;
                    let _ = writeln!(s, "sum_mu {} sum_mu_real {} generic {}", m.sum_mu, m.sum_mu_real, m.generic);
                    Artifact::ok(s)
                }
            })
        }
        Command::Intersect { a, b } => {
            let (c1, c2) = (build_curve(&load(a)?)?, build_curve(&load(b)?)?);
            let comps = intersection_components(&c1, &c2)?;
            let points = stable_points(&c1, &c2);
            let total: i64 = points.iter().map(|p| p.multiplicity).sum();
            Ok(match cli.format {
                Format::Json => Artifact::ok(json(&serde_json::json!({ "points": points, "components": comps, "total": total }))),
                Format::Svg => svg(Scene::intersection(&c1, &c2, &comps)),
                Format::Text => {
                    let mut s = String::new();
                    for p in &points {
                        let _ = writeln!(s, "point {} mult {}", pt(&p.position), p.multiplicity);
                    }
                    for (k, e) in comps.iter().enumerate() {
                        let geo: Vec<String> = e.geometry.iter().map(piece_text).collect();
                        let _ = writeln!(s, "component {k}: total {} compact {} {}", e.total, e.compact, geo.join("; "));
                    }
                    let _ = writeln!(s, "total {total}");
                    Artifact::ok(s)
                }
            })
        }
        Command::Modify { poly, curve, divisor } => {
            let p = load(poly)?;
            let g = match curve {
                None => {
                    if divisor.is_some() {
                        bail!("--divisor needs --curve");
                    }
                    modify_plane(&p)?
                }
                Some(c) => {
                    let c = build_curve(&load(c)?)?;
                    let d = match divisor {
                        Some(path) => input::divisor(path)?,
                        None => restriction_divisor(&c, &p),
                    };
                    modify_curve(&c, &p, &d)?
                }
            };
            Ok(match cli.format {
                Format::Json => Artifact::ok(json(&g)),
                Format::Svg => svg(Scene::space_graph(&g)),
                Format::Text => {
                    let mut s = String::new();
                    for (k, v) in g.vertices.iter().enumerate() {
                        let _ = writeln!(s, "vertex {k}: ({}, {}, {}) valence {}", fmt_rat(&v.x), fmt_rat(&v.y), fmt_rat(&v.z), g.valence(k));
                    }
                    for q in vertical_ends(&g).points {
                        let _ = writeln!(s, "vertical end over {} weight {}", pt(&q.point), q.weight);
                    }
                    let _ = writeln!(s, "balanced {}", g.is_balanced());
                    Artifact::ok(s)
                }
            })
        }
        Command::OracleVerify { realization } => oracle_verify(cli, realization),
        Command::Patchwork { poly, signs } => {
            let p = load(poly)?;
            let d = p.standard_degree().ok_or_else(|| anyhow!("Newton polygon must be a standard triangle"))?;
            let st = SignedTriangulation::new(&p, input::signs(signs, d)?)?;
            let dg = patchwork_curve(&st);
            Ok(match cli.format {
                Format::Json => Artifact::ok(json(&serde_json::json!({
                    "d": d,
                    "components": dg.components.len(),
                    "ovals": dg.ovals(),
                    "pseudolines": dg.pseudolines(),
                    "per_component_arc_count": dg.components.iter().map(|c| c.arcs.len()).collect::<Vec<_>>(),
                }))),
                Format::Svg => svg(Scene::patchwork(&st, &dg)),
                Format::Text => Artifact::ok(format!(
                    "components {} ovals {} pseudolines {}\n",
                    dg.components.len(),
                    dg.ovals(),
                    dg.pseudolines()
                )),
            })
        }
        Command::Gen { kind } => {
            let (p, realize) = match kind {
                GenKind::Honeycomb { d, scale, symmetric, realize } => {
                    let opts = HoneycombOptions { scale: input::rational(scale)?, perturb: (!symmetric).then_some(seed) };
                    (honeycomb(*d, &opts)?, realize)
                }
                GenKind::Random { d, realize } => (random(*d, seed)?, realize),
            };
            if let Some(signs) = realize {
                let d = p.standard_degree().expect("generators use T_d");
                let x = ClassicalCurve::realize(&p, &input::signs(signs, d)?)?;
                let mut body = x.to_json();
                body.push('\n');
                return Ok(Artifact::ok(body));
            }
            Ok(match cli.format {
                Format::Json => Artifact::ok(json(&p)),
                Format::Svg => svg(Scene::curve(&build_curve(&p)?)),
                Format::Text => Artifact::ok(format!("{p}\n")),
            })
        }
    }
}

#[derive(Serialize)]
struct CurveOut<'a> {
    curve: &'a TropicalCurve,
    balanced: bool,
    unbalanced_vertices: Vec<usize>,
    nonsingular: bool,
    first_betti_number: i64,
}

impl<'a> CurveOut<'a> {
    fn new(c: &'a TropicalCurve) -> Self {
        let b = c.verify_balancing();
        CurveOut {
            curve: c,
            balanced: b.is_balanced(),
            unbalanced_vertices: b.unbalanced(),
            nonsingular: c.is_nonsingular(),
            first_betti_number: c.first_betti_number(),
        }
    }
}

fn curve_text(c: &TropicalCurve) -> String {
    let mut s = String::new();
    for (k, v) in c.vertices.iter().enumerate() {
        let _ = writeln!(s, "vertex {k}: {}", pt(&v.position));
    }
    for e in &c.edges {
        let _ = writeln!(s, "edge {} -- {} weight {}", e.v1, e.v2, e.weight);
    }
    for r in &c.rays {
        let _ = writeln!(s, "ray from {} dir ({}, {}) weight {}", r.v, r.dir.i, r.dir.j, r.weight);
    }
    let b = c.verify_balancing();
    let _ = writeln!(s, "balanced {} nonsingular {} genus {}", b.is_balanced(), c.is_nonsingular(), c.first_betti_number());
    s
}

#[derive(Serialize)]
struct OracleOut<'a> {
    #[serde(flatten)]
    report: &'a tropinflect_oracle::VerificationReport,
    gap: Option<f64>,
    generic: bool,
    escapes: &'a tropinflect_oracle::numeric::Escapes,
    real_total: usize,
    borderline: Vec<[f64; 2]>,
    mismatches: Vec<String>,
}

fn oracle_verify(cli: &Cli, path: &PathBuf) -> Result<Artifact> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let x = ClassicalCurve::from_json(&text)?;
    let trop: TropicalPolynomial = x.tropicalize();
    let c = build_curve(&trop)?;
    let comps = inflection_components(&c)?;
    let generic = genericity_check(&c).generic;
    let gap = min_gap(&comps);
    let g = gap.unwrap_or(1.0);
    let t = match &cli.t {
        Some(s) => parse_t(s)?,
        None => choose_t(g),
    };
    let tol = cli.tol.unwrap_or(TOL_FRACTION * g);
    if !(tol > 0.0) {
        bail!("--tol must be positive");
    }
    let numeric = numeric_inflections(&x, &t, precision(cli)?)?;
    let report = report_from(&numeric, &comps, tol, x.is_real() && generic);
    let lines = report.lines();
    let mismatches: Vec<String> = lines.iter().filter(|l| l.contains("MISMATCH")).cloned().collect();
    let body = match cli.format {
        Format::Json => json(&OracleOut {
            report: &report,
            gap,
            generic,
            escapes: &numeric.escapes,
            real_total: numeric.real_count(),
            borderline: numeric
                .points
                .iter()
                .filter(|p| p.realness == tropinflect_oracle::Realness::Borderline)
                .map(|p| p.val)
                .collect(),
            mismatches: mismatches.clone(),
        }),
        Format::Text => {
            let mut s = format!("t {} tol {:.4} torus {} expected {}\n", report.t, tol, report.torus, report.expected_total);
            for l in &lines {
                s.push_str(l);
                s.push('\n');
            }
            let _ = writeln!(s, "{}", if mismatches.is_empty() { "pass" } else { "fail" });
            s
        }
        Format::Svg => render_svg(&Scene::inflection(&c, &comps), cli.stub_len),
    };
    Ok(Artifact { body, mismatch: !mismatches.is_empty() })
}
