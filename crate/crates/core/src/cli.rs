//! The `glsm-stab` command line: package analysis, stability checking, wall
//! enumeration, reduction and stabilization runs, boundedness certificates,
//! and the built-in example catalog.
//!
//! Exit codes: 0 = success (for `check`: stable), 1 = `check` found the
//! quasimap unstable, 2 = invalid input or internal failure.  Reports are
//! compact JSON by default (`--pretty` indents them); identical inputs
//! produce byte-identical output.  `GLSM_STAB_THREADS` caps the worker count
//! used by support classification.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::bounded;
use crate::catalog;
use crate::error::{Error, Result};
use crate::io;
use crate::package::{
    check_ss_eq_s, good_lift_probe, is_full, isotropy_bounds, semistable_supports, OmegaTriple,
    Support, SupportClass, TorusPackage,
};
use crate::quasimap::{Omega3Mode, Verdict};
use crate::rat::{rat_from_str, rat_to_string, rint, Rat};
use crate::reduction;
use crate::walls;

/// Default enumeration bounds for the good-lift probe in `analyze`.
const PROBE_THETA_BOUND: i64 = 5;
const PROBE_DEGREE_BOUND: i64 = 12;

#[derive(Parser)]
#[command(
    name = "glsm-stab",
    version,
    about = "Exact stability analysis for R-charged abelian GIT targets and LG-quasimaps"
)]
struct Cli {
    /// Indented human-oriented output instead of compact documents.
    #[arg(long, global = true)]
    pretty: bool,
    /// Compact machine output (the default; kept for explicit pipelines).
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PackageArgs {
    /// Package file, or a catalog name: msp-quintic, quasimap-p1,
    /// pn-charges (with --c), ci-lg (with --l, --n), quasimap (with --base).
    package: String,
    /// R-charges c1,...,cN for the pn-charges catalog entry.
    #[arg(long, value_delimiter = ',', value_name = "C1,...")]
    c: Option<Vec<i64>>,
    /// Hypersurface degrees l1,...,ls for the ci-lg catalog entry.
    #[arg(long, value_delimiter = ',', value_name = "L1,...")]
    l: Option<Vec<i64>>,
    /// Number of ambient coordinates for the ci-lg catalog entry.
    #[arg(long, default_value_t = 5)]
    n: usize,
    /// Base package file wrapped by the quasimap catalog entry.
    #[arg(long, value_name = "FILE")]
    base: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a package: supports, isotropy, bi-degrees, window, probes.
    Analyze(PackageArgs),
    /// Decide Omega-stability of a quasimap graph.
    Check {
        #[command(flatten)]
        package: PackageArgs,
        /// Quasimap graph file.
        quasimap: PathBuf,
        /// Override the stability parameter ("p/q").
        #[arg(long = "A", value_name = "P/Q", conflicts_with = "a_infinity")]
        a_override: Option<String>,
        /// Check the A -> infinity limit instead of a finite parameter.
        #[arg(long)]
        a_infinity: bool,
    },
    /// Enumerate candidate walls of the stability parameter.
    Walls {
        #[command(flatten)]
        package: PackageArgs,
        /// Curve genus.
        #[arg(long)]
        g: i64,
        /// Number of markings.
        #[arg(long)]
        k: i64,
        /// Total degree ("p/q").
        #[arg(long, value_name = "P/Q")]
        d: String,
        /// Window (a0, a1] as "a0,a1".
        #[arg(long, value_name = "A0,A1")]
        interval: String,
    },
    /// Run the blowup reduction on an order pair; prints the trace as JSON
    /// lines.
    Reduce {
        /// Normalized lambda vector.
        #[arg(long, value_delimiter = ',', value_name = "L1,...", requires = "mu")]
        lambda: Option<Vec<i64>>,
        /// Normalized mu vector.
        #[arg(long, value_delimiter = ',', value_name = "M1,...", requires = "lambda")]
        mu: Option<Vec<i64>>,
        /// Divisor orders (builds the pair together with --c-orders).
        #[arg(
            long,
            value_delimiter = ',',
            value_name = "O1,...",
            conflicts_with_all = ["lambda", "mu"],
            requires = "c_orders"
        )]
        d1_orders: Option<Vec<i64>>,
        /// Central-fiber orders.
        #[arg(long, value_delimiter = ',', value_name = "O1,...", requires = "d1_orders")]
        c_orders: Option<Vec<i64>>,
        /// R-charges entering the lambda normalization.
        #[arg(long, value_delimiter = ',', value_name = "C1,...", requires = "d1_orders")]
        charges: Option<Vec<i64>>,
    },
    /// Contract a special-fiber tree to its stable normal form.
    Stabilize {
        /// Fiber tree file.
        tree: PathBuf,
    },
    /// Emit a boundedness certificate.
    CertifyBounded {
        #[command(flatten)]
        package: PackageArgs,
        /// Curve genus.
        #[arg(long)]
        g: i64,
        /// Number of markings.
        #[arg(long)]
        k: i64,
        /// Total degree ("p/q").
        #[arg(long, value_name = "P/Q")]
        d: String,
        /// Override the computed per-ray degree bound ("p/q").
        #[arg(long = "B", value_name = "P/Q")]
        b_override: Option<String>,
    },
    /// Print a catalog package (optionally writing it to a file).
    Examples {
        #[command(flatten)]
        package: PackageArgs,
        /// Write the package document to this file instead of stdout.
        #[arg(long, value_name = "FILE")]
        emit: Option<PathBuf>,
    },
}

fn resolve_package(args: &PackageArgs) -> Result<(TorusPackage, OmegaTriple)> {
    let name = args.package.as_str();
    if Path::new(name).is_file() {
        return io::package_from_json(&fs::read_to_string(name)?);
    }
    match name {
        "msp-quintic" => Ok(catalog::msp_quintic()),
        "quasimap-p1" => {
            let (base, _) = catalog::pn_charges(&[0, 0])?;
            catalog::quasimap_wrap(&base)
        }
        "pn-charges" => {
            let charges = args
                .c
                .as_deref()
                .ok_or_else(|| Error::invalid("pn-charges needs --c c1,...,cN"))?;
            catalog::pn_charges(charges)
        }
        "ci-lg" => {
            let ell = args
                .l
                .as_deref()
                .ok_or_else(|| Error::invalid("ci-lg needs --l l1,...,ls"))?;
            catalog::ci_lg(args.n, ell)
        }
        "quasimap" => {
            let base = args
                .base
                .as_ref()
                .ok_or_else(|| Error::invalid("quasimap needs --base <package file>"))?;
            let (pkg, _) = io::package_from_json(&fs::read_to_string(base)?)?;
            catalog::quasimap_wrap(&pkg)
        }
        other => Err(Error::invalid(format!(
            "`{other}` is neither a file nor a catalog entry \
             (msp-quintic, quasimap-p1, pn-charges, ci-lg, quasimap)"
        ))),
    }
}

#[derive(Serialize)]
struct SectionSummary {
    name: String,
    theta_weight: i64,
    r_charge: i64,
    slope: String,
}

#[derive(Serialize)]
struct AnalyzeDoc {
    coords: Vec<String>,
    rank: usize,
    gauge_rank: usize,
    semistable_supports: Vec<Vec<String>>,
    stable_supports: Vec<Vec<String>>,
    ss_eq_s: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    strictly_semistable_witness: Option<Vec<String>>,
    n0: String,
    #[serde(rename = "D")]
    d_lcm: String,
    sections: Vec<SectionSummary>,
    s_max: String,
    #[serde(rename = "A")]
    a: String,
    first_candidate_wall: String,
    annotation: String,
    full: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    fullness_witness: Option<Vec<String>>,
    good_lift: bool,
}

fn analyze_doc(pkg: &TorusPackage, omega: &OmegaTriple) -> Result<AnalyzeDoc> {
    let names = |s: &Support| s.names(pkg);
    let mut semistable = Vec::new();
    let mut stable = Vec::new();
    for info in semistable_supports(pkg) {
        match info.class {
            SupportClass::Stable => {
                semistable.push(names(&info.support));
                stable.push(names(&info.support));
            }
            SupportClass::StrictlySemistable => semistable.push(names(&info.support)),
            SupportClass::Unstable => {}
        }
    }
    let ss = check_ss_eq_s(pkg);
    let bounds = isotropy_bounds(pkg)?;
    let s_max = omega.s_max();
    // The first candidate wall is genus and marking independent apart from
    // the unmarked genus-0 value d/2; probe with (g,k) = (1,1) and d = 0.
    // The tail grid has spacing 1/D, so (s_max, s_max + 1] always contains
    // a candidate.
    let report = walls::candidate_walls(
        pkg,
        omega,
        1,
        1,
        &Rat::from_integer(0.into()),
        &s_max,
        &(&s_max + rint(1)),
    )?;
    let first_wall = report.candidates.first().expect("tail grid is nonempty");
    let fullness = is_full(pkg, &omega.monomials);
    Ok(AnalyzeDoc {
        coords: pkg.coord_names().to_vec(),
        rank: pkg.rank(),
        gauge_rank: pkg.g_rank(),
        semistable_supports: semistable,
        stable_supports: stable,
        ss_eq_s: ss.holds,
        strictly_semistable_witness: ss.counterexample.as_ref().map(names),
        n0: bounds.n0.to_string(),
        d_lcm: bounds.d_lcm.to_string(),
        sections: omega
            .monomials
            .iter()
            .map(|m| SectionSummary {
                name: m.name.clone(),
                theta_weight: m.bidegree.theta_weight,
                r_charge: m.bidegree.r_charge,
                slope: rat_to_string(&m.slope().expect("positive theta-weight")),
            })
            .collect(),
        s_max: rat_to_string(&s_max),
        a: rat_to_string(&omega.a),
        first_candidate_wall: rat_to_string(first_wall),
        annotation: format!(
            "classical window ({}, {}) below first candidate wall",
            rat_to_string(&s_max),
            rat_to_string(first_wall)
        ),
        full: fullness.full,
        fullness_witness: fullness.witness.as_ref().map(names),
        good_lift: good_lift_probe(pkg, PROBE_THETA_BOUND, PROBE_DEGREE_BOUND),
    })
}

#[derive(Serialize)]
struct StabilizeDoc {
    tree: io::FiberTreeDoc,
    log: Vec<io::ContractionLogDoc>,
    omega2_violations: Vec<Omega2ViolationDoc>,
}

#[derive(Serialize)]
struct Omega2ViolationDoc {
    component: i64,
    point: String,
    value: String,
}

fn parse_interval(text: &str) -> Result<(Rat, Rat)> {
    let (a0, a1) = text
        .split_once(',')
        .ok_or_else(|| Error::parse(format!("expected `a0,a1`, got `{text}`")))?;
    Ok((rat_from_str(a0)?, rat_from_str(a1)?))
}

/// Writes one line to stdout. A closed pipe (e.g. `... | head`) is not an
/// error: the process exits 0 without touching stderr.
fn print_line(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{text}").and_then(|()| out.flush()).is_err() {
        std::process::exit(0);
    }
}

fn emit<T: Serialize>(doc: &T, pretty: bool) {
    print_line(&io::to_json(doc, pretty));
}

fn dispatch(cli: &Cli) -> Result<i32> {
    let pretty = cli.pretty;
    match &cli.command {
        Command::Analyze(pkg_args) => {
            let (pkg, omega) = resolve_package(pkg_args)?;
            emit(&analyze_doc(&pkg, &omega)?, pretty);
            Ok(0)
        }
        Command::Check {
            package,
            quasimap,
            a_override,
            a_infinity,
        } => {
            let (pkg, mut omega) = resolve_package(package)?;
            if let Some(a) = a_override {
                omega = OmegaTriple::with_vartheta(
                    &pkg,
                    omega.vartheta.clone(),
                    omega.monomials.iter().map(|m| m.exponents.clone()).collect(),
                    rat_from_str(a)?,
                )?;
            }
            let graph = io::quasimap_from_json(&fs::read_to_string(quasimap)?)?;
            graph.validate(&omega)?;
            let mode = if *a_infinity {
                Omega3Mode::AInfinity
            } else {
                Omega3Mode::FiniteA
            };
            let report = graph.check_stable_mode(&omega, mode);
            emit(&io::report_to_doc(&report), pretty);
            Ok(match report.verdict {
                Verdict::Stable => 0,
                Verdict::Unstable => 1,
            })
        }
        Command::Walls {
            package,
            g,
            k,
            d,
            interval,
        } => {
            let (pkg, omega) = resolve_package(package)?;
            let degree = rat_from_str(d)?;
            let (a0, a1) = parse_interval(interval)?;
            let report = walls::candidate_walls(&pkg, &omega, *g, *k, &degree, &a0, &a1)?;
            emit(&io::walls_to_doc(&report), pretty);
            Ok(0)
        }
        Command::Reduce {
            lambda,
            mu,
            d1_orders,
            c_orders,
            charges,
        } => {
            let pair = match (lambda, mu, d1_orders, c_orders) {
                (Some(l), Some(m), None, None) => {
                    reduction::ReductionPair::new(l.clone(), m.clone())?
                }
                (None, None, Some(d1), Some(c)) => {
                    reduction::pair_from_orders(d1, c, charges.as_deref())?
                }
                _ => {
                    return Err(Error::invalid(
                        "give either --lambda with --mu, or --d1-orders with --c-orders",
                    ))
                }
            };
            let trace = reduction::reduce(pair);
            for line in io::trace_to_json_lines(&trace).lines() {
                print_line(line);
            }
            Ok(0)
        }
        Command::Stabilize { tree } => {
            let tree = io::fiber_tree_from_json(&fs::read_to_string(tree)?)?;
            let (normal, log) = tree.stabilize()?;
            let violations = normal
                .omega2_violations()
                .into_iter()
                .map(|(component, point, value)| Omega2ViolationDoc {
                    component,
                    point,
                    value: rat_to_string(&value),
                })
                .collect();
            emit(
                &StabilizeDoc {
                    tree: io::fiber_tree_to_doc(&normal),
                    log: io::contraction_log_to_doc(&log),
                    omega2_violations: violations,
                },
                pretty,
            );
            Ok(0)
        }
        Command::CertifyBounded {
            package,
            g,
            k,
            d,
            b_override,
        } => {
            let (pkg, omega) = resolve_package(package)?;
            let degree = rat_from_str(d)?;
            let b = b_override.as_deref().map(rat_from_str).transpose()?;
            let cert = bounded::certify_bounded(&pkg, &omega, *g, *k, &degree, b)?;
            emit(&io::certificate_to_doc(&cert), pretty);
            Ok(0)
        }
        Command::Examples { package, emit: out } => {
            let (pkg, omega) = resolve_package(package)?;
            let text = io::package_to_json(&pkg, &omega, pretty);
            match out {
                Some(path) => fs::write(path, text + "\n")?,
                None => print_line(&text),
            }
            Ok(0)
        }
    }
}

/// Parses `std::env::args` and runs the tool; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pkg_args(name: &str) -> PackageArgs {
        PackageArgs {
            package: name.to_string(),
            c: None,
            l: None,
            n: 5,
            base: None,
        }
    }

    #[test]
    fn analyze_msp_reports_the_classical_window() {
        let (pkg, omega) = resolve_package(&pkg_args("msp-quintic")).unwrap();
        let doc = analyze_doc(&pkg, &omega).unwrap();
        assert_eq!(doc.s_max, "1/5");
        assert_eq!(doc.first_candidate_wall, "2/5");
        assert_eq!(
            doc.annotation,
            "classical window (1/5, 2/5) below first candidate wall"
        );
        assert_eq!(doc.n0, "5");
        assert_eq!(doc.d_lcm, "5");
        assert!(doc.ss_eq_s);
        assert!(doc.full);
        assert!(!doc.good_lift);
    }

    #[test]
    fn analyze_catalog_oracles() {
        let (pkg, omega) = resolve_package(&PackageArgs {
            c: Some(vec![0, 0, 0]),
            ..pkg_args("pn-charges")
        })
        .unwrap();
        let doc = analyze_doc(&pkg, &omega).unwrap();
        assert_eq!(doc.s_max, "0");
        assert_eq!(doc.n0, "1");
        assert_eq!(doc.d_lcm, "1");
        assert!(doc.good_lift);

        let (pkg, omega) = resolve_package(&PackageArgs {
            l: Some(vec![2, 3]),
            ..pkg_args("ci-lg")
        })
        .unwrap();
        let doc = analyze_doc(&pkg, &omega).unwrap();
        assert_eq!(doc.s_max, "1/2");
        assert_eq!(doc.n0, "3");
        assert_eq!(doc.d_lcm, "6");
    }

    #[test]
    fn unknown_package_names_are_rejected() {
        assert!(resolve_package(&pkg_args("no-such-entry")).is_err());
        assert!(resolve_package(&pkg_args("pn-charges")).is_err());
        assert!(resolve_package(&pkg_args("quasimap")).is_err());
    }

    #[test]
    fn quasimap_p1_matches_the_charge_zero_package() {
        let (wrapped, omega) = resolve_package(&pkg_args("quasimap-p1")).unwrap();
        let (pn, _) = catalog::pn_charges(&[0, 0]).unwrap();
        assert_eq!(wrapped.weights(), pn.weights());
        assert_eq!(omega.s_max(), rint(0));
    }
}
