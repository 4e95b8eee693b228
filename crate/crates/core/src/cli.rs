//! Command-line front end.
//!
//! Exit codes: 0 success or pass, 1 verification failure, 2 usage or parse
//! error, 3 budget refusal.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::json;

use crate::angle::{AngleSpec, Mode};
use crate::bounds::{self, KWindow};
use crate::construct::{self, ConstructOptions, EnumerationOrder, GreedyOptions, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::exact;
use crate::format::{self, Meta, PointFile};
use crate::oracle::{self, SearchMethod};
use crate::points::{LatticePointSet, PointSet};
use crate::precision::Precision;
use crate::subset::{ColexCombinations, ConstructionParams};
use crate::verify::{self, AsGeometry, Geometry};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "angleset", version, about = "Point sets in R^d with all angles below pi/3 + c")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a point set with the greedy hypergraph construction.
    Construct(ConstructArgs),
    /// Certify the maximum angle of a point-set file.
    Verify(VerifyArgs),
    /// Tabulate the bound quantities as CSV.
    Bounds(BoundsArgs),
    /// Exhaustive maximum angle-constrained subset of a small candidate set.
    Oracle(OracleArgs),
    /// Randomized check of the isosceles-triangle lemma.
    Lemma(LemmaArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OrderArg {
    Colex,
    Random,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(short = 'd', long = "dim")]
    pub d: usize,
    /// Angle slack as an exact decimal, in (0, 1).
    #[arg(short = 'c', long = "slack", allow_hyphen_values = true)]
    pub c: String,
    /// Fixed edge size instead of the optimised choice.
    #[arg(short = 'k', long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value = "colex")]
    pub order: OrderArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Maximum number of candidate subsets.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Search every k in 1..=d when choosing k.
    #[arg(long)]
    pub full_scan: bool,
    #[arg(long, default_value = "0")]
    pub delta: String,
    #[arg(short = 'o', long = "output", default_value = "points.json")]
    pub output: PathBuf,
    /// Bound report path; defaults to the output path with `.report.json`.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub points: PathBuf,
    /// `pi/3+<decimal>`, `<decimal>deg`, `<decimal>rad` or plain radians.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, conflicts_with = "weak")]
    pub strict: bool,
    #[arg(long)]
    pub weak: bool,
    /// Also write the JSON result to this file.
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Dimensions: a list `50,100,200` or an inclusive range `10..20`.
    #[arg(short = 'd', long = "dims")]
    pub dims: String,
    /// Comma-separated slack values.
    #[arg(short = 'c', long = "slack")]
    pub slacks: String,
    #[arg(long, default_value = "0")]
    pub delta: String,
    /// Fixed k for every row.
    #[arg(short = 'k', long)]
    pub k: Option<u64>,
    /// Search every k in 1..=d.
    #[arg(long)]
    pub full_scan: bool,
    /// Append Jung radius, Rankin, cap-count and sine-ratio columns.
    #[arg(long)]
    pub aux: bool,
    #[arg(long, default_value = "pi/6")]
    pub rankin_alpha: String,
    #[arg(long, default_value = "0.5")]
    pub cap_y: String,
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Bnb,
    Naive,
    Both,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// `cube:d`, `simplex:d`, `weight:k:d` or a point-set file.
    pub candidates: String,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, conflicts_with = "weak")]
    pub strict: bool,
    #[arg(long)]
    pub weak: bool,
    #[arg(long, value_enum, default_value = "bnb")]
    pub method: MethodArg,
    /// Write the chosen subset as a point-set file.
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LemmaArgs {
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        let _ = writeln!(err, "error: {e}");
        return EXIT_USAGE;
    }
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Budget { .. } => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("ANGLESET_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| Error::invalid(format!("ANGLESET_THREADS must be a positive integer, got {v:?}")))?;
    if n == 0 {
        return Err(Error::invalid("ANGLESET_THREADS must be positive"));
    }
    // A second call in the same process finds the pool already built.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

pub fn execute(command: &Command, out: &mut dyn Write) -> Result<i32> {
    let prec = Precision::from_env()?;
    match command {
        Command::Construct(a) => cmd_construct(a, prec, out),
        Command::Verify(a) => cmd_verify(a, prec, out),
        Command::Bounds(a) => cmd_bounds(a, prec, out),
        Command::Oracle(a) => cmd_oracle(a, prec, out),
        Command::Lemma(a) => cmd_lemma(a, out),
    }
}

fn mode_of(strict: bool, weak: bool) -> Mode {
    if weak && !strict {
        Mode::Weak
    } else {
        Mode::Strict
    }
}

fn report_path(output: &Path) -> PathBuf {
    let mut name = output.file_stem().unwrap_or_default().to_os_string();
    name.push(".report.json");
    output.with_file_name(name)
}

pub fn cmd_construct(a: &ConstructArgs, prec: Precision, out: &mut dyn Write) -> Result<i32> {
    let c = exact::parse_decimal(&a.c)?;
    let order = match a.order {
        OrderArg::Colex => EnumerationOrder::Colex,
        OrderArg::Random => EnumerationOrder::Random { seed: a.seed },
    };
    let opts = ConstructOptions {
        k: a.k,
        window: if a.full_scan { KWindow::Full } else { KWindow::Default },
        greedy: GreedyOptions { order, budget: a.budget },
        delta: exact::parse_decimal(&a.delta)?,
        precision: prec,
    };
    let built = construct::construct_point_set(a.d, &c, &opts)?;
    let file = PointFile {
        points: built.points.clone().into(),
        meta: Meta {
            k: Some(built.hypergraph.params().k()),
            c: Some(a.c.trim().to_string()),
            order: Some(order.name().to_string()),
            seed: order.seed(),
        },
    };
    format::write_point_file(&a.output, &file)?;
    let report_file = a.report.clone().unwrap_or_else(|| report_path(&a.output));
    let report_json = serde_json::to_string_pretty(&built.report)?;
    format::write_atomic(&report_file, format!("{report_json}\n").as_bytes())?;

    let r = &built.report;
    writeln!(out, "d = {}  k = {}  c = {}  max intersection = {}", r.d, r.k, r.c, r.threshold - 1)?;
    writeln!(out, "edges |E| = {}", built.hypergraph.len())?;
    writeln!(out, "ceil(A) = {}", r.a_ceil)?;
    writeln!(out, "A^(1/d) = {}", r.a_per_dim_root.to_sig_string(12))?;
    writeln!(out, "lower envelope = {}", r.lower_envelope.to_sig_string(12))?;
    writeln!(out, "upper envelope = {}", r.upper_envelope.to_sig_string(12))?;
    writeln!(out, "points: {}", a.output.display())?;
    writeln!(out, "report: {}", report_file.display())?;
    Ok(EXIT_OK)
}

/// JSON emitted by `verify`.
#[derive(Debug, Serialize)]
pub struct VerifyOutput {
    pub certificate: verify::AngleCertificate,
    pub distance_stats: Option<verify::DistanceStats>,
    /// Present when the slack is known and inside the check's domain.
    pub ratio_check: Option<verify::RatioCheck>,
    pub ratio_check_note: Option<String>,
}

/// Runs the verifier on an in-memory set, exactly as `verify` does on a file.
pub fn verify_points(points: &PointSet, meta: &Meta, alpha: &AngleSpec, mode: Mode, prec: Precision) -> Result<VerifyOutput> {
    let geo: Geometry = points.geometry();
    let certificate = verify::max_angle_geometry(&geo, alpha, mode, prec)?;
    let distance_stats = if geo.len() >= 2 {
        Some(verify::distance_stats_geometry(&geo)?)
    } else {
        None
    };
    let slack = match alpha.pi_third_slack() {
        Some(c) => Some(c.clone()),
        None => meta.c.as_deref().map(exact::parse_decimal).transpose()?,
    };
    let (ratio_check, ratio_check_note) = match (&distance_stats, slack) {
        (None, _) => (None, Some("fewer than two points".to_string())),
        (Some(_), None) => (None, Some("slack unknown".to_string())),
        (Some(stats), Some(c)) => match verify::check_min_max_ratio_stats(stats, &c) {
            Ok(r) => (Some(r), None),
            Err(Error::Domain(msg)) => (None, Some(msg)),
            Err(e) => return Err(e),
        },
    };
    Ok(VerifyOutput {
        certificate,
        distance_stats,
        ratio_check,
        ratio_check_note,
    })
}

pub fn cmd_verify(a: &VerifyArgs, prec: Precision, out: &mut dyn Write) -> Result<i32> {
    let alpha = AngleSpec::parse(&a.alpha)?;
    let file = format::read_point_file(&a.points)?;
    let result = verify_points(&file.points, &file.meta, &alpha, mode_of(a.strict, a.weak), prec)?;
    let text = serde_json::to_string_pretty(&result)?;
    writeln!(out, "{text}")?;
    if let Some(path) = &a.output {
        format::write_atomic(path, format!("{text}\n").as_bytes())?;
    }
    Ok(if result.certificate.verdict.is_pass() {
        EXIT_OK
    } else {
        EXIT_FAIL
    })
}

/// `10..20` (inclusive) or `50,100,200`.
pub fn parse_dims(text: &str) -> Result<Vec<u64>> {
    let bad = || Error::invalid(format!("cannot parse dimension list {text:?}"));
    let dims: Vec<u64> = if let Some((lo, hi)) = text.split_once("..") {
        let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u64 = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        (lo..=hi).collect()
    } else {
        text.split(',')
            .map(|s| s.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?
    };
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::invalid("dimensions must be positive"));
    }
    Ok(dims)
}

pub const BOUNDS_COLUMNS: &str = "d,c,k,max_intersection,a_floor,a_ceil,a_per_dim_root,lower_envelope,upper_envelope";
pub const BOUNDS_AUX_COLUMNS: &str = "jung_radius,rankin,cap_statement_form,cap_proof_form,sine_ratio";

pub fn cmd_bounds(a: &BoundsArgs, prec: Precision, out: &mut dyn Write) -> Result<i32> {
    let dims = parse_dims(&a.dims)?;
    let slacks: Vec<(String, BigRational)> = a
        .slacks
        .split(',')
        .map(|s| exact::parse_decimal(s).map(|q| (s.trim().to_string(), q)))
        .collect::<Result<_>>()?;
    let delta = exact::parse_decimal(&a.delta)?;
    let rankin_alpha = AngleSpec::parse(&a.rankin_alpha)?.radians(prec);
    let cap_y = exact::parse_decimal(&a.cap_y)?;
    let window = if a.full_scan { KWindow::Full } else { KWindow::Default };
    let digits = 15;

    let mut csv = String::new();
    csv.push_str(&format!("# {BOUNDS_COLUMNS}"));
    if a.aux {
        csv.push_str(&format!(",{BOUNDS_AUX_COLUMNS}"));
    }
    csv.push('\n');
    for &d in &dims {
        for (c_text, c) in &slacks {
            let k = match a.k {
                Some(k) => k,
                None => bounds::choose_k(d, c, window)?,
            };
            let params = ConstructionParams::new(d as usize, k as usize, c.clone())?;
            let r = bounds::bound_report(&params, &delta, prec)?;
            let mut row = vec![
                d.to_string(),
                c_text.clone(),
                k.to_string(),
                (r.threshold - 1).to_string(),
                r.a_floor.to_string(),
                r.a_ceil.to_string(),
                r.a_per_dim_root.to_sig_string(digits),
                r.lower_envelope.to_sig_string(digits),
                r.upper_envelope.to_sig_string(digits),
            ];
            if a.aux {
                row.push(bounds::jung_radius(d, prec)?.to_sig_string(digits));
                row.push(optional(bounds::rankin_asymptotic(&rankin_alpha, d, prec).map(|v| v.to_sig_string(digits)))?);
                match bounds::cap_count_bound(d, &cap_y, prec) {
                    Ok(cap) => {
                        row.push(cap.statement_form.to_sig_string(digits));
                        row.push(cap.proof_form.to_sig_string(digits));
                    }
                    Err(Error::Domain(_)) => row.extend([String::new(), String::new()]),
                    Err(e) => return Err(e),
                }
                row.push(optional(bounds::sine_ratio_margin(c, prec).map(|s| s.ratio.to_sig_string(digits)))?);
            }
            csv.push_str(&row.join(","));
            csv.push('\n');
        }
    }
    match &a.output {
        Some(path) => format::write_atomic(path, csv.as_bytes())?,
        None => out.write_all(csv.as_bytes())?,
    }
    Ok(EXIT_OK)
}

/// Empty cell for values outside their formula's domain.
fn optional(v: Result<String>) -> Result<String> {
    match v {
        Ok(s) => Ok(s),
        Err(Error::Domain(_)) => Ok(String::new()),
        Err(e) => Err(e),
    }
}

/// Builtin candidate sets: `cube:d`, `simplex:d`, `weight:k:d`.
pub fn builtin_candidates(spec: &str, prec: Precision) -> Result<Option<PointSet>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| -> Result<usize> {
        s.parse()
            .map_err(|_| Error::invalid(format!("bad number {s:?} in candidate spec {spec:?}")))
    };
    let set = match parts.as_slice() {
        ["cube", d] => {
            let d = num(d)?;
            if d == 0 || d > 20 {
                return Err(Error::invalid("cube dimension must be in 1..=20"));
            }
            let pts = (0..1u64 << d)
                .map(|v| (0..d).map(|i| (v >> i & 1) as i64).collect())
                .collect();
            LatticePointSet::new(d, pts)?.into()
        }
        ["simplex", d] => oracle::regular_simplex(num(d)?, prec)?.into(),
        ["weight", k, d] => {
            let (k, d) = (num(k)?, num(d)?);
            if d == 0 || k > d {
                return Err(Error::invalid("weight:k:d needs 0 <= k <= d and d >= 1"));
            }
            let total = exact::binomial(d as u64, k as u64);
            if total > oracle::BNB_LIMIT.into() {
                return Err(Error::Budget {
                    what: "branch-and-bound candidates",
                    needed: total.to_string(),
                    budget: oracle::BNB_LIMIT as u64,
                });
            }
            let pts = ColexCombinations::new(d, k)
                .map(|s| {
                    let mut v = vec![0i64; d];
                    for i in s {
                        v[i] = 1;
                    }
                    v
                })
                .collect();
            LatticePointSet::new(d, pts)?.into()
        }
        _ => return Ok(None),
    };
    Ok(Some(set))
}

pub fn load_candidates(spec: &str, prec: Precision) -> Result<(PointSet, Meta)> {
    if let Some(set) = builtin_candidates(spec, prec)? {
        return Ok((set, Meta::default()));
    }
    let path = Path::new(spec);
    if !path.exists() && ["cube:", "simplex:", "weight:"].iter().any(|p| spec.starts_with(p)) {
        return Err(Error::invalid(format!("malformed candidate spec {spec:?}")));
    }
    let file = format::read_point_file(path)?;
    Ok((file.points, file.meta))
}

fn select(points: &PointSet, indices: &[usize]) -> Result<PointSet> {
    Ok(match points {
        PointSet::Lattice(s) => s.select(indices).into(),
        PointSet::Euclidean(s) => crate::points::EuclideanPointSet::new(
            s.d(),
            indices.iter().map(|&i| s.points()[i].clone()).collect(),
            s.precision(),
        )?
        .into(),
    })
}

pub fn cmd_oracle(a: &OracleArgs, prec: Precision, out: &mut dyn Write) -> Result<i32> {
    let alpha = AngleSpec::parse(&a.alpha)?;
    let mode = mode_of(a.strict, a.weak);
    let (points, meta) = load_candidates(&a.candidates, prec)?;
    let methods: &[SearchMethod] = match a.method {
        MethodArg::Bnb => &[SearchMethod::Bnb],
        MethodArg::Naive => &[SearchMethod::Naive],
        MethodArg::Both => &[SearchMethod::Bnb, SearchMethod::Naive],
    };
    let mut results = Vec::new();
    for &m in methods {
        results.push(oracle::brute_force_max_subset(&points, &alpha, mode, m, prec)?);
    }
    let agree = results.windows(2).all(|w| w[0] == w[1]);
    let best = &results[0];
    let summary = json!({
        "candidates": a.candidates,
        "n": points.len(),
        "alpha": alpha,
        "mode": mode,
        "method": a.method.to_possible_value().map(|v| v.get_name().to_string()),
        "size": best.size,
        "indices": best.indices,
        "violating_triples": best.violating_triples,
        "methods_agree": agree,
    });
    writeln!(out, "{}", serde_json::to_string_pretty(&summary)?)?;
    if let Some(path) = &a.output {
        let file = PointFile {
            points: select(&points, &best.indices)?,
            meta,
        };
        format::write_point_file(path, &file)?;
    }
    Ok(if agree { EXIT_OK } else { EXIT_FAIL })
}

pub fn cmd_lemma(a: &LemmaArgs, out: &mut dyn Write) -> Result<i32> {
    let report = oracle::isosceles_lemma_check(a.trials, a.seed);
    writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    Ok(if report.pass { EXIT_OK } else { EXIT_FAIL })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("angleset").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn zero_dimension_is_a_usage_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.json");
        let (code, _, err) = run_str(&["construct", "-d", "0", "-c", "0.3", "-o", path.to_str().unwrap()]);
        assert_eq!(code, EXIT_USAGE, "{err}");
    }

    #[test]
    fn missing_arguments_exit_two() {
        assert_eq!(run_str(&["verify"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["no-such-command"]).0, EXIT_USAGE);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_str(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("construct"));
    }

    #[test]
    fn dims_grammar() {
        assert_eq!(parse_dims("3..5").unwrap(), vec![3, 4, 5]);
        assert_eq!(parse_dims("50, 100,200").unwrap(), vec![50, 100, 200]);
        assert!(parse_dims("5..3").is_err());
        assert!(parse_dims("0,1").is_err());
    }

    #[test]
    fn oracle_examples() {
        let size = |args: &[&str]| -> usize {
            let (code, out, err) = run_str(args);
            assert_eq!(code, EXIT_OK, "{err}");
            serde_json::from_str::<serde_json::Value>(&out).unwrap()["size"].as_u64().unwrap() as usize
        };
        assert_eq!(size(&["oracle", "cube:3", "--alpha", "70deg", "--strict", "--method", "both"]), 4);
        assert_eq!(size(&["oracle", "simplex:3", "--alpha", "pi/3", "--weak"]), 4);
        assert_eq!(size(&["oracle", "cube:1", "--alpha", "pi/2", "--strict"]), 2);
    }

    #[test]
    fn oracle_over_budget_exits_three() {
        assert_eq!(run_str(&["oracle", "cube:7", "--alpha", "pi/2"]).0, EXIT_BUDGET);
        assert_eq!(run_str(&["oracle", "cube:5", "--alpha", "pi/2", "--method", "naive"]).0, EXIT_BUDGET);
    }

    #[test]
    fn bounds_single_row() {
        let (code, out, err) = run_str(&["bounds", "-d", "4", "-c", "0.5", "-k", "2"]);
        assert_eq!(code, EXIT_OK, "{err}");
        let lines: Vec<&str> = out.lines().collect();
        assert!(lines[0].starts_with("# d,c,k"));
        let cells: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(&cells[..6], &["4", "0.5", "2", "0", "1", "2"]);
    }
}
