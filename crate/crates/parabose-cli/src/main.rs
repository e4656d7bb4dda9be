//! Command-line surface: evaluate Wigner functions on grids, dump wave
//! functions and matrix elements, run the verification suites, and emit the
//! data behind the two reference figures.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 usage, 3 convergence-guard
//! refusal, 4 I/O error.

mod gfmt;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;

use gfmt::g17;
use parabose::checks::{run_suite, CheckResult, SUITES};
use parabose::fock::TruncatedRep;
use parabose::matelem::{diag_j, diag_s, offdiag_closed, offdiag_recurrence, MatElemQuery, Parity};
use parabose::wigner::{wavefn, wn, PhasePoint, WignerQuery};
use parabose::{Error, Formula, ParaParam, SeriesControl};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_GUARD: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(
    name = "parabose",
    version,
    about = "Wigner distribution functions of the one-dimensional parabose oscillator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate W_n on a radial or Cartesian grid (CSV)
    Wigner(WignerArgs),
    /// Emit the data series behind the two reference figures (CSV files)
    Figures(FiguresArgs),
    /// Run invariant suites and emit a JSON report
    Verify(VerifyArgs),
    /// Tabulate matrix elements <2n+2l|X^{2k}|2n> by a chosen route (CSV)
    Matelem(MatelemArgs),
    /// Tabulate wave functions (CSV)
    Wavefn(WavefnArgs),
}

fn parse_para(s: &str) -> Result<ParaParam, String> {
    let value = if let Some((num, den)) = s.split_once('/') {
        let n: f64 = num
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator in '{s}'"))?;
        let d: f64 = den
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator in '{s}'"))?;
        n / d
    } else {
        s.parse().map_err(|_| format!("bad number '{s}'"))?
    };
    ParaParam::new(value).map_err(|e| e.to_string())
}

fn parse_formula(s: &str) -> Result<Formula, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected LO:HI, got '{s}'"))?;
    let lo: f64 = lo.trim().parse().map_err(|_| "bad lower bound")?;
    let hi: f64 = hi.trim().parse().map_err(|_| "bad upper bound")?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err("range bounds must be finite with LO < HI".into());
    }
    Ok((lo, hi))
}

#[derive(Args)]
struct WignerArgs {
    /// State index n
    #[arg(long)]
    n: u32,
    /// Representation parameter a; accepts p/q so that 3/2 is exact
    #[arg(long, value_parser = parse_para)]
    a: ParaParam,
    /// Closed form to evaluate
    #[arg(long, value_parser = parse_formula, default_value = "a29")]
    formula: Formula,
    /// Radial grid limit (radial mode)
    #[arg(long, default_value_t = 4.0)]
    rmax: f64,
    /// Number of grid points (per axis in Cartesian mode)
    #[arg(long, default_value_t = 65)]
    points: usize,
    /// Cartesian mode: momentum range LO:HI (requires --q-range)
    #[arg(long, value_parser = parse_range, requires = "q_range", allow_hyphen_values = true)]
    p_range: Option<(f64, f64)>,
    /// Cartesian mode: position range LO:HI (requires --p-range)
    #[arg(long, value_parser = parse_range, requires = "p_range", allow_hyphen_values = true)]
    q_range: Option<(f64, f64)>,
    /// Evaluate even states with non-half-integer 0 < a <= 1 anyway
    #[arg(long)]
    allow_unguaranteed: bool,
    /// Relative tolerance of the series stop rule
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Hard cap on series terms
    #[arg(long, default_value_t = 100_000)]
    max_terms: usize,
    /// Output CSV path (stdout when absent; the manifest then goes to stderr)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FiguresArgs {
    /// Which figure: 1 (ground state, a = 1/2..7/2) or 2 (a = 3/2, n = 0..3)
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    which: u8,
    /// Directory for the CSV series and the manifest
    #[arg(long)]
    out_dir: PathBuf,
    /// Radial grid limit
    #[arg(long, default_value_t = 4.0)]
    rmax: f64,
    /// Points per series
    #[arg(long, default_value_t = 201)]
    points: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run: all, specfun, matelem, wigner or oracle
    #[arg(long, default_value = "all")]
    suite: String,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MatelemArgs {
    /// Fock pair index n (the ket is |2n> or |2n+1>)
    #[arg(long)]
    n: u32,
    /// Half the power of X
    #[arg(long)]
    k: u32,
    /// Off-diagonal offset in steps of two Fock levels
    #[arg(long, default_value_t = 0)]
    l: i32,
    /// even: states |2n>; odd: states |2n+1>
    #[arg(long, default_value = "even")]
    parity: String,
    #[arg(long, value_parser = parse_para)]
    a: ParaParam,
    /// lambda^2 + mu^2 (diagonal elements depend on it only)
    #[arg(long, default_value_t = 1.0, conflicts_with_all = ["lambda", "mu"])]
    t: f64,
    /// Explicit lambda (with --mu; overrides --t)
    #[arg(long, requires = "mu")]
    lambda: Option<f64>,
    /// Explicit mu (with --lambda; overrides --t)
    #[arg(long, requires = "lambda")]
    mu: Option<f64>,
    /// Evaluation route: j, s, recurrence or oracle
    #[arg(long, default_value = "s")]
    route: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WavefnArgs {
    /// State index n
    #[arg(long)]
    n: u32,
    #[arg(long, value_parser = parse_para)]
    a: ParaParam,
    /// Single evaluation point
    #[arg(long, conflicts_with_all = ["q_max", "points"])]
    q: Option<f64>,
    /// Grid mode: symmetric grid on [-q_max, q_max]
    #[arg(long, requires = "points")]
    q_max: Option<f64>,
    /// Grid mode: number of points
    #[arg(long, requires = "q_max")]
    points: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Lib(Error),
    Io(PathBuf, std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(Error::NotGuaranteedConvergence) => EXIT_GUARD,
            CliError::Lib(_) => EXIT_USAGE,
            CliError::Io(..) => EXIT_IO,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Wigner(args) => cmd_wigner(&args),
        Command::Figures(args) => cmd_figures(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Matelem(args) => cmd_matelem(&args),
        Command::Wavefn(args) => cmd_wavefn(&args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

fn write_output(path: Option<&Path>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| CliError::Io(p.to_path_buf(), e)),
        None => {
            print!("{content}");
            std::io::stdout().flush().ok();
            Ok(())
        }
    }
}

fn emit_manifest(out: Option<&Path>, manifest: &serde_json::Value) -> Result<(), CliError> {
    let rendered = format!("{}\n", serde_json::to_string_pretty(manifest).expect("json"));
    match out {
        Some(csv_path) => {
            let mut path = csv_path.as_os_str().to_owned();
            path.push(".manifest.json");
            let path = PathBuf::from(path);
            std::fs::write(&path, rendered).map_err(|e| CliError::Io(path.clone(), e))
        }
        None => {
            eprint!("{rendered}");
            Ok(())
        }
    }
}

/// Sampling description for CSV output: radial sweep or a Cartesian
/// rectangle with `points` samples per axis.
enum GridSpec {
    Radial { r_max: f64, points: usize },
    Cartesian {
        p_range: (f64, f64),
        q_range: (f64, f64),
        points: usize,
    },
}

impl GridSpec {
    fn from_args(args: &WignerArgs) -> Result<Self, Error> {
        if args.points < 2 {
            return Err(Error::InvalidParameters("need at least 2 grid points".into()));
        }
        match (args.p_range, args.q_range) {
            (Some(p_range), Some(q_range)) => Ok(GridSpec::Cartesian {
                p_range,
                q_range,
                points: args.points,
            }),
            _ => {
                if !(args.rmax > 0.0 && args.rmax.is_finite()) {
                    return Err(Error::InvalidParameters("rmax must be positive".into()));
                }
                Ok(GridSpec::Radial {
                    r_max: args.rmax,
                    points: args.points,
                })
            }
        }
    }

    fn sample_points(&self) -> Vec<(f64, f64)> {
        match *self {
            GridSpec::Radial { r_max, points } => (0..points)
                .map(|i| (r_max * i as f64 / (points - 1) as f64, 0.0))
                .collect(),
            GridSpec::Cartesian {
                p_range: (plo, phi),
                q_range: (qlo, qhi),
                points,
            } => {
                let mut pts = Vec::with_capacity(points * points);
                for i in 0..points {
                    let p = plo + (phi - plo) * i as f64 / (points - 1) as f64;
                    for j in 0..points {
                        let q = qlo + (qhi - qlo) * j as f64 / (points - 1) as f64;
                        pts.push((p, q));
                    }
                }
                pts
            }
        }
    }
}

fn cmd_wigner(args: &WignerArgs) -> Result<ExitCode, CliError> {
    let ctl = SeriesControl::new(args.tol, 20, args.max_terms)?;
    let grid = GridSpec::from_args(args)?.sample_points();

    let rows: Vec<Result<String, Error>> = grid
        .par_iter()
        .map(|&(p, q)| {
            let point = PhasePoint::new(p, q);
            let result = wn(&WignerQuery {
                n: args.n,
                a: args.a,
                point,
                formula: args.formula,
                ctl,
                allow_unguaranteed: args.allow_unguaranteed,
            })?;
            Ok(format!(
                "{},{},{},{},{},{},{}\n",
                g17(point.r2().sqrt()),
                g17(p),
                g17(q),
                g17(result.value),
                result.terms_used,
                g17(result.est_error),
                result.status.as_str()
            ))
        })
        .collect();

    let mut csv = String::from("r,p,q,W,terms_used,est_error,status\n");
    for row in rows {
        csv.push_str(&row?);
    }
    write_output(args.out.as_deref(), &csv)?;

    emit_manifest(
        args.out.as_deref(),
        &json!({
            "command": "wigner",
            "flags": {
                "n": args.n,
                "a": args.a.to_string(),
                "formula": format!("{:?}", args.formula).to_lowercase(),
                "rmax": args.rmax,
                "points": args.points,
                "p_range": args.p_range.map(|(lo, hi)| format!("{lo}:{hi}")),
                "q_range": args.q_range.map(|(lo, hi)| format!("{lo}:{hi}")),
                "allow_unguaranteed": args.allow_unguaranteed,
                "out": args.out.as_ref().map(|p| p.display().to_string()),
            },
            "tolerances": {
                "rel_tol": ctl.rel_tol,
                "small_streak": ctl.small_streak,
                "max_terms": ctl.max_terms,
            },
            "build": env!("BUILD_GIT_DESCRIBE"),
            "created_at": timestamp(),
        }),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn figure_series(n: u32, a: ParaParam, rmax: f64, points: usize) -> Result<String, CliError> {
    let mut csv = String::from("r,W,terms_used,est_error,status\n");
    for i in 0..points {
        let r = rmax * i as f64 / (points - 1) as f64;
        let result = wn(&WignerQuery::new(n, a, PhasePoint::new(r, 0.0)))?;
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            g17(r),
            g17(result.value),
            result.terms_used,
            g17(result.est_error),
            result.status.as_str()
        ));
    }
    Ok(csv)
}

fn cmd_figures(args: &FiguresArgs) -> Result<ExitCode, CliError> {
    if args.points < 2 {
        return Err(Error::InvalidParameters("need at least 2 grid points".into()).into());
    }
    std::fs::create_dir_all(&args.out_dir).map_err(|e| CliError::Io(args.out_dir.clone(), e))?;
    // (label, n, a) per series
    let series: Vec<(String, u32, ParaParam)> = match args.which {
        1 => (0..=3)
            .map(|m| {
                (
                    format!("figure1_a_{}_2.csv", 2 * m + 1),
                    0,
                    ParaParam::half_integer(m),
                )
            })
            .collect(),
        2 => (0..=3)
            .map(|n| (format!("figure2_n_{n}.csv"), n, ParaParam::half_integer(1)))
            .collect(),
        _ => unreachable!("clap range"),
    };
    let mut files = Vec::new();
    for (name, n, a) in &series {
        let csv = figure_series(*n, *a, args.rmax, args.points)?;
        let path = args.out_dir.join(name);
        std::fs::write(&path, csv).map_err(|e| CliError::Io(path.clone(), e))?;
        files.push(json!({ "file": name, "n": n, "a": a.to_string() }));
    }
    let manifest = json!({
        "command": "figures",
        "flags": { "which": args.which, "rmax": args.rmax, "points": args.points },
        "series": files,
        "tolerances": {
            "rel_tol": SeriesControl::default().rel_tol,
            "small_streak": SeriesControl::default().small_streak,
            "max_terms": SeriesControl::default().max_terms,
        },
        "build": env!("BUILD_GIT_DESCRIBE"),
        "created_at": timestamp(),
    });
    let path = args.out_dir.join(format!("figure{}_manifest.json", args.which));
    std::fs::write(
        &path,
        format!("{}\n", serde_json::to_string_pretty(&manifest).expect("json")),
    )
    .map_err(|e| CliError::Io(path.clone(), e))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode, CliError> {
    let names: Vec<&str> = if args.suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&args.suite.as_str()) {
        vec![args.suite.as_str()]
    } else {
        return Err(Error::InvalidParameters(format!(
            "unknown suite '{}' (expected all, {})",
            args.suite,
            SUITES.join(", ")
        ))
        .into());
    };

    let mut checks: Vec<(&str, CheckResult)> = Vec::new();
    for name in names {
        for check in run_suite(name).expect("suite name validated") {
            checks.push((name, check));
        }
    }
    let all_pass = checks.iter().all(|(_, c)| c.pass);
    let report = json!({
        "command": "verify",
        "suite": args.suite,
        "checks": checks.iter().map(|(suite, c)| {
            let mut entry = json!({
                "suite": suite,
                "name": c.name,
                "status": if c.pass { "pass" } else { "fail" },
                "max_err": c.max_err,
                "tolerance": c.tolerance,
            });
            if !c.params.is_empty() {
                entry["params"] = json!(c.params);
            }
            entry
        }).collect::<Vec<_>>(),
        "build": env!("BUILD_GIT_DESCRIBE"),
        "created_at": timestamp(),
    });
    write_output(
        args.out.as_deref(),
        &format!("{}\n", serde_json::to_string_pretty(&report).expect("json")),
    )?;
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY_FAILED)
    })
}

fn cmd_matelem(args: &MatelemArgs) -> Result<ExitCode, CliError> {
    let parity = match args.parity.as_str() {
        "even" => Parity::Even,
        "odd" => Parity::Odd,
        other => {
            return Err(Error::InvalidParameters(format!(
                "unknown parity '{other}' (expected even or odd)"
            ))
            .into())
        }
    };
    let (lambda, mu) = match (args.lambda, args.mu) {
        (Some(l), Some(m)) => (l, m),
        _ => (0.0, args.t.sqrt()),
    };
    let query = MatElemQuery {
        n: args.n,
        k: args.k,
        l: args.l,
        parity,
        a: args.a,
        lambda,
        mu,
    };
    let value = match args.route.as_str() {
        "j" => {
            require_diagonal(args.l, "j")?;
            (diag_j(args.n, args.k, parity, &args.a, query.t()), 0.0)
        }
        "s" => {
            require_diagonal(args.l, "s")?;
            (diag_s(args.n, args.k, parity, &args.a, query.t()), 0.0)
        }
        "recurrence" => {
            let v = offdiag_recurrence(&query);
            (v.re, v.im)
        }
        "closed" => {
            let v = offdiag_closed(&query);
            (v.re, v.im)
        }
        "oracle" => {
            let base = match parity {
                Parity::Even => 0i64,
                Parity::Odd => 1i64,
            };
            let col = 2 * args.n as i64 + base;
            let row = col + 2 * args.l as i64;
            if row < 0 {
                (0.0, 0.0)
            } else {
                let dim = (row.max(col) + 2 * args.k as i64 + 1) as usize;
                let rep = TruncatedRep::new(args.a, dim)?;
                let v = rep.x_power_element(lambda, mu, 2 * args.k, row as usize, col as usize)?;
                (v.re, v.im)
            }
        }
        other => {
            return Err(Error::InvalidParameters(format!(
                "unknown route '{other}' (expected j, s, closed, recurrence or oracle)"
            ))
            .into())
        }
    };
    let mut csv = String::from("n,k,l,parity,a,t,route,value_re,value_im\n");
    csv.push_str(&format!(
        "{},{},{},{},{},{},{},{},{}\n",
        args.n,
        args.k,
        args.l,
        args.parity,
        args.a,
        g17(query.t()),
        args.route,
        g17(value.0),
        g17(value.1)
    ));
    write_output(args.out.as_deref(), &csv)?;
    emit_manifest(
        args.out.as_deref(),
        &json!({
            "command": "matelem",
            "flags": {
                "n": args.n, "k": args.k, "l": args.l, "parity": args.parity,
                "a": args.a.to_string(), "t": query.t(), "route": args.route,
            },
            "tolerances": {},
            "build": env!("BUILD_GIT_DESCRIBE"),
            "created_at": timestamp(),
        }),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn require_diagonal(l: i32, route: &str) -> Result<(), CliError> {
    if l != 0 {
        return Err(Error::InvalidParameters(format!(
            "route '{route}' evaluates diagonal elements only (l = 0); \
             use --route closed, recurrence or oracle for l != 0"
        ))
        .into());
    }
    Ok(())
}

fn cmd_wavefn(args: &WavefnArgs) -> Result<ExitCode, CliError> {
    let grid: Vec<f64> = match (args.q, args.q_max, args.points) {
        (Some(q), _, _) => vec![q],
        (None, Some(qmax), Some(points)) => {
            if points < 2 {
                return Err(Error::InvalidParameters("need at least 2 grid points".into()).into());
            }
            (0..points)
                .map(|i| -qmax + 2.0 * qmax * i as f64 / (points - 1) as f64)
                .collect()
        }
        _ => {
            return Err(Error::InvalidParameters(
                "pass either --q or both --q-max and --points".into(),
            )
            .into())
        }
    };
    let mut csv = String::from("q,psi,diverged\n");
    for q in grid {
        let v = wavefn(args.n, &args.a, q);
        csv.push_str(&format!("{},{},{}\n", g17(q), g17(v.value), v.diverged));
    }
    write_output(args.out.as_deref(), &csv)?;
    emit_manifest(
        args.out.as_deref(),
        &json!({
            "command": "wavefn",
            "flags": {
                "n": args.n, "a": args.a.to_string(),
                "q": args.q, "q_max": args.q_max, "points": args.points,
            },
            "tolerances": {},
            "build": env!("BUILD_GIT_DESCRIBE"),
            "created_at": timestamp(),
        }),
    )?;
    Ok(ExitCode::SUCCESS)
}
