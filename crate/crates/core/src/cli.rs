//! Command-line front end.
//!
//! Every command prints one JSON document on stdout that records the tool
//! name, version, and seed. Exit codes: 0 success or pass, 1 certification
//! failure, 2 usage, parse, or regime error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cert::{CertReport, DEFAULT_TOL};
use crate::correspond::correspondence_report_with;
use crate::error::Error;
use crate::graph::{resolvent_graph, OperatorGraph};
use crate::hypoconvex::{
    prox, ExpFamily, HypoconvexFn, IndicatorQuadratic, Quadratic, QuadraticSpline,
};
use crate::iterate::{km_iterate, proximal_point, IterationTrace, DEFAULT_ITER_TOL, DEFAULT_MAX_ITER};
use crate::map::PointMap;
use crate::linear::{
    classification_report, counterexample_family, projection_family, resolvent_linear,
    rotation_family, LinearOp,
};
use crate::monotone::{check_rho_comonotone, check_rho_monotone, check_single_valued};
use crate::resolvent::{certify_graph_as_map, MapProperty};
use crate::sampler::{PairSampler, DEFAULT_SEED};
use crate::sets::BoxSet;
use crate::vector::Vector;

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const TOL_ENV: &str = "RESOLVENT_LAB_TOL";

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "resolvent-lab", version, about = "Certify operators, resolvents, and prox maps")]
pub struct Cli {
    /// Seed for every sampling step.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal moduli of a matrix and whether its resolvent exists.
    Classify {
        matrix: PathBuf,
    },
    /// Check a property of an operator graph.
    Certify(CertifyArgs),
    /// Place a matrix in its regime of the operator/resolvent table and verify the row.
    Correspond {
        matrix: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        /// Also probe the reflected-resolvent statements.
        #[arg(long)]
        reflected: bool,
    },
    /// Evaluate the prox of a hypoconvex function at a point.
    Prox {
        #[command(flatten)]
        function: FunctionArgs,
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
    },
    /// Run the proximal-point or Krasnosel'skiĭ–Mann iteration.
    Iterate(IterateArgs),
    /// Emit a matrix or graph file for one of the built-in families.
    Family {
        #[command(subcommand)]
        family: FamilyCommand,
    },
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    pub graph: PathBuf,
    #[arg(long, value_enum)]
    pub property: CertProperty,
    #[arg(long, allow_negative_numbers = true)]
    pub param: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CertProperty {
    RhoMonotone,
    RhoComonotone,
    SingleValued,
    ResolventSingleValued,
    Conic,
    Averaged,
    Nonexpansive,
    Cocoercive,
    Lipschitz,
    StronglyMonotone,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FunctionName {
    Exp,
    IndicatorQuadratic,
    ConcaveQuadratic,
    Spline,
}

#[derive(Debug, Args)]
pub struct FunctionArgs {
    #[arg(long = "function", value_enum)]
    pub name: Option<FunctionName>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    /// Constraint set of the indicator-quadratic family: "R+", "R-", "R", or "lo,hi".
    #[arg(long, allow_hyphen_values = true)]
    pub cone: Option<String>,
    /// Spline file for `--function spline`.
    #[arg(long)]
    pub spline: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IterateArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    /// Matrix file; iterates the matrix itself, or its resolvent with `--resolvent`.
    #[arg(long, conflicts_with = "name")]
    pub matrix: Option<PathBuf>,
    #[arg(long, requires = "matrix")]
    pub resolvent: bool,
    /// Start point, comma separated for vectors.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    pub x0: Vec<f64>,
    /// Relaxation in (0, 1].
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    #[arg(long, default_value_t = DEFAULT_ITER_TOL)]
    pub tol: f64,
    /// Trajectory CSV path; without it the CSV goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum FamilyCommand {
    /// `T = (1−λ)Id + λN` and `A = T⁻¹ − Id` on Rⁿ.
    Rotation {
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Emit `T` instead of `A`.
        #[arg(long)]
        map: bool,
    },
    /// `T = (1−α)Id + αP_U` with `U` spanned by the first coordinate axis.
    Projection {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Sampled graph `{(x, Ax)}` of a matrix file.
    LinearGraph {
        matrix: PathBuf,
        #[arg(long, default_value_t = 64)]
        count: usize,
    },
    /// Sampled graph of `A = (−Id − rP_C)⁻¹` for a box `C`.
    Counterexample {
        #[arg(long)]
        r: f64,
        /// Box `C` as "lo,hi" (one dimension) or "R".
        #[arg(long, allow_hyphen_values = true, default_value = "0,1")]
        c: String,
        #[arg(long, default_value_t = 64)]
        count: usize,
    },
}

/// Failure modes of a command, mapped onto exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Lib(Error::Io(e))
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    seed: u64,
    #[serde(flatten)]
    body: T,
}

/// Parses `args` and runs the command, writing JSON to `out`. Returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, command: &str, seed: u64, body: T) -> CliResult<()> {
    let env = Envelope { tool: TOOL, version: VERSION, command, seed, body };
    let text = serde_json::to_string_pretty(&env).map_err(Error::from)?;
    writeln!(out, "{text}")?;
    Ok(())
}

/// Tolerance from the flag, else [`TOL_ENV`], else [`DEFAULT_TOL`].
pub fn resolve_tol(flag: Option<f64>) -> CliResult<f64> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var(TOL_ENV) {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{TOL_ENV} is not a number: {s:?}")))?,
            Err(_) => DEFAULT_TOL,
        },
    };
    if !(tol >= 0.0) || !tol.is_finite() {
        return Err(CliError::Usage(format!("tolerance must be finite and >= 0, got {tol}")));
    }
    Ok(tol)
}

fn load_matrix(path: &Path) -> CliResult<LinearOp> {
    Ok(LinearOp::load(path)?)
}

fn execute(cli: &Cli, out: &mut dyn Write) -> CliResult<u8> {
    let seed = cli.seed;
    match &cli.command {
        Command::Classify { matrix } => {
            let a = load_matrix(matrix)?;
            emit(out, "classify", seed, classification_report(&a))?;
            Ok(EXIT_OK)
        }
        Command::Certify(args) => cmd_certify(args, seed, out),
        Command::Correspond { matrix, tol, reflected } => {
            let a = load_matrix(matrix)?;
            let tol = resolve_tol(*tol)?;
            let sampler = PairSampler::with_seed(seed);
            let report = correspondence_report_with(&a, &sampler, tol, *reflected)?;
            let passed = report.passed;
            emit(out, "correspond", seed, report)?;
            Ok(if passed { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Prox { function, x } => {
            let f = build_function(function)?;
            let mu = require(function.mu, "--mu")?;
            let result = prox(f.as_ref(), mu, *x)?;
            #[derive(Serialize)]
            struct Body<'a> {
                function: &'a str,
                lambda: f64,
                mu: f64,
                x: f64,
                #[serde(flatten)]
                result: crate::hypoconvex::ProxResult,
            }
            let lambda = f.lambda();
            emit(out, "prox", seed, Body { function: &f.name(), lambda, mu, x: *x, result })?;
            Ok(EXIT_OK)
        }
        Command::Iterate(args) => cmd_iterate(args, seed, out),
        Command::Family { family } => cmd_family(family, seed, out),
    }
}

fn require(v: Option<f64>, flag: &str) -> CliResult<f64> {
    v.ok_or_else(|| CliError::Usage(format!("{flag} is required")))
}

fn cmd_certify(args: &CertifyArgs, seed: u64, out: &mut dyn Write) -> CliResult<u8> {
    let g = OperatorGraph::load(&args.graph)?;
    let tol = resolve_tol(args.tol)?;
    let param = || require(args.param, "--param");
    let report: CertReport = match args.property {
        CertProperty::RhoMonotone => check_rho_monotone(&g, param()?, tol)?,
        CertProperty::RhoComonotone => check_rho_comonotone(&g, param()?, tol)?,
        CertProperty::SingleValued => check_single_valued(&g),
        CertProperty::ResolventSingleValued => check_single_valued(&resolvent_graph(&g)),
        CertProperty::Conic => certify_graph_as_map(&g, MapProperty::Conic(param()?), tol)?,
        CertProperty::Averaged => certify_graph_as_map(&g, MapProperty::Averaged(param()?), tol)?,
        CertProperty::Nonexpansive => certify_graph_as_map(&g, MapProperty::Nonexpansive, tol)?,
        CertProperty::Cocoercive => certify_graph_as_map(&g, MapProperty::Cocoercive(param()?), tol)?,
        CertProperty::Lipschitz => certify_graph_as_map(&g, MapProperty::Lipschitz(param()?), tol)?,
        CertProperty::StronglyMonotone => {
            certify_graph_as_map(&g, MapProperty::StronglyMonotone(param()?), tol)?
        }
    };
    let passed = report.passed;
    emit(out, "certify", seed, report)?;
    Ok(if passed { EXIT_OK } else { EXIT_FAIL })
}

fn parse_pair(s: &str) -> CliResult<(f64, f64)> {
    let bad = || CliError::Usage(format!("expected \"lo,hi\", got {s:?}"));
    let (lo, hi) = s.split_once(',').ok_or_else(bad)?;
    let lo = lo.trim().parse().map_err(|_| bad())?;
    let hi = hi.trim().parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

/// One-dimensional set from "R+", "R-", "R", or "lo,hi".
fn parse_set(s: &str) -> CliResult<BoxSet> {
    let set = match s.trim() {
        "R+" => BoxSet::nonnegative(1),
        "R-" => BoxSet::interval(f64::NEG_INFINITY, 0.0)?,
        "R" => BoxSet::whole(1),
        other => {
            let (lo, hi) = parse_pair(other)?;
            BoxSet::interval(lo, hi)?
        }
    };
    Ok(set)
}

fn build_function(args: &FunctionArgs) -> CliResult<Box<dyn HypoconvexFn>> {
    let name = args
        .name
        .ok_or_else(|| CliError::Usage("--function is required".into()))?;
    let f: Box<dyn HypoconvexFn> = match name {
        FunctionName::Exp => Box::new(ExpFamily::new(require(args.lambda, "--lambda")?)?),
        FunctionName::ConcaveQuadratic => {
            Box::new(Quadratic::concave(require(args.lambda, "--lambda")?)?)
        }
        FunctionName::IndicatorQuadratic => {
            let set = parse_set(args.cone.as_deref().unwrap_or("R"))?;
            Box::new(IndicatorQuadratic::new(require(args.lambda, "--lambda")?, set)?)
        }
        FunctionName::Spline => {
            let path = args
                .spline
                .as_ref()
                .ok_or_else(|| CliError::Usage("--spline is required for --function spline".into()))?;
            let spline = QuadraticSpline::from_json(&std::fs::read_to_string(path)?)?;
            match args.lambda {
                Some(l) => Box::new(QuadraticSpline::new(spline.pieces().to_vec(), Some(l))?),
                None => Box::new(spline),
            }
        }
    };
    Ok(f)
}

#[derive(Serialize)]
struct IterateSummary {
    status: String,
    iterations: usize,
    last: Vector,
    last_residual: Option<f64>,
    limit: Option<Vector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    csv: Option<PathBuf>,
}

fn cmd_iterate(args: &IterateArgs, seed: u64, out: &mut dyn Write) -> CliResult<u8> {
    if args.x0.is_empty() {
        return Err(CliError::Usage("--x0 is required".into()));
    }
    let trace: IterationTrace = match &args.matrix {
        Some(path) => {
            let m = load_matrix(path)?;
            let t = if args.resolvent { resolvent_linear(&m)? } else { m };
            let x0 = Vector::new(args.x0.clone())?;
            km_iterate(&t, x0, args.t, args.max_iter, args.tol)?
        }
        None => {
            if args.x0.len() != 1 {
                return Err(CliError::Lib(Error::Dimension { expected: 1, got: args.x0.len() }));
            }
            if args.t != 1.0 {
                return Err(CliError::Usage("--t applies to --matrix runs only".into()));
            }
            let f = build_function(&args.function)?;
            let mu = require(args.function.mu, "--mu")?;
            proximal_point(f.as_ref(), mu, args.x0[0], args.max_iter, args.tol)?
        }
    };
    match &args.out {
        Some(path) => {
            trace.write_csv(BufWriter::new(File::create(path)?))?;
            let summary = IterateSummary {
                status: trace.status.to_string(),
                iterations: trace.iterations(),
                last: trace.last().clone(),
                last_residual: trace.residuals.last().copied(),
                limit: trace.limit.clone(),
                csv: Some(path.clone()),
            };
            emit(out, "iterate", seed, summary)?;
        }
        None => trace.write_csv(&mut *out)?,
    }
    Ok(EXIT_OK)
}

fn cmd_family(family: &FamilyCommand, seed: u64, out: &mut dyn Write) -> CliResult<u8> {
    let text = match family {
        FamilyCommand::Rotation { lambda, n, map } => {
            let fam = rotation_family(*lambda, *n)?;
            if *map { fam.t.to_json() } else { fam.a.to_json() }
        }
        FamilyCommand::Projection { alpha, n } => {
            if *n == 0 {
                return Err(CliError::Usage("--n must be at least 1".into()));
            }
            let fam = projection_family(*alpha, &[Vector::basis(*n, 0)])?;
            fam.t.to_json()
        }
        FamilyCommand::LinearGraph { matrix, count } => {
            let a = load_matrix(matrix)?;
            let pts = PairSampler::with_seed(seed).sample_points(a.n(), *count);
            OperatorGraph::from_map(a.n(), &pts, |x| a.apply(x))?.to_json()
        }
        FamilyCommand::Counterexample { r, c, count } => {
            let set = parse_set(c)?;
            let fam = counterexample_family(*r, set)?;
            fam.sample_graph(&PairSampler::with_seed(seed), *count)?.to_json()
        }
    };
    // The loaders ignore unknown keys, so provenance rides along in the file.
    let mut doc: serde_json::Value = serde_json::from_str(&text).map_err(Error::from)?;
    if let Some(obj) = doc.as_object_mut() {
        obj.insert("tool".into(), TOOL.into());
        obj.insert("version".into(), VERSION.into());
        obj.insert("seed".into(), seed.into());
    }
    let text = serde_json::to_string_pretty(&doc).map_err(Error::from)?;
    writeln!(out, "{text}")?;
    Ok(EXIT_OK)
}

/// Process entry point.
pub fn main() -> std::process::ExitCode {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let code = run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    std::process::ExitCode::from(code)
}

/// Runs with the program name prepended and captures both streams.
pub fn run_to_string(args: &[&str]) -> (u8, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("resolvent-lab").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
}
