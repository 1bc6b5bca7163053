//! Request handling behind the `lowrankdm` binary.
//!
//! [`RunRequest`] is independent of argument parsing so the whole front end
//! can be driven from tests through [`run`]. Every JSON report has the keys
//! `command`, `inputs`, `results`, `tolerances` and `version`; failures
//! produce a one-line JSON object with an `error` field instead.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::approx::{closest_rank_k, distance_to_low_rank};
use crate::error::{Error, Result};
use crate::farthest::{
    farthest_search, kyfan_optimal_m, schatten_counterexample, schatten_crossing,
    schatten_is_always_maxmixed,
};
use crate::matrix_io::{format_f64, read_matrix};
use crate::norms::{parse_extended_real, NormSpec};
use crate::oracle::{oracle_min_distance, OracleConfig};
use crate::random::random_density;
use crate::spectra::{validate_density, DensityMatrix, Tolerances};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Gap below which `verify` reports agreement.
pub const VERIFY_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Approx,
    Distance,
    Farthest,
    KyfanM,
    SchattenClass,
    Crossing,
    Counterexample,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Approx => "approx",
            Command::Distance => "distance",
            Command::Farthest => "farthest",
            Command::KyfanM => "kyfan-m",
            Command::SchattenClass => "schatten-class",
            Command::Crossing => "crossing",
            Command::Counterexample => "counterexample",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// One fully parsed invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRequest {
    pub command: Command,
    pub input_path: Option<PathBuf>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub r: Option<usize>,
    pub m1: Option<usize>,
    pub m2: Option<usize>,
    pub p: Option<f64>,
    pub spec: NormSpec,
    pub bracket: Option<(f64, f64)>,
    pub output_format: OutputFormat,
    pub seed: u64,
    pub restarts: Option<usize>,
    /// Include the closest state itself in `approx` output.
    pub show_closest: bool,
    pub tolerances: Tolerances,
}

impl RunRequest {
    pub fn new(command: Command) -> Self {
        RunRequest {
            command,
            input_path: None,
            n: None,
            k: None,
            r: None,
            m1: None,
            m2: None,
            p: None,
            spec: NormSpec::trace(),
            bracket: None,
            output_format: OutputFormat::Json,
            seed: 0,
            restarts: None,
            show_closest: false,
            tolerances: Tolerances::default(),
        }
    }
}

/// Exit code plus the text to print.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    pub code: i32,
    pub output: String,
}

impl RunOutcome {
    pub fn is_success(&self) -> bool {
        self.code == 0
    }
}

/// Exit code for an error: 1 for bad input, 2 for numerical failure.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_validation() {
        1
    } else {
        2
    }
}

/// One-line JSON error report.
pub fn error_line(command: Option<&str>, kind: &str, message: &str) -> String {
    let message = message.lines().next().unwrap_or("").trim();
    json!({
        "command": command,
        "error": { "kind": kind, "message": message },
        "version": VERSION,
    })
    .to_string()
}

/// Runs one request. Never panics on bad input.
pub fn run(req: &RunRequest) -> RunOutcome {
    match execute(req) {
        Ok(output) => RunOutcome { code: 0, output },
        Err(e) => RunOutcome {
            code: exit_code(&e),
            output: error_line(Some(req.command.name()), e.kind(), &e.to_string()),
        },
    }
}

fn require<T: Copy>(v: Option<T>, flag: &str, command: Command) -> Result<T> {
    v.ok_or_else(|| Error::BadRange(format!("{} requires --{flag}", command.name())))
}

fn load_state(req: &RunRequest) -> Result<DensityMatrix> {
    let path = req
        .input_path
        .as_ref()
        .ok_or_else(|| Error::BadRange(format!("{} requires an input file", req.command.name())))?;
    let m = read_matrix(path)?;
    validate_density(m, &req.tolerances)
}

/// Report body: JSON results plus a flat CSV table.
struct Report {
    inputs: Value,
    results: Value,
    csv_header: Vec<&'static str>,
    csv_rows: Vec<Vec<String>>,
}

fn f(x: f64) -> String {
    format_f64(x)
}

fn execute(req: &RunRequest) -> Result<String> {
    let report = match req.command {
        Command::Approx => approx(req)?,
        Command::Distance => distance(req)?,
        Command::Farthest => farthest(req)?,
        Command::KyfanM => kyfan(req)?,
        Command::SchattenClass => schatten_class(req)?,
        Command::Crossing => crossing(req)?,
        Command::Counterexample => counterexample(req)?,
        Command::Verify => verify(req)?,
    };
    match req.output_format {
        OutputFormat::Json => {
            let doc = json!({
                "command": req.command.name(),
                "inputs": report.inputs,
                "results": report.results,
                "tolerances": req.tolerances,
                "version": VERSION,
            });
            Ok(serde_json::to_string_pretty(&doc).map_err(|e| Error::Parse(e.to_string()))?)
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Parse(e.to_string());
            w.write_record(&report.csv_header).map_err(io)?;
            for row in &report.csv_rows {
                w.write_record(row).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
            Ok(String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))?)
        }
    }
}

fn path_value(req: &RunRequest) -> Value {
    req.input_path
        .as_ref()
        .map_or(Value::Null, |p| Value::String(p.display().to_string()))
}

fn approx(req: &RunRequest) -> Result<Report> {
    let k = require(req.k, "k", req.command)?;
    let x = load_state(req)?;
    let res = closest_rank_k(&x, k, req.spec)?;
    let mut results = serde_json::to_value(&res).map_err(|e| Error::Parse(e.to_string()))?;
    if req.show_closest {
        let y = res.closest.matrix();
        let rows: Vec<Vec<[f64; 2]>> = (0..y.nrows())
            .map(|i| (0..y.ncols()).map(|j| [y[(i, j)].re, y[(i, j)].im]).collect())
            .collect();
        results["closest_matrix"] = json!(rows);
    }
    let residual = res
        .residual_spectrum
        .iter()
        .map(|v| f(*v))
        .collect::<Vec<_>>()
        .join(" ");
    Ok(Report {
        inputs: json!({ "input_path": path_value(req), "k": k, "norm": req.spec }),
        results,
        csv_header: vec!["n", "k", "norm", "gamma", "distance", "residual_spectrum"],
        csv_rows: vec![vec![
            x.dim().to_string(),
            k.to_string(),
            req.spec.to_string(),
            f(res.gamma),
            f(res.distance),
            residual,
        ]],
    })
}

fn distance(req: &RunRequest) -> Result<Report> {
    let k = require(req.k, "k", req.command)?;
    let x = load_state(req)?;
    let d = distance_to_low_rank(x.eigenvalues(), k, req.spec)?;
    Ok(Report {
        inputs: json!({ "input_path": path_value(req), "k": k, "norm": req.spec }),
        results: json!({ "distance": d }),
        csv_header: vec!["distance"],
        csv_rows: vec![vec![f(d)]],
    })
}

fn farthest(req: &RunRequest) -> Result<Report> {
    let n = require(req.n, "n", req.command)?;
    let k = require(req.k, "k", req.command)?;
    let rep = farthest_search(n, k, req.spec)?;
    let rows = rep
        .candidate_distances
        .iter()
        .map(|c| {
            vec![
                c.m.to_string(),
                f(c.distance),
                (c.m == rep.argmax_m).to_string(),
            ]
        })
        .collect();
    Ok(Report {
        inputs: json!({ "n": n, "k": k, "norm": req.spec }),
        results: serde_json::to_value(&rep).map_err(|e| Error::Parse(e.to_string()))?,
        csv_header: vec!["m", "distance", "is_argmax"],
        csv_rows: rows,
    })
}

fn kyfan(req: &RunRequest) -> Result<Report> {
    let n = require(req.n, "n", req.command)?;
    let k = require(req.k, "k", req.command)?;
    let r = require(req.r, "r", req.command)?;
    let sel = kyfan_optimal_m(n, k, r)?;
    Ok(Report {
        inputs: json!({ "n": n, "k": k, "r": r }),
        results: serde_json::to_value(&sel).map_err(|e| Error::Parse(e.to_string()))?,
        csv_header: vec!["n", "k", "r", "case", "predicted_m", "predicted_value", "search_m"],
        csv_rows: vec![vec![
            n.to_string(),
            k.to_string(),
            r.to_string(),
            format!("{:?}", sel.case),
            sel.predicted_m.to_string(),
            f(sel.predicted_value),
            sel.search_m.to_string(),
        ]],
    })
}

fn p_value(p: f64) -> Value {
    if p.is_finite() {
        json!(p)
    } else {
        json!("inf")
    }
}

fn schatten_class(req: &RunRequest) -> Result<Report> {
    let p = require(req.p, "p", req.command)?;
    NormSpec::schatten(p)?;
    let always = schatten_is_always_maxmixed(p);
    Ok(Report {
        inputs: json!({ "p": p_value(p) }),
        results: json!({ "maximally_mixed_always_farthest": always }),
        csv_header: vec!["p", "maximally_mixed_always_farthest"],
        csv_rows: vec![vec![f(p), always.to_string()]],
    })
}

/// Default bracket for `crossing` when `--bracket` is absent.
pub const DEFAULT_BRACKET: (f64, f64) = (1.0, 20.0);

fn crossing(req: &RunRequest) -> Result<Report> {
    let n = require(req.n, "n", req.command)?;
    let k = require(req.k, "k", req.command)?;
    let m1 = require(req.m1, "m1", req.command)?;
    let m2 = require(req.m2, "m2", req.command)?;
    let bracket = req.bracket.unwrap_or(DEFAULT_BRACKET);
    let p = schatten_crossing(n, k, m1, m2, bracket)?;
    Ok(Report {
        inputs: json!({ "n": n, "k": k, "m1": m1, "m2": m2, "bracket": [bracket.0, bracket.1] }),
        results: json!({ "p": p }),
        csv_header: vec!["n", "k", "m1", "m2", "p"],
        csv_rows: vec![vec![
            n.to_string(),
            k.to_string(),
            m1.to_string(),
            m2.to_string(),
            f(p),
        ]],
    })
}

fn counterexample(req: &RunRequest) -> Result<Report> {
    let p = require(req.p, "p", req.command)?;
    let c = schatten_counterexample(p)?;
    Ok(Report {
        inputs: json!({ "p": p_value(p) }),
        results: serde_json::to_value(c).map_err(|e| Error::Parse(e.to_string()))?,
        csv_header: vec!["p", "n", "k", "support", "distance", "maxmixed_distance"],
        csv_rows: vec![vec![
            f(c.p),
            c.n.to_string(),
            c.k.to_string(),
            c.support.to_string(),
            f(c.distance),
            f(c.maxmixed_distance),
        ]],
    })
}

fn verify(req: &RunRequest) -> Result<Report> {
    let k = require(req.k, "k", req.command)?;
    let x = if req.input_path.is_some() {
        load_state(req)?
    } else {
        let n = require(req.n, "n", req.command)?;
        if n == 0 {
            return Err(Error::BadRange("n must be positive".into()));
        }
        random_density(n, &mut ChaCha8Rng::seed_from_u64(req.seed))
    };
    let closed = distance_to_low_rank(x.eigenvalues(), k, req.spec)?;
    let mut cfg = OracleConfig::with_seed(req.seed);
    if let Some(r) = req.restarts {
        cfg.restarts = r;
    }
    let o = oracle_min_distance(&x, k, req.spec, &cfg)?;
    let gap = o.value - closed;
    let agree = gap.abs() <= VERIFY_TOL;
    Ok(Report {
        inputs: json!({
            "input_path": path_value(req),
            "n": x.dim(),
            "k": k,
            "norm": req.spec,
            "seed": req.seed,
            "oracle": cfg,
        }),
        results: json!({
            "eigenvalues": x.eigenvalues(),
            "closed_form": closed,
            "oracle": o.value,
            "gap": gap,
            "agree": agree,
            "oracle_evaluations": o.evaluations,
            "restarts_converged": o.restarts_converged,
        }),
        csv_header: vec!["n", "k", "norm", "seed", "closed_form", "oracle", "gap", "agree"],
        csv_rows: vec![vec![
            x.dim().to_string(),
            k.to_string(),
            req.spec.to_string(),
            req.seed.to_string(),
            f(closed),
            f(o.value),
            f(gap),
            agree.to_string(),
        ]],
    })
}

// ---------------------------------------------------------------------------
// argument parsing

fn parse_norm(s: &str) -> std::result::Result<NormSpec, String> {
    s.parse::<NormSpec>().map_err(|e| e.to_string())
}

fn parse_p(s: &str) -> std::result::Result<f64, String> {
    parse_extended_real(s).ok_or_else(|| format!("'{s}' is not a number or 'inf'"))
}

fn parse_bracket(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("bracket must be 'lo,hi', got '{s}'"))?;
    let lo = parse_p(a)?;
    let hi = parse_p(b)?;
    Ok((lo, hi))
}

/// Closest low-rank density matrices and farthest states under USI norms.
#[derive(Debug, Parser)]
#[command(name = "lowrankdm", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,

    /// Seed for random states and the oracle.
    #[arg(long, global = true, env = "LOWRANKDM_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Hermiticity tolerance for input matrices.
    #[arg(long, global = true)]
    pub tol_herm: Option<f64>,
    /// Trace tolerance for input states.
    #[arg(long, global = true)]
    pub tol_trace: Option<f64>,
    /// Negative-eigenvalue tolerance for input states.
    #[arg(long, global = true)]
    pub tol_psd: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Closest state of rank at most k to the state in FILE.
    Approx {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = parse_norm, default_value = "trace")]
        norm: NormSpec,
        /// Also print the closest state.
        #[arg(long)]
        show_closest: bool,
    },
    /// Distance from the state in FILE to the rank-≤k states.
    Distance {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = parse_norm, default_value = "trace")]
        norm: NormSpec,
    },
    /// Distances of I_m/m ⊕ O for m = k+1..n and the farthest one.
    Farthest {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = parse_norm, default_value = "trace")]
        norm: NormSpec,
    },
    /// Farthest candidate for the Ky Fan r-norm.
    KyfanM {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: usize,
    },
    /// Whether I/n is farthest for every n, k under the Schatten p-norm.
    SchattenClass {
        #[arg(long, value_parser = parse_p)]
        p: f64,
    },
    /// Exponent p at which candidates m1 and m2 are equally far.
    Crossing {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m1: usize,
        #[arg(long)]
        m2: usize,
        /// Search interval 'lo,hi' for p (default 1,20).
        #[arg(long, value_parser = parse_bracket)]
        bracket: Option<(f64, f64)>,
    },
    /// An (n, k) where I/n is not farthest under the Schatten p-norm.
    Counterexample {
        #[arg(long, value_parser = parse_p)]
        p: f64,
    },
    /// Compares the closed-form distance with a direct numerical minimisation.
    Verify {
        /// State to test; a seeded random state of dimension n otherwise.
        file: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = parse_norm, default_value = "trace")]
        norm: NormSpec,
        /// Oracle restarts.
        #[arg(long)]
        restarts: Option<usize>,
    },
}

impl Cli {
    pub fn into_request(self) -> RunRequest {
        let mut tolerances = Tolerances::default();
        if let Some(t) = self.tol_herm {
            tolerances.herm = t;
        }
        if let Some(t) = self.tol_trace {
            tolerances.trace = t;
        }
        if let Some(t) = self.tol_psd {
            tolerances.psd = t;
        }
        let mut req = match self.command {
            CliCommand::Approx { file, k, norm, show_closest } => RunRequest {
                input_path: Some(file),
                k: Some(k),
                spec: norm,
                show_closest,
                ..RunRequest::new(Command::Approx)
            },
            CliCommand::Distance { file, k, norm } => RunRequest {
                input_path: Some(file),
                k: Some(k),
                spec: norm,
                ..RunRequest::new(Command::Distance)
            },
            CliCommand::Farthest { n, k, norm } => RunRequest {
                n: Some(n),
                k: Some(k),
                spec: norm,
                ..RunRequest::new(Command::Farthest)
            },
            CliCommand::KyfanM { n, k, r } => RunRequest {
                n: Some(n),
                k: Some(k),
                r: Some(r),
                ..RunRequest::new(Command::KyfanM)
            },
            CliCommand::SchattenClass { p } => RunRequest {
                p: Some(p),
                ..RunRequest::new(Command::SchattenClass)
            },
            CliCommand::Crossing { n, k, m1, m2, bracket } => RunRequest {
                n: Some(n),
                k: Some(k),
                m1: Some(m1),
                m2: Some(m2),
                bracket,
                ..RunRequest::new(Command::Crossing)
            },
            CliCommand::Counterexample { p } => RunRequest {
                p: Some(p),
                ..RunRequest::new(Command::Counterexample)
            },
            CliCommand::Verify { file, n, k, norm, restarts } => RunRequest {
                input_path: file,
                n,
                k: Some(k),
                spec: norm,
                restarts,
                ..RunRequest::new(Command::Verify)
            },
        };
        req.output_format = self.format;
        req.seed = self.seed;
        req.tolerances = tolerances;
        req
    }
}

/// Parses command-line arguments (including the program name) and runs them.
///
/// `--help` and `--version` succeed with their usual text; usage errors exit
/// with code 1 and a one-line JSON error.
pub fn run_args<I, T>(args: I) -> RunOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli.into_request()),
        Err(e) => match e.kind() {
            clap::error::ErrorKind::DisplayHelp
            | clap::error::ErrorKind::DisplayVersion
            | clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => RunOutcome {
                code: 0,
                output: e.to_string(),
            },
            _ => RunOutcome {
                code: 1,
                output: error_line(None, "Usage", &e.to_string()),
            },
        },
    }
}
