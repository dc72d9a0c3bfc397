//! Scenario-driven front end for the `mvfix` binary.
//!
//! Exit codes: 0 success, 1 parse/schema/usage, 2 validation, 3 runtime
//! failure, 4 verification failure.

pub mod scenario;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use mvfix_core::fixedpoint::{epsilon_chain, is_epsilon_chainable, local_iterate, nadler_iterate, FixedPointError, IterationLog};
use mvfix_core::metric::{MetricError, Point, Space};
use mvfix_core::reduction::{
    chain_bound, derive_constant, global_from_local, verify_certificate, Certificate, ChainTrace, LocalPairSampler,
    ReductionError,
};
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

pub use scenario::{parse_scenario, Scenario, ScenarioMap};

/// Largest point cloud drawn for `chainability` on continuous spaces.
pub const CHAINABILITY_CLOUD: usize = 200;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("runtime error: {0}")]
    Runtime(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) | CliError::Schema { .. } => 1,
            CliError::Validation(_) => 2,
            CliError::Runtime(_) | CliError::Io(_) => 3,
        }
    }
}

impl From<ReductionError> for CliError {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::InvalidGauge(_)
            | ReductionError::DegenerateEpsilon(_)
            | ReductionError::InvalidLambda(_)
            | ReductionError::NotStrict { .. } => CliError::Validation(e.to_string()),
            ReductionError::Metric(MetricError::OutOfDomain { .. } | MetricError::DimensionMismatch { .. }) => {
                CliError::Validation(e.to_string())
            }
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<FixedPointError> for CliError {
    fn from(e: FixedPointError) -> Self {
        match e {
            FixedPointError::InvalidContraction(_) => CliError::Validation(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "mvfix", version, about = "Local contraction certificates and fixed-point iteration for multivalued maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Common {
    /// Scenario file (JSON).
    #[arg(long)]
    pub scenario: PathBuf,
    /// Write the artifact here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Derive the uniform local constant from the gauge.
    Reduce {
        #[command(flatten)]
        common: Common,
    },
    /// Derive the certificate and spot-check it on sampled pairs.
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// Chain the local bound along the segment between two points.
    Chain {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        /// Allow pairs at distance epsilon or more.
        #[arg(long)]
        global: bool,
    },
    /// Nearest-point iteration from a start point.
    Iterate {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        start: String,
        #[arg(long, default_value_t = 1000)]
        max_iter: usize,
        /// Require every step to stay below epsilon.
        #[arg(long)]
        local: bool,
    },
    /// Connectivity of the epsilon-graph on a point cloud.
    Chainability {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true, requires = "to")]
        from: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "from")]
        to: Option<String>,
    },
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Reduce { common }
            | Command::Verify { common }
            | Command::Chain { common, .. }
            | Command::Iterate { common, .. }
            | Command::Chainability { common, .. } => common,
        }
    }
}

/// Artifact and exit status of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub exit_code: i32,
    /// One line for stderr when the command did not succeed.
    pub diagnostic: Option<String>,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, exit_code: 0, diagnostic: None }
    }

    fn with_status(stdout: String, exit_code: i32, diagnostic: Option<String>) -> Self {
        Outcome { stdout, exit_code, diagnostic }
    }
}

/// Parses a comma-separated point such as `1.5` or `0,-2`.
pub fn parse_point(text: &str, space: &Space) -> Result<Point, CliError> {
    let coords = text
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad point {text:?}"))))
        .collect::<Result<Vec<f64>, _>>()?;
    let p = Point::new(coords);
    space.check(&p).map_err(|e| CliError::Validation(format!("point {text}: {e}")))?;
    Ok(p)
}

/// Integral floats become JSON integers so that `2.0` prints as `2`.
pub fn normalize_numbers(value: Value) -> Value {
    match value {
        Value::Number(n) => match n.as_f64() {
            Some(f) if n.is_f64() && f.fract() == 0.0 && f.abs() < 9.007_199_254_740_992e15 => {
                Value::from(f as i64)
            }
            _ => Value::Number(n),
        },
        Value::Array(items) => Value::Array(items.into_iter().map(normalize_numbers).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, normalize_numbers(v))).collect()),
        other => other,
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("artifact serializes");
    let mut s = serde_json::to_string(&normalize_numbers(v)).expect("value serializes");
    s.push('\n');
    s
}

/// Shortest round-trip decimal; integral values have no fraction, very
/// small or large magnitudes use an exponent.
pub fn format_number(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 {
        "0".into()
    } else if !(1e-5..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// A scalar for one-dimensional points, a JSON array otherwise.
pub fn format_point(p: &Point) -> String {
    match p.coords() {
        [x] => format_number(*x),
        coords => format!("[{}]", coords.iter().map(|&c| format_number(c)).collect::<Vec<_>>().join(",")),
    }
}

fn csv_string(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}

pub fn trace_csv(trace: &ChainTrace) -> String {
    let rows = trace
        .breakpoints
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let step = |v: &[f64]| if i == 0 { String::new() } else { format_number(v[i - 1]) };
            vec![
                i.to_string(),
                format_number(t),
                step(&trace.step_distances),
                step(&trace.step_hausdorff),
                if i == 0 { String::new() } else { trace.step_ok[i - 1].to_string() },
            ]
        })
        .collect();
    csv_string(&["index", "parameter", "step_distance", "step_hausdorff", "bound_ok"], rows)
}

pub fn log_csv(log: &IterationLog) -> String {
    let rows = log
        .iterates
        .iter()
        .enumerate()
        .map(|(i, p)| {
            vec![
                i.to_string(),
                format_point(p),
                if i == 0 { String::new() } else { format_number(log.step_distances[i - 1]) },
                format_number(log.residuals[i]),
            ]
        })
        .collect();
    csv_string(&["iteration", "point", "step_distance", "residual"], rows)
}

fn certificate(s: &Scenario) -> Result<Certificate, CliError> {
    let gauge = s.gauge.as_ref().ok_or_else(|| CliError::Validation("scenario has no gauge".into()))?;
    Ok(derive_constant(gauge, s.epsilon, s.lambda)?)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ChainabilityReport {
    epsilon: f64,
    points: usize,
    chainable: bool,
    components: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<Vec<Value>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_step: Option<f64>,
}

fn point_value(p: &Point) -> Value {
    match p.coords() {
        [x] => Value::from(*x),
        coords => Value::from(coords.to_vec()),
    }
}

fn cloud(s: &Scenario) -> Vec<Point> {
    match &s.space {
        Space::FiniteMatrix(m) => (0..m.len()).map(Point::index).collect(),
        space => {
            let mut sampler = LocalPairSampler::new(space, s.epsilon, s.seed);
            (0..s.samples.min(CHAINABILITY_CLOUD)).map(|_| sampler.draw_point()).collect()
        }
    }
}

/// Runs a command on a parsed scenario and returns the artifact.
pub fn run(command: &Command, s: &Scenario) -> Result<Outcome, CliError> {
    match command {
        Command::Reduce { .. } => Ok(Outcome::ok(to_json(&certificate(s)?))),
        Command::Verify { .. } => {
            let cert = certificate(s)?;
            let sampler = LocalPairSampler::new(&s.space, cert.epsilon, s.seed);
            let evidence = verify_certificate(&s.space, &s.map, &cert, sampler, s.samples, s.tol)?;
            let violations = evidence.violations;
            let out = to_json(&cert.with_evidence(evidence));
            if violations > 0 {
                let msg = format!("{violations} of {} sampled pairs violate the certificate", s.samples);
                Ok(Outcome::with_status(out, 4, Some(msg)))
            } else {
                Ok(Outcome::ok(out))
            }
        }
        Command::Chain { from, to, global, .. } => {
            let cert = certificate(s)?;
            let (x1, x2) = (parse_point(from, &s.space)?, parse_point(to, &s.space)?);
            let (trace, direct_ok) = if *global {
                let report = global_from_local(&s.space, &s.map, &cert, &x1, &x2, s.tol)?;
                (report.trace, report.holds)
            } else {
                let trace = chain_bound(&s.space, &s.map, &cert, &x1, &x2)?;
                let ok = trace.direct_ok;
                (trace, ok)
            };
            let out = trace_csv(&trace);
            let bad = trace.violations();
            if !bad.is_empty() {
                Ok(Outcome::with_status(out, 4, Some(format!("{} chain steps exceed k times their length", bad.len()))))
            } else if !direct_ok {
                Ok(Outcome::with_status(out, 4, Some("direct Hausdorff distance exceeds the chained bound".into())))
            } else {
                Ok(Outcome::ok(out))
            }
        }
        Command::Iterate { start, max_iter, local, .. } => {
            let x0 = parse_point(start, &s.space)?;
            let log = if *local {
                local_iterate(&s.space, &s.map, &certificate(s)?, &[], &x0, *max_iter, s.tol)?
            } else {
                // The constant is only range-checked; without a gauge any value in [0, 1) will do.
                let k = match &s.gauge {
                    Some(_) => certificate(s)?.k,
                    None => 0.0,
                };
                nadler_iterate(&s.space, &s.map, &x0, k, *max_iter, s.tol)?
            };
            let out = log_csv(&log);
            if log.converged {
                Ok(Outcome::ok(out))
            } else {
                let msg = format!("no convergence after {} iterations, residual {}", log.iterations, log.final_residual());
                Ok(Outcome::with_status(out, 3, Some(msg)))
            }
        }
        Command::Chainability { from, to, .. } => {
            let points = cloud(s);
            let report = is_epsilon_chainable(&points, &s.space, s.epsilon)?;
            let (path, max_step) = match (from, to) {
                (Some(a), Some(b)) => {
                    let chain = epsilon_chain(&points, &s.space, s.epsilon, &parse_point(a, &s.space)?, &parse_point(b, &s.space)?)?;
                    (Some(chain.nodes.iter().map(point_value).collect()), Some(chain.max_step))
                }
                _ => (None, None),
            };
            let out = to_json(&ChainabilityReport {
                epsilon: s.epsilon,
                points: points.len(),
                chainable: report.chainable,
                components: report.components,
                path,
                max_step,
            });
            if report.chainable {
                Ok(Outcome::ok(out))
            } else {
                Ok(Outcome::with_status(out, 3, Some(format!("epsilon-graph has {} components", report.components))))
            }
        }
    }
}

/// Reads the scenario, runs the command and writes `--out` if given.
pub fn execute(command: &Command) -> Outcome {
    let result = (|| {
        let common = command.common();
        let text = std::fs::read_to_string(&common.scenario)?;
        let s = parse_scenario(&text)?;
        let outcome = run(command, &s)?;
        match &common.out {
            Some(path) => {
                std::fs::write(path, &outcome.stdout)?;
                Ok(Outcome { stdout: String::new(), ..outcome })
            }
            None => Ok(outcome),
        }
    })();
    result.unwrap_or_else(|e: CliError| Outcome::with_status(String::new(), e.exit_code(), Some(e.to_string())))
}
