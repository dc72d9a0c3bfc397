//! Scenario documents.
//!
//! ```json
//! {
//!   "space": {"kind": "euclidean", "dimension": 1},
//!   "gauge": {"pieces": [{"start": 0, "end": 1, "c0": 0, "c1": 0.5}],
//!             "tailStart": 1, "tailValue": 0.5},
//!   "map": {"kind": "affine", "selectors": [{"A": [[0.5]], "b": [0]}]},
//!   "epsilon": 2
//! }
//! ```
//!
//! Space kinds: `euclidean {dimension}`, `interval {lo, hi}`,
//! `circle {circumference}`, `finite {matrix}`. Map kinds:
//! `affine {selectors}`, `table {table}`. Optional keys `gauge`, `lambda`
//! (0.5), `seed` (42), `samples` (10000), `tol` (1e-9).

use mvfix_core::gauge::{Gauge, ValidGauge};
use mvfix_core::hausdorff::FiniteSet;
use mvfix_core::map::{AffineBranch, AffineSelector, MapError, MultiMap, TableMap};
use mvfix_core::metric::{Point, Space};
use serde::Deserialize;

use crate::CliError;

pub const DEFAULT_LAMBDA: f64 = 0.5;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: usize = 10_000;
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    space: SpaceDoc,
    #[serde(default)]
    gauge: Option<Gauge>,
    map: MapDoc,
    epsilon: f64,
    #[serde(default)]
    lambda: Option<f64>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    samples: Option<usize>,
    #[serde(default)]
    tol: Option<f64>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum SpaceDoc {
    Euclidean { dimension: usize },
    Interval { lo: f64, hi: f64 },
    Circle { circumference: f64 },
    Finite { matrix: Vec<Vec<f64>> },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum MapDoc {
    Affine { selectors: Vec<AffineBranch> },
    Table { table: Vec<Vec<usize>> },
}

#[derive(Clone, Debug, PartialEq)]
pub enum ScenarioMap {
    Affine(AffineSelector),
    Table(TableMap),
}

impl MultiMap for ScenarioMap {
    fn eval(&self, x: &Point) -> Result<FiniteSet, MapError> {
        match self {
            ScenarioMap::Affine(f) => f.eval(x),
            ScenarioMap::Table(f) => f.eval(x),
        }
    }

    fn dimension(&self) -> usize {
        match self {
            ScenarioMap::Affine(f) => f.dimension(),
            ScenarioMap::Table(f) => f.dimension(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub space: Space,
    pub gauge: Option<ValidGauge>,
    pub map: ScenarioMap,
    pub epsilon: f64,
    pub lambda: f64,
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

pub fn parse_scenario(text: &str) -> Result<Scenario, CliError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    let doc: ScenarioDoc = serde_path_to_error::deserialize(value).map_err(|e| CliError::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;

    let space = match doc.space {
        SpaceDoc::Euclidean { dimension } => Space::euclidean(dimension),
        SpaceDoc::Interval { lo, hi } => Space::interval(lo, hi),
        SpaceDoc::Circle { circumference } => Space::circle(circumference),
        SpaceDoc::Finite { matrix } => Space::finite(&matrix),
    }
    .map_err(|e| invalid(format!("space: {e}")))?;

    let map = match doc.map {
        MapDoc::Affine { .. } if matches!(space, Space::FiniteMatrix(_)) => {
            return Err(invalid("map: affine selectors need a continuous space"));
        }
        MapDoc::Affine { selectors } => {
            ScenarioMap::Affine(AffineSelector::new(selectors).map_err(|e| invalid(format!("map: {e}")))?)
        }
        MapDoc::Table { table } => {
            let Space::FiniteMatrix(m) = &space else {
                return Err(invalid("map: table maps need a finite space"));
            };
            if table.len() != m.len() {
                return Err(invalid(format!("map: table has {} rows for a {}-point space", table.len(), m.len())));
            }
            ScenarioMap::Table(TableMap::new(table).map_err(|e| invalid(format!("map: {e}")))?)
        }
    };
    if map.dimension() != space.point_dim() {
        return Err(invalid(format!(
            "dimension mismatch: map acts on dimension {}, space has dimension {}",
            map.dimension(),
            space.point_dim()
        )));
    }

    let gauge = doc
        .gauge
        .map(ValidGauge::new)
        .transpose()
        .map_err(|e| invalid(format!("gauge: {e}")))?;

    if !(doc.epsilon.is_finite() && doc.epsilon > 0.0) {
        return Err(invalid(format!("epsilon must be positive, got {}", doc.epsilon)));
    }
    let lambda = doc.lambda.unwrap_or(DEFAULT_LAMBDA);
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(invalid(format!("lambda must lie in (0, 1), got {lambda}")));
    }
    let tol = doc.tol.unwrap_or(DEFAULT_TOL);
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(invalid(format!("tol must be non-negative, got {tol}")));
    }
    let samples = doc.samples.unwrap_or(DEFAULT_SAMPLES);
    if samples == 0 {
        return Err(invalid("samples must be positive"));
    }

    Ok(Scenario {
        space,
        gauge,
        map,
        epsilon: doc.epsilon,
        lambda,
        seed: doc.seed.unwrap_or(DEFAULT_SEED),
        samples,
        tol,
    })
}
