//! Successive approximation for multivalued contractions and ε-chainability
//! of finite samples.
//!
//! Iterations pick the nearest point of `F(xₙ)` as `xₙ₊₁`; finite images make
//! that selection exact. Single-valued maps are the singleton-valued special
//! case.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::hausdorff::dist_to_set;
use crate::map::{MapError, MultiMap};
use crate::metric::{MetricError, Point, Space};
use crate::reduction::Certificate;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FixedPointError {
    #[error("point list is empty")]
    EmptySample,
    #[error("point {0} is not in the sample")]
    PointNotInSample(Point),
    #[error("{from} and {to} lie in different components of the epsilon-graph")]
    NotChainable { from: Point, to: Point },
    #[error("sample splits into {components} components at epsilon = {epsilon}")]
    SampleNotChainable { components: usize, epsilon: f64 },
    #[error("step {iteration} moved {step}, not below epsilon = {epsilon}")]
    StepEscapedLocality { iteration: usize, step: f64, epsilon: f64, log: Box<IterationLog> },
    #[error("contraction constant {0} outside [0, 1)")]
    InvalidContraction(f64),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// Orbit of a nearest-point iteration.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IterationLog {
    /// `x₀, …, x_iterations`.
    pub iterates: Vec<Point>,
    /// `d(xₙ, F(xₙ))` for every iterate.
    pub residuals: Vec<f64>,
    /// `d(xₙ, xₙ₊₁)`, one per step taken.
    pub step_distances: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

impl IterationLog {
    pub fn final_point(&self) -> &Point {
        self.iterates.last().expect("log holds at least x0")
    }

    pub fn final_residual(&self) -> f64 {
        *self.residuals.last().expect("log holds at least x0")
    }

    /// `residual(n+1) ≤ k·residual(n) + slack` along the whole orbit.
    pub fn residuals_contract(&self, k: f64, slack: f64) -> bool {
        self.residuals.windows(2).all(|w| w[1] <= k * w[0] + slack)
    }
}

fn iterate(
    space: &Space,
    map: &dyn MultiMap,
    x0: &Point,
    max_iter: usize,
    tol: f64,
    locality: Option<f64>,
) -> Result<IterationLog, FixedPointError> {
    space.check(x0)?;
    let mut log = IterationLog {
        iterates: vec![x0.clone()],
        residuals: Vec::new(),
        step_distances: Vec::new(),
        converged: false,
        iterations: 0,
    };
    let mut x = x0.clone();
    loop {
        let image = map.eval(&x)?;
        let (next, residual) = image.nearest(space, &x)?;
        log.residuals.push(residual);
        if residual <= tol {
            log.converged = true;
            return Ok(log);
        }
        if log.iterations == max_iter {
            return Ok(log);
        }
        let next = next.clone();
        if let Some(epsilon) = locality {
            if residual >= epsilon {
                let iteration = log.iterations;
                return Err(FixedPointError::StepEscapedLocality { iteration, step: residual, epsilon, log: Box::new(log) });
            }
        }
        log.step_distances.push(residual);
        log.iterates.push(next.clone());
        log.iterations += 1;
        x = next;
    }
}

/// Nearest-point iteration `xₙ₊₁ ∈ F(xₙ)` for a map assumed to be a global
/// `k`-contraction. Stops once `d(xₙ, F(xₙ)) ≤ tol`; after `max_iter` steps
/// the log is returned with `converged = false`.
pub fn nadler_iterate(
    space: &Space,
    map: &dyn MultiMap,
    x0: &Point,
    k: f64,
    max_iter: usize,
    tol: f64,
) -> Result<IterationLog, FixedPointError> {
    if !(0.0..1.0).contains(&k) {
        return Err(FixedPointError::InvalidContraction(k));
    }
    iterate(space, map, x0, max_iter, tol, None)
}

/// Nearest-point iteration under an `(ε, k)` local certificate. Every step
/// has to stay shorter than `ε`, since the contraction is only certified
/// there. A nonempty `sample` must be ε-chainable.
pub fn local_iterate(
    space: &Space,
    map: &dyn MultiMap,
    cert: &Certificate,
    sample: &[Point],
    x0: &Point,
    max_iter: usize,
    tol: f64,
) -> Result<IterationLog, FixedPointError> {
    if !sample.is_empty() {
        let report = is_epsilon_chainable(sample, space, cert.epsilon)?;
        if !report.chainable {
            return Err(FixedPointError::SampleNotChainable { components: report.components, epsilon: cert.epsilon });
        }
    }
    iterate(space, map, x0, max_iter, tol, Some(cert.epsilon))
}

/// `(d(x, F(x)) ≤ tol, d(x, F(x)))`.
pub fn is_fixed_point(space: &Space, map: &dyn MultiMap, x: &Point, tol: f64) -> Result<(bool, f64), FixedPointError> {
    let residual = dist_to_set(space, x, &map.eval(x)?)?;
    Ok((residual <= tol, residual))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Chainability {
    pub chainable: bool,
    pub components: usize,
}

/// Adjacency lists of the graph joining points closer than `epsilon`,
/// neighbours listed in canonical point order.
fn epsilon_graph(points: &[Point], space: &Space, epsilon: f64) -> Result<Vec<Vec<usize>>, FixedPointError> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| points[i].canonical_cmp(&points[j]).then(i.cmp(&j)));
    let mut adjacency = vec![Vec::new(); points.len()];
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            if space.distance(&points[i], &points[j])? < epsilon {
                adjacency[i].push(j);
                adjacency[j].push(i);
            }
        }
    }
    let rank: Vec<usize> = {
        let mut r = vec![0; points.len()];
        for (pos, &i) in order.iter().enumerate() {
            r[i] = pos;
        }
        r
    };
    for list in &mut adjacency {
        list.sort_by_key(|&j| rank[j]);
    }
    Ok(adjacency)
}

fn bfs(adjacency: &[Vec<usize>], source: usize) -> Vec<Option<usize>> {
    let mut parent = vec![None; adjacency.len()];
    parent[source] = Some(source);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for &v in &adjacency[u] {
            if parent[v].is_none() {
                parent[v] = Some(u);
                queue.push_back(v);
            }
        }
    }
    parent
}

/// Connectivity of the sample under steps shorter than `epsilon`. A
/// connected verdict witnesses chainability of the sample, not of the
/// whole space.
pub fn is_epsilon_chainable(points: &[Point], space: &Space, epsilon: f64) -> Result<Chainability, FixedPointError> {
    if points.is_empty() {
        return Err(FixedPointError::EmptySample);
    }
    let adjacency = epsilon_graph(points, space, epsilon)?;
    let mut seen = vec![false; points.len()];
    let mut components = 0;
    for start in 0..points.len() {
        if seen[start] {
            continue;
        }
        components += 1;
        for (v, p) in bfs(&adjacency, start).iter().enumerate() {
            if p.is_some() {
                seen[v] = true;
            }
        }
    }
    Ok(Chainability { chainable: components == 1, components })
}

/// `y⁰ = a, …, y^N = b` with consecutive distances below `ε`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ChainPath {
    pub nodes: Vec<Point>,
    pub max_step: f64,
}

/// Minimum-hop ε-chain from `a` to `b` through the sample, found by
/// breadth-first search with neighbours visited in canonical order.
pub fn epsilon_chain(
    points: &[Point],
    space: &Space,
    epsilon: f64,
    a: &Point,
    b: &Point,
) -> Result<ChainPath, FixedPointError> {
    let locate = |p: &Point| points.iter().position(|q| q == p).ok_or_else(|| FixedPointError::PointNotInSample(p.clone()));
    let (src, dst) = (locate(a)?, locate(b)?);
    if a == b {
        return Ok(ChainPath { nodes: vec![a.clone()], max_step: 0.0 });
    }
    let adjacency = epsilon_graph(points, space, epsilon)?;
    let parent = bfs(&adjacency, src);
    if parent[dst].is_none() {
        return Err(FixedPointError::NotChainable { from: a.clone(), to: b.clone() });
    }
    let mut path = vec![dst];
    let mut v = dst;
    while v != src {
        v = parent[v].expect("visited vertices have parents");
        path.push(v);
    }
    path.reverse();
    let nodes: Vec<Point> = path.iter().map(|&i| points[i].clone()).collect();
    let mut max_step = 0.0f64;
    for w in nodes.windows(2) {
        max_step = max_step.max(space.distance(&w[0], &w[1])?);
    }
    Ok(ChainPath { nodes, max_step })
}
