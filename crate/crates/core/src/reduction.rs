//! From a gauge condition to a uniform local contraction.
//!
//! Given a valid gauge `α` and a radius `ε`, [`derive_constant`] picks a
//! threshold `q` and `k = sup{α(t) : 0 ≤ t ≤ q} < 1`:
//!
//! - if the running supremum of `α` never reaches 1, `q = ε`;
//! - otherwise it first reaches 1 at `p₀ > 0`, and `q = min(ε, λ·p₀)` for a
//!   policy factor `λ ∈ (0, 1)`.
//!
//! Any map satisfying `H(F(x), F(y)) ≤ α(d(x, y))·d(x, y)` for `d(x, y) < ε`
//! then satisfies `H(F(x), F(y)) ≤ k·d(x, y)` for pairs closer than
//! `min(ε, q)`. On a metrically convex space this extends to every pair with
//! `d(x, y) < ε` by cutting the segment from `x` to `y` into steps shorter
//! than `min(ε, q)` and summing the per-step Hausdorff bounds; [`chain_bound`]
//! carries that chain out numerically and [`verify_certificate`] spot-checks
//! the conclusion on sampled pairs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::gauge::{GaugeError, ValidGauge};
use crate::hausdorff::hausdorff;
use crate::map::{MapError, MultiMap};
use crate::metric::{MetricError, Point, Segment, Space};

/// Slack allowed on every `H ≤ k·d` comparison.
pub const STEP_TOLERANCE: f64 = 1e-9;
/// Chain steps are cut shorter than this fraction of `min(ε, q)`.
pub const STEP_MARGIN: f64 = 0.9;
pub const DEFAULT_LAMBDA: f64 = 0.5;

/// Candidate pairs drawn per requested sample before giving up.
const DRAWS_PER_SAMPLE: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReductionError {
    #[error("invalid gauge: {0}")]
    InvalidGauge(#[from] GaugeError),
    #[error("epsilon must be a positive finite number, got {0}")]
    DegenerateEpsilon(f64),
    #[error("lambda must lie in (0, 1), got {0}")]
    InvalidLambda(f64),
    #[error("contraction constant {k} at threshold {q} is not below 1")]
    NotStrict { q: f64, k: f64 },
    #[error("subdivision step must be positive, got {0}")]
    NonPositiveStep(f64),
    #[error("segment [{a}, {b}] has no length")]
    DegenerateSegment { a: f64, b: f64 },
    #[error("pair at distance {distance} is not closer than epsilon = {epsilon}")]
    PairTooFar { distance: f64, epsilon: f64 },
    #[error("sampler produced only {got} of {wanted} pairs with 0 < d < epsilon")]
    SamplerExhausted { wanted: usize, got: usize },
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// Which branch of the construction produced `k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CaseTag {
    /// The running supremum of `α` stays below 1.
    Case1,
    /// The running supremum first reaches 1 at `p0`.
    Case2 { p0: f64 },
    /// Constants supplied by hand rather than derived from a gauge.
    Asserted,
}

impl CaseTag {
    pub fn name(&self) -> &'static str {
        match self {
            CaseTag::Case1 => "Case1",
            CaseTag::Case2 { .. } => "Case2",
            CaseTag::Asserted => "Asserted",
        }
    }

    pub fn p0(&self) -> Option<f64> {
        match self {
            CaseTag::Case2 { p0 } => Some(*p0),
            _ => None,
        }
    }
}

/// Outcome of sampling `H(F(x), F(y)) / d(x, y)` over pairs with
/// `0 < d(x, y) < ε`.
#[derive(Clone, Debug, PartialEq)]
pub struct Evidence {
    pub samples: usize,
    pub max_ratio: f64,
    /// Pairs whose ratio exceeds `k + tol`.
    pub violations: usize,
    /// Pair attaining `max_ratio` (first one on ties).
    pub worst_pair: Option<(Point, Point)>,
}

/// An `(ε, k)` uniform local contraction claim.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub epsilon: f64,
    pub q: f64,
    pub k: f64,
    pub case: CaseTag,
    pub lambda: f64,
    pub evidence: Option<Evidence>,
}

impl Certificate {
    /// A hand-made certificate with `q = ε`.
    pub fn asserted(epsilon: f64, k: f64) -> Result<Self, ReductionError> {
        check_epsilon(epsilon)?;
        if !(0.0..1.0).contains(&k) {
            return Err(ReductionError::NotStrict { q: epsilon, k });
        }
        Ok(Certificate { epsilon, q: epsilon, k, case: CaseTag::Asserted, lambda: DEFAULT_LAMBDA, evidence: None })
    }

    /// Chain steps are kept strictly shorter than this.
    pub fn step_length(&self) -> f64 {
        STEP_MARGIN * self.epsilon.min(self.q)
    }

    pub fn with_evidence(mut self, evidence: Evidence) -> Self {
        self.evidence = Some(evidence);
        self
    }
}

/// Flat record: `epsilon, q, k, case, p0, lambda, maxRatio, violations,
/// worstPair`. Evidence fields are null when absent.
impl Serialize for Certificate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Certificate", 9)?;
        s.serialize_field("epsilon", &self.epsilon)?;
        s.serialize_field("q", &self.q)?;
        s.serialize_field("k", &self.k)?;
        s.serialize_field("case", self.case.name())?;
        s.serialize_field("p0", &self.case.p0())?;
        s.serialize_field("lambda", &self.lambda)?;
        let ev = self.evidence.as_ref();
        s.serialize_field("maxRatio", &ev.map(|e| e.max_ratio))?;
        s.serialize_field("violations", &ev.map(|e| e.violations))?;
        s.serialize_field("worstPair", &ev.and_then(|e| e.worst_pair.clone()))?;
        s.end()
    }
}

fn check_epsilon(epsilon: f64) -> Result<(), ReductionError> {
    if epsilon.is_finite() && epsilon > 0.0 {
        Ok(())
    } else {
        Err(ReductionError::DegenerateEpsilon(epsilon))
    }
}

/// Uniform local contraction constant for a gauge at radius `epsilon`.
pub fn derive_constant(gauge: &ValidGauge, epsilon: f64, lambda: f64) -> Result<Certificate, ReductionError> {
    check_epsilon(epsilon)?;
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(ReductionError::InvalidLambda(lambda));
    }
    let (q, case) = match gauge.profile().reach_one {
        None => (epsilon, CaseTag::Case1),
        Some(p0) => (epsilon.min(lambda * p0), CaseTag::Case2 { p0 }),
    };
    let k = gauge.sup_alpha(q)?;
    if k >= 1.0 {
        // Only reachable when λ·p₀ rounds up to p₀.
        return Err(ReductionError::NotStrict { q, k });
    }
    Ok(Certificate { epsilon, q, k, case, lambda, evidence: None })
}

/// Equally spaced breakpoints `a = t₀ < ⋯ < tₙ = b` with every step strictly
/// shorter than `r`. `n = ⌊(b − a)/r⌋ + 1`, bumped if rounding pushes a step
/// up to `r`; `n = 1` exactly when `b − a < r`.
pub fn subdivide(a: f64, b: f64, r: f64) -> Result<Vec<f64>, ReductionError> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(ReductionError::NonPositiveStep(r));
    }
    let len = b - a;
    if !(len > 0.0 && len.is_finite()) {
        return Err(ReductionError::DegenerateSegment { a, b });
    }
    if len < r {
        return Ok(vec![a, b]);
    }
    let mut n = (len / r).floor() as usize + 1;
    loop {
        let ts: Vec<f64> = (0..=n)
            .map(|i| if i == n { b } else { a + len * (i as f64 / n as f64) })
            .collect();
        if ts.windows(2).all(|w| w[1] - w[0] < r) {
            return Ok(ts);
        }
        n += 1;
    }
}

pub fn subdivide_segment(segment: &Segment, r: f64) -> Result<Vec<f64>, ReductionError> {
    subdivide(segment.a(), segment.b(), r)
}

/// Numerical record of one segment chain from `x1` to `x2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ChainTrace {
    pub breakpoints: Vec<f64>,
    pub points: Vec<Point>,
    pub step_distances: Vec<f64>,
    pub step_hausdorff: Vec<f64>,
    /// `step_hausdorff[i] ≤ k·step_distances[i] + STEP_TOLERANCE`.
    pub step_ok: Vec<bool>,
    pub k: f64,
    /// `d(x1, x2)`.
    pub distance: f64,
    /// `k · Σ step_distances`.
    pub total_bound: f64,
    pub summed_hausdorff: f64,
    /// `H(F(x1), F(x2))`.
    pub direct_hausdorff: f64,
    pub direct_ok: bool,
}

impl ChainTrace {
    pub fn violations(&self) -> Vec<usize> {
        self.step_ok.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i).collect()
    }

    pub fn all_steps_ok(&self) -> bool {
        self.step_ok.iter().all(|&ok| ok)
    }
}

fn build_chain(
    space: &Space,
    map: &dyn MultiMap,
    cert: &Certificate,
    x1: &Point,
    x2: &Point,
) -> Result<ChainTrace, ReductionError> {
    let segment = space.segment(x1, x2)?;
    let breakpoints = subdivide_segment(&segment, cert.step_length())?;
    let points: Vec<Point> = breakpoints.iter().map(|&t| segment.at(t)).collect();
    let images = points.iter().map(|p| map.eval(p)).collect::<Result<Vec<_>, _>>()?;
    let mut step_distances = Vec::with_capacity(points.len() - 1);
    let mut step_hausdorff = Vec::with_capacity(points.len() - 1);
    let mut step_ok = Vec::with_capacity(points.len() - 1);
    for i in 0..points.len() - 1 {
        let d = space.distance(&points[i], &points[i + 1])?;
        let h = hausdorff(space, &images[i], &images[i + 1])?;
        step_ok.push(h <= cert.k * d + STEP_TOLERANCE);
        step_distances.push(d);
        step_hausdorff.push(h);
    }
    let distance = space.distance(x1, x2)?;
    let total_bound = cert.k * step_distances.iter().sum::<f64>();
    let summed_hausdorff = step_hausdorff.iter().sum();
    let direct_hausdorff = hausdorff(space, &images[0], &images[images.len() - 1])?;
    Ok(ChainTrace {
        breakpoints,
        points,
        step_distances,
        step_hausdorff,
        step_ok,
        k: cert.k,
        distance,
        total_bound,
        summed_hausdorff,
        direct_hausdorff,
        direct_ok: direct_hausdorff <= cert.k * distance + STEP_TOLERANCE,
    })
}

/// Chains the local bound along the segment from `x1` to `x2`, which must be
/// closer than `ε`.
pub fn chain_bound(
    space: &Space,
    map: &dyn MultiMap,
    cert: &Certificate,
    x1: &Point,
    x2: &Point,
) -> Result<ChainTrace, ReductionError> {
    if !space.has_segments() {
        return Err(MetricError::NotMetricallyConvex.into());
    }
    let distance = space.distance(x1, x2)?;
    if x1 == x2 {
        return Err(MetricError::DegeneratePair.into());
    }
    if distance >= cert.epsilon {
        return Err(ReductionError::PairTooFar { distance, epsilon: cert.epsilon });
    }
    build_chain(space, map, cert, x1, x2)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GlobalReport {
    pub trace: ChainTrace,
    /// `k·d(x1, x2)`.
    pub bound: f64,
    /// `H(F(x1), F(x2)) ≤ k·d(x1, x2) + tol`.
    pub holds: bool,
}

/// The same chaining with no restriction on `d(x1, x2)`.
pub fn global_from_local(
    space: &Space,
    map: &dyn MultiMap,
    cert: &Certificate,
    x1: &Point,
    x2: &Point,
    tol: f64,
) -> Result<GlobalReport, ReductionError> {
    let trace = build_chain(space, map, cert, x1, x2)?;
    let bound = cert.k * trace.distance;
    let holds = trace.direct_hausdorff <= bound + tol;
    Ok(GlobalReport { trace, bound, holds })
}

/// Spot-checks `H(F(x), F(y)) ≤ k·d(x, y)` on `n` sampled pairs with
/// `0 < d(x, y) < ε`.
///
/// Pairs outside that range are skipped. Ratios are evaluated in parallel and
/// aggregated by sample index, so the result depends only on the sampler.
pub fn verify_certificate<I>(
    space: &Space,
    map: &dyn MultiMap,
    cert: &Certificate,
    sampler: I,
    n: usize,
    tol: f64,
) -> Result<Evidence, ReductionError>
where
    I: IntoIterator<Item = (Point, Point)>,
{
    let max_draws = n.saturating_mul(DRAWS_PER_SAMPLE).max(1024);
    let mut pairs = Vec::with_capacity(n);
    if n > 0 {
        for (x, y) in sampler.into_iter().take(max_draws) {
            let d = space.distance(&x, &y)?;
            if d > 0.0 && d < cert.epsilon {
                pairs.push((x, y, d));
                if pairs.len() == n {
                    break;
                }
            }
        }
    }
    if pairs.len() < n {
        return Err(ReductionError::SamplerExhausted { wanted: n, got: pairs.len() });
    }
    let ratios = pairs
        .par_iter()
        .map(|(x, y, d)| -> Result<f64, ReductionError> {
            let h = hausdorff(space, &map.eval(x)?, &map.eval(y)?)?;
            Ok(h / d)
        })
        .collect::<Result<Vec<f64>, _>>()?;
    let mut evidence = Evidence { samples: n, max_ratio: 0.0, violations: 0, worst_pair: None };
    for (i, &ratio) in ratios.iter().enumerate() {
        if ratio > cert.k + tol {
            evidence.violations += 1;
        }
        if evidence.worst_pair.is_none() || ratio > evidence.max_ratio {
            evidence.max_ratio = ratio;
            evidence.worst_pair = Some((pairs[i].0.clone(), pairs[i].1.clone()));
        }
    }
    Ok(evidence)
}

/// Seeded source of nearby pairs: a base point drawn uniformly from the space
/// (from the cube `[-half_width, half_width]^d` for Euclidean spaces) and a
/// partner at distance below `radius` in a uniformly random direction.
#[derive(Clone, Debug)]
pub struct LocalPairSampler {
    space: Space,
    radius: f64,
    half_width: f64,
    rng: ChaCha8Rng,
}

impl LocalPairSampler {
    pub const DEFAULT_HALF_WIDTH: f64 = 10.0;

    pub fn new(space: &Space, radius: f64, seed: u64) -> Self {
        LocalPairSampler {
            space: space.clone(),
            radius,
            half_width: Self::DEFAULT_HALF_WIDTH,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn with_half_width(mut self, half_width: f64) -> Self {
        self.half_width = half_width;
        self
    }

    /// A single point drawn from the sampling region.
    pub fn draw_point(&mut self) -> Point {
        let rng = &mut self.rng;
        match &self.space {
            Space::Euclidean { dimension } => {
                Point::new((0..*dimension).map(|_| rng.random_range(-self.half_width..=self.half_width)).collect())
            }
            Space::Interval { lo, hi } => Point::scalar(rng.random_range(*lo..=*hi)),
            Space::Circle { circumference } => Point::scalar(rng.random_range(0.0..*circumference)),
            Space::FiniteMatrix(m) => Point::index(rng.random_range(0..m.len())),
        }
    }
}

impl Iterator for LocalPairSampler {
    type Item = (Point, Point);

    fn next(&mut self) -> Option<(Point, Point)> {
        let x = self.draw_point();
        let rng = &mut self.rng;
        let step = self.radius * rng.random::<f64>();
        let y = match &self.space {
            Space::Euclidean { dimension } => {
                let dir: Vec<f64> = (0..*dimension).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
                let norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm == 0.0 {
                    x.clone()
                } else {
                    Point::new(x.coords().iter().zip(&dir).map(|(c, v)| c + step * v / norm).collect())
                }
            }
            Space::Interval { lo, hi } => {
                let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                Point::scalar((x.coords()[0] + sign * step).clamp(*lo, *hi))
            }
            Space::Circle { circumference } => {
                let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                let mut s = (x.coords()[0] + sign * step.min(circumference / 2.0)).rem_euclid(*circumference);
                if s >= *circumference {
                    s = 0.0;
                }
                Point::scalar(s)
            }
            Space::FiniteMatrix(m) => Point::index(rng.random_range(0..m.len())),
        };
        Some((x, y))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::Gauge;
    use crate::map::AffineSelector;

    fn half_slope() -> ValidGauge {
        ValidGauge::new(Gauge::affine_then_constant(0.0, 0.5, 1.0, 0.5)).unwrap()
    }

    fn unit_slope() -> ValidGauge {
        ValidGauge::new(Gauge::affine_then_constant(0.0, 1.0, 1.0, 0.5)).unwrap()
    }

    #[test]
    fn case_one_constant() {
        let cert = derive_constant(&half_slope(), 2.0, 0.5).unwrap();
        assert_eq!(cert.case, CaseTag::Case1);
        assert_eq!((cert.q, cert.k), (2.0, 0.5));
    }

    #[test]
    fn case_two_constant() {
        let cert = derive_constant(&unit_slope(), 2.0, 0.5).unwrap();
        assert_eq!(cert.case, CaseTag::Case2 { p0: 1.0 });
        assert_eq!((cert.q, cert.k), (0.5, 0.5));
        let small = derive_constant(&unit_slope(), 0.25, 0.5).unwrap();
        assert_eq!((small.q, small.k), (0.25, 0.25));
    }

    #[test]
    fn zero_gauge_gives_zero() {
        let g = ValidGauge::new(Gauge::constant(0.0)).unwrap();
        for eps in [1e-3, 1.0, 1e6] {
            assert_eq!(derive_constant(&g, eps, 0.5).unwrap().k, 0.0);
        }
    }

    #[test]
    fn derive_rejects_bad_parameters() {
        assert_eq!(derive_constant(&half_slope(), 0.0, 0.5), Err(ReductionError::DegenerateEpsilon(0.0)));
        assert_eq!(derive_constant(&half_slope(), -1.0, 0.5), Err(ReductionError::DegenerateEpsilon(-1.0)));
        assert_eq!(derive_constant(&half_slope(), 1.0, 1.0), Err(ReductionError::InvalidLambda(1.0)));
        assert_eq!(derive_constant(&half_slope(), 1.0, 0.0), Err(ReductionError::InvalidLambda(0.0)));
    }

    #[test]
    fn lambda_rounding_up_to_one_is_caught() {
        let lambda = 1.0 - f64::EPSILON / 2.0;
        let g = ValidGauge::new(Gauge::affine_then_constant(0.0, 1.0 / 3.0, 3.0, 0.5)).unwrap();
        match derive_constant(&g, 10.0, lambda) {
            Ok(cert) => assert!(cert.k < 1.0),
            Err(e) => assert!(matches!(e, ReductionError::NotStrict { .. })),
        }
    }

    #[test]
    fn subdivision_examples() {
        let ts = subdivide(0.0, 1.0, 0.3).unwrap();
        assert_eq!(ts.len(), 5);
        assert_eq!(ts, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(subdivide(0.0, 0.2, 0.3).unwrap(), vec![0.0, 0.2]);
        let ts = subdivide(0.0, 0.9, 0.3).unwrap();
        assert_eq!(ts.len(), 5);
        for w in ts.windows(2) {
            assert!((w[1] - w[0] - 0.225).abs() < 1e-15);
        }
        assert_eq!(subdivide(0.0, 1.0, 0.0), Err(ReductionError::NonPositiveStep(0.0)));
        assert!(matches!(subdivide(1.0, 1.0, 0.5), Err(ReductionError::DegenerateSegment { .. })));
    }

    #[test]
    fn exact_multiple_gets_an_extra_step() {
        let ts = subdivide(0.0, 1.0, 0.5).unwrap();
        assert_eq!(ts.len(), 4);
        let ts = subdivide(0.0, 0.5, 0.5).unwrap();
        assert_eq!(ts.len(), 3);
    }

    #[test]
    fn halving_chain_on_the_line() {
        let space = Space::euclidean(1).unwrap();
        let f = AffineSelector::scalar(&[(0.5, 0.0)]).unwrap();
        let cert = Certificate { epsilon: 2.0, q: 2.0, k: 0.5, case: CaseTag::Case1, lambda: 0.5, evidence: None };
        let trace = chain_bound(&space, &f, &cert, &0.0.into(), &1.0.into()).unwrap();
        assert!(trace.all_steps_ok());
        for (d, h) in trace.step_distances.iter().zip(&trace.step_hausdorff) {
            assert!((h - 0.5 * d).abs() < 1e-15);
        }
        assert!((trace.total_bound - 0.5).abs() < 1e-12);
        assert_eq!(trace.direct_hausdorff, 0.5);
        assert!(trace.direct_ok);
    }

    #[test]
    fn constant_map_chain_is_flat() {
        let space = Space::euclidean(1).unwrap();
        let f = AffineSelector::scalar(&[(0.0, 3.0), (0.0, -1.0)]).unwrap();
        let cert = Certificate::asserted(2.0, 0.1).unwrap();
        let trace = chain_bound(&space, &f, &cert, &0.0.into(), &1.9.into()).unwrap();
        assert!(trace.step_hausdorff.iter().all(|&h| h == 0.0));
        assert!(trace.violations().is_empty());
    }

    #[test]
    fn planar_selector_chain() {
        let space = Space::euclidean(2).unwrap();
        let f = AffineSelector::new(vec![
            crate::map::AffineBranch::new(vec![vec![0.5, 0.0], vec![0.0, 0.5]], vec![0.0, 0.0]),
            crate::map::AffineBranch::new(vec![vec![1.0 / 3.0, 0.0], vec![0.0, 1.0 / 3.0]], vec![0.0, 0.0]),
        ])
        .unwrap();
        let g = ValidGauge::new(Gauge::constant(0.5)).unwrap();
        let cert = derive_constant(&g, 2.0, 0.5).unwrap();
        let trace = chain_bound(&space, &f, &cert, &Point::new(vec![0.0, 0.0]), &Point::new(vec![1.0, 0.0])).unwrap();
        assert!(trace.violations().is_empty());
        assert!(trace.direct_hausdorff <= trace.summed_hausdorff + 1e-9);
    }

    #[test]
    fn chain_errors() {
        let space = Space::euclidean(1).unwrap();
        let f = AffineSelector::scalar(&[(0.5, 0.0)]).unwrap();
        let cert = Certificate::asserted(1.0, 0.5).unwrap();
        assert!(matches!(
            chain_bound(&space, &f, &cert, &0.0.into(), &1.0.into()),
            Err(ReductionError::PairTooFar { .. })
        ));
        assert_eq!(
            chain_bound(&space, &f, &cert, &0.5.into(), &0.5.into()),
            Err(ReductionError::Metric(MetricError::DegeneratePair))
        );
        let finite = Space::finite(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let table = crate::map::TableMap::new(vec![vec![0], vec![0]]).unwrap();
        assert_eq!(
            chain_bound(&finite, &table, &cert, &Point::index(0), &Point::index(1)),
            Err(ReductionError::Metric(MetricError::NotMetricallyConvex))
        );
    }

    #[test]
    fn verify_halving_map() {
        let space = Space::euclidean(1).unwrap();
        let f = AffineSelector::scalar(&[(0.5, 0.0)]).unwrap();
        let cert = Certificate::asserted(1.0, 0.5).unwrap();
        let ev = verify_certificate(&space, &f, &cert, LocalPairSampler::new(&space, 1.0, 7), 10_000, 1e-9).unwrap();
        assert_eq!(ev.violations, 0);
        assert!((ev.max_ratio - 0.5).abs() < 1e-12);
    }

    #[test]
    fn verify_constant_map() {
        let space = Space::euclidean(1).unwrap();
        let f = AffineSelector::scalar(&[(0.0, 4.0)]).unwrap();
        let cert = Certificate::asserted(1.0, 0.5).unwrap();
        let ev = verify_certificate(&space, &f, &cert, LocalPairSampler::new(&space, 1.0, 7), 500, 1e-9).unwrap();
        assert_eq!((ev.max_ratio, ev.violations), (0.0, 0));
    }

    #[test]
    fn verify_flags_expanding_map() {
        let space = Space::euclidean(1).unwrap();
        let f = AffineSelector::scalar(&[(2.0, 0.0)]).unwrap();
        let cert = Certificate::asserted(1.0, 0.5).unwrap();
        let ev = verify_certificate(&space, &f, &cert, LocalPairSampler::new(&space, 1.0, 7), 1000, 1e-9).unwrap();
        assert_eq!(ev.violations, 1000);
        assert!(ev.worst_pair.is_some());
        assert!((ev.max_ratio - 2.0).abs() < 1e-9);
    }

    #[test]
    fn verify_reports_exhaustion() {
        let space = Space::euclidean(1).unwrap();
        let f = AffineSelector::scalar(&[(0.5, 0.0)]).unwrap();
        let cert = Certificate::asserted(1.0, 0.5).unwrap();
        let far = std::iter::repeat((Point::scalar(0.0), Point::scalar(5.0)));
        assert_eq!(
            verify_certificate(&space, &f, &cert, far, 10, 1e-9),
            Err(ReductionError::SamplerExhausted { wanted: 10, got: 0 })
        );
    }

    #[test]
    fn verify_is_reproducible() {
        let space = Space::euclidean(2).unwrap();
        let f = AffineSelector::new(vec![crate::map::AffineBranch::new(vec![vec![0.2, 0.1], vec![-0.1, 0.3]], vec![1.0, 0.0])]).unwrap();
        let cert = Certificate::asserted(0.7, 0.5).unwrap();
        let a = verify_certificate(&space, &f, &cert, LocalPairSampler::new(&space, 0.7, 99), 2000, 1e-9).unwrap();
        let b = verify_certificate(&space, &f, &cert, LocalPairSampler::new(&space, 0.7, 99), 2000, 1e-9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn global_bound_far_apart() {
        let space = Space::euclidean(1).unwrap();
        let cert = Certificate::asserted(0.5, 0.5).unwrap();
        let half = AffineSelector::scalar(&[(0.5, 0.0)]).unwrap();
        let report = global_from_local(&space, &half, &cert, &0.0.into(), &100.0.into(), 1e-9).unwrap();
        assert!(report.holds);
        assert!(report.trace.all_steps_ok());
        let double = AffineSelector::scalar(&[(2.0, 0.0)]).unwrap();
        let report = global_from_local(&space, &double, &cert, &0.0.into(), &100.0.into(), 1e-9).unwrap();
        assert!(!report.holds);
    }

    #[test]
    fn samplers_stay_in_domain() {
        for space in [Space::interval(0.0, 1.0).unwrap(), Space::circle(2.0).unwrap(), Space::euclidean(3).unwrap()] {
            for (x, y) in LocalPairSampler::new(&space, 0.5, 1).take(500) {
                let d = space.distance(&x, &y).unwrap();
                assert!(d < 0.5 + 1e-12, "{space:?}: {d}");
            }
        }
    }
}
