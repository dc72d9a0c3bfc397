//! Metric spaces, distance oracles and metric segments.
//!
//! A [`Space`] is one of a handful of concrete metric spaces. All of them
//! answer distance queries; the metrically convex ones (Euclidean, interval,
//! circle) also hand out [`Segment`]s, isometric images of a real interval
//! joining two points. Finite spaces given by a distance table have no
//! segments.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Points closer than this in every coordinate count as the same point when
/// checking the identity axiom.
pub const COINCIDENCE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("parameter {value} outside the domain [{lo}, {hi}]")]
    OutOfDomain { value: f64, lo: f64, hi: f64 },
    #[error("index {index} out of range for a space with {size} points")]
    IndexOutOfRange { index: f64, size: usize },
    #[error("point has a non-finite coordinate")]
    NonFinite,
    #[error("space is not metrically convex (no segment oracle)")]
    NotMetricallyConvex,
    #[error("segment endpoints coincide")]
    DegeneratePair,
    #[error("invalid space: {0}")]
    InvalidSpace(String),
}

/// A point of a [`Space`].
///
/// Intrinsically one-dimensional spaces (interval, circle, finite index
/// spaces) use a single coordinate. Negative zero is normalized to zero so
/// that exact equality and canonical ordering agree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point(coords.into_iter().map(|c| if c == 0.0 { 0.0 } else { c }).collect())
    }

    pub fn scalar(value: f64) -> Self {
        Point::new(vec![value])
    }

    pub fn index(index: usize) -> Self {
        Point(vec![index as f64])
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// Lexicographic order on coordinates; shorter points sort first on ties.
    pub fn canonical_cmp(&self, other: &Point) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.total_cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl From<Vec<f64>> for Point {
    fn from(coords: Vec<f64>) -> Self {
        Point::new(coords)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

impl From<f64> for Point {
    fn from(value: f64) -> Self {
        Point::scalar(value)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Square table of pairwise distances between the points `0..n`.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    size: usize,
    entries: Vec<f64>,
}

impl DistanceMatrix {
    /// Builds the table after checking only its shape: square, finite and
    /// non-negative. Metric axioms are checked by [`Space::finite`].
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, MetricError> {
        let size = rows.len();
        if size == 0 {
            return Err(MetricError::InvalidSpace("distance matrix is empty".into()));
        }
        let mut entries = Vec::with_capacity(size * size);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(MetricError::InvalidSpace(format!(
                    "distance matrix row {i} has {} entries, expected {size}",
                    row.len()
                )));
            }
            for (j, &d) in row.iter().enumerate() {
                if !d.is_finite() || d < 0.0 {
                    return Err(MetricError::InvalidSpace(format!(
                        "distance matrix entry ({i}, {j}) = {d} is not a finite non-negative number"
                    )));
                }
            }
            entries.extend_from_slice(row);
        }
        Ok(DistanceMatrix { size, entries })
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.size + j]
    }
}

/// The metric spaces shipped with the crate.
#[derive(Clone, Debug, PartialEq)]
pub enum Space {
    /// `R^dimension` with the Euclidean norm.
    Euclidean { dimension: usize },
    /// The closed interval `[lo, hi]` with `|s - t|`.
    Interval { lo: f64, hi: f64 },
    /// A circle of the given circumference, points parameterized by arc
    /// length in `[0, circumference)`, with the arc-length metric.
    Circle { circumference: f64 },
    /// Points `0..n` with distances read from a table.
    FiniteMatrix(DistanceMatrix),
}

impl Space {
    pub fn euclidean(dimension: usize) -> Result<Self, MetricError> {
        if dimension == 0 {
            return Err(MetricError::InvalidSpace("Euclidean dimension must be positive".into()));
        }
        Ok(Space::Euclidean { dimension })
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self, MetricError> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(MetricError::InvalidSpace(format!("interval [{lo}, {hi}] must satisfy lo < hi")));
        }
        Ok(Space::Interval { lo, hi })
    }

    pub fn circle(circumference: f64) -> Result<Self, MetricError> {
        if !(circumference.is_finite() && circumference > 0.0) {
            return Err(MetricError::InvalidSpace(format!(
                "circumference {circumference} must be positive"
            )));
        }
        Ok(Space::Circle { circumference })
    }

    /// Finite metric space from a distance table. Rejects tables that are not
    /// symmetric, have a nonzero diagonal, put distinct points at distance
    /// zero, or break the triangle inequality.
    pub fn finite(rows: &[Vec<f64>]) -> Result<Self, MetricError> {
        let matrix = DistanceMatrix::from_rows(rows)?;
        let n = matrix.len();
        for i in 0..n {
            if matrix.get(i, i) != 0.0 {
                return Err(MetricError::InvalidSpace(format!("diagonal entry {i} is nonzero")));
            }
            for j in 0..n {
                if matrix.get(i, j) != matrix.get(j, i) {
                    return Err(MetricError::InvalidSpace(format!("entries ({i}, {j}) and ({j}, {i}) differ")));
                }
                if i != j && matrix.get(i, j) == 0.0 {
                    return Err(MetricError::InvalidSpace(format!("distinct points {i} and {j} at distance zero")));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if matrix.get(i, k) > matrix.get(i, j) + matrix.get(j, k) {
                        return Err(MetricError::InvalidSpace(format!(
                            "triangle inequality fails for ({i}, {j}, {k})"
                        )));
                    }
                }
            }
        }
        Ok(Space::FiniteMatrix(matrix))
    }

    /// Coordinate count of the points of this space.
    pub fn point_dim(&self) -> usize {
        match self {
            Space::Euclidean { dimension } => *dimension,
            _ => 1,
        }
    }

    pub fn has_segments(&self) -> bool {
        !matches!(self, Space::FiniteMatrix(_))
    }

    /// Checks that `p` belongs to the space.
    pub fn check(&self, p: &Point) -> Result<(), MetricError> {
        if p.dim() != self.point_dim() {
            return Err(MetricError::DimensionMismatch { expected: self.point_dim(), found: p.dim() });
        }
        if !p.is_finite() {
            return Err(MetricError::NonFinite);
        }
        let x = p.coords()[0];
        match self {
            Space::Euclidean { .. } => Ok(()),
            Space::Interval { lo, hi } => {
                if x < *lo || x > *hi {
                    Err(MetricError::OutOfDomain { value: x, lo: *lo, hi: *hi })
                } else {
                    Ok(())
                }
            }
            Space::Circle { circumference } => {
                if x < 0.0 || x >= *circumference {
                    Err(MetricError::OutOfDomain { value: x, lo: 0.0, hi: *circumference })
                } else {
                    Ok(())
                }
            }
            Space::FiniteMatrix(m) => {
                if x < 0.0 || x.fract() != 0.0 || x >= m.len() as f64 {
                    Err(MetricError::IndexOutOfRange { index: x, size: m.len() })
                } else {
                    Ok(())
                }
            }
        }
    }

    pub fn distance(&self, x: &Point, y: &Point) -> Result<f64, MetricError> {
        self.check(x)?;
        self.check(y)?;
        let (a, b) = (x.coords(), y.coords());
        Ok(match self {
            Space::Euclidean { .. } => euclidean(a, b),
            Space::Interval { .. } => (a[0] - b[0]).abs(),
            Space::Circle { circumference } => {
                let diff = (a[0] - b[0]).abs();
                diff.min(circumference - diff)
            }
            Space::FiniteMatrix(m) => m.get(a[0] as usize, b[0] as usize),
        })
    }

    /// A metric segment from `x1` to `x2`, parameterized by arc length on
    /// `[0, d(x1, x2)]`.
    ///
    /// On the circle the shorter arc is taken; antipodal pairs go in the
    /// direction of increasing parameter.
    pub fn segment(&self, x1: &Point, x2: &Point) -> Result<Segment, MetricError> {
        if !self.has_segments() {
            return Err(MetricError::NotMetricallyConvex);
        }
        let length = self.distance(x1, x2)?;
        if x1 == x2 {
            return Err(MetricError::DegeneratePair);
        }
        let path = match self {
            Space::Circle { circumference } => {
                let diff = x2.coords()[0] - x1.coords()[0];
                let direct = diff.abs();
                let direction = if direct <= circumference - direct {
                    if direct == circumference - direct {
                        1.0
                    } else {
                        diff.signum()
                    }
                } else {
                    -diff.signum()
                };
                Path::Arc { direction, circumference: *circumference }
            }
            _ => Path::Linear,
        };
        Ok(Segment { a: 0.0, b: length, start: x1.clone(), end: x2.clone(), path })
    }
}

fn euclidean(x: &[f64], y: &[f64]) -> f64 {
    // Scaled to keep d(x, y) > 0 for distinct points even when the squares
    // would underflow.
    let scale = x.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let sum: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = (a - b) / scale;
            r * r
        })
        .sum();
    scale * sum.sqrt()
}

#[derive(Clone, Debug, PartialEq)]
enum Path {
    Linear,
    Arc { direction: f64, circumference: f64 },
}

/// An isometry `φ: [a, b] → X` with `φ(a) = start` and `φ(b) = end`.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    a: f64,
    b: f64,
    start: Point,
    end: Point,
    path: Path,
}

impl Segment {
    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn start(&self) -> &Point {
        &self.start
    }

    pub fn end(&self) -> &Point {
        &self.end
    }

    /// `φ(t)`. The endpoints are returned exactly.
    pub fn at(&self, t: f64) -> Point {
        if t == self.a {
            return self.start.clone();
        }
        if t == self.b {
            return self.end.clone();
        }
        let offset = t - self.a;
        match &self.path {
            Path::Linear => {
                let frac = offset / self.length();
                Point::new(
                    self.start
                        .coords()
                        .iter()
                        .zip(self.end.coords())
                        .map(|(s, e)| s + frac * (e - s))
                        .collect(),
                )
            }
            Path::Arc { direction, circumference } => {
                let mut s = (self.start.coords()[0] + direction * offset).rem_euclid(*circumference);
                if s >= *circumference {
                    s = 0.0;
                }
                Point::scalar(s)
            }
        }
    }

    /// The same set traversed from `end` to `start`.
    pub fn reversed(&self) -> Segment {
        let path = match &self.path {
            Path::Linear => Path::Linear,
            Path::Arc { direction, circumference } => {
                Path::Arc { direction: -direction, circumference: *circumference }
            }
        };
        Segment { a: self.a, b: self.b, start: self.end.clone(), end: self.start.clone(), path }
    }
}

/// One failed metric axiom. Indices refer to the sample passed to
/// [`check_metric_axioms`].
#[derive(Clone, Debug, PartialEq)]
pub enum AxiomViolation {
    /// A point was rejected by the space.
    Evaluation { i: usize, j: usize, error: MetricError },
    Negative { i: usize, j: usize, distance: f64 },
    /// Coincident points at positive distance, or distinct points at zero.
    Identity { i: usize, j: usize, distance: f64 },
    Symmetry { i: usize, j: usize, forward: f64, backward: f64 },
    /// `d(x, z) > d(x, y) + d(y, z) + tol`.
    Triangle { x: usize, y: usize, z: usize, direct: f64, detour: f64 },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AxiomReport {
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

fn coincide(x: &Point, y: &Point) -> bool {
    x.dim() == y.dim()
        && x.coords().iter().zip(y.coords()).all(|(a, b)| (a - b).abs() <= COINCIDENCE_TOLERANCE)
}

/// Checks all four metric axioms over every pair and triple of `sample`.
pub fn check_metric_axioms(space: &Space, sample: &[Point], tol: f64) -> AxiomReport {
    let n = sample.len();
    let mut report = AxiomReport::default();
    let mut table = vec![f64::NAN; n * n];
    for i in 0..n {
        for j in 0..n {
            match space.distance(&sample[i], &sample[j]) {
                Ok(d) => table[i * n + j] = d,
                Err(error) => report.violations.push(AxiomViolation::Evaluation { i, j, error }),
            }
        }
    }
    if !report.is_clean() {
        return report;
    }
    let d = |i: usize, j: usize| table[i * n + j];
    for i in 0..n {
        for j in 0..n {
            let dij = d(i, j);
            if dij < 0.0 {
                report.violations.push(AxiomViolation::Negative { i, j, distance: dij });
            }
            let same = coincide(&sample[i], &sample[j]);
            if (same && dij > tol) || (!same && dij == 0.0) {
                report.violations.push(AxiomViolation::Identity { i, j, distance: dij });
            }
            if i < j && (dij - d(j, i)).abs() > tol {
                report.violations.push(AxiomViolation::Symmetry { i, j, forward: dij, backward: d(j, i) });
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let detour = d(x, y) + d(y, z);
                if d(x, z) > detour + tol {
                    report.violations.push(AxiomViolation::Triangle { x, y, z, direct: d(x, z), detour });
                }
            }
        }
    }
    report
}
