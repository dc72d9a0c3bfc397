//! Hausdorff distance between finite point sets.
//!
//! For nonempty finite `A`, `B`:
//!
//! - `d(a, B) = min_{b ∈ B} d(a, b)`
//! - `h(A, B) = max_{a ∈ A} d(a, B)` (directed)
//! - `H(A, B) = max(h(A, B), h(B, A))`
//!
//! Finite sets are closed and bounded, so infima and suprema are attained and
//! every quantity is computed exactly from the distance oracle.

use thiserror::Error;

use crate::metric::{MetricError, Point, Space};

/// Largest `|A|·|B|` accepted by [`brute_force_hausdorff`].
pub const BRUTE_FORCE_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HausdorffError {
    #[error("finite set must be nonempty")]
    EmptySet,
    #[error("distance table of {size} entries exceeds the brute-force limit")]
    SizeLimitExceeded { size: usize },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// A nonempty finite set of points, kept in canonical order without
/// duplicates.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteSet {
    elements: Vec<Point>,
}

impl FiniteSet {
    pub fn new(points: impl IntoIterator<Item = Point>) -> Result<Self, HausdorffError> {
        let mut elements: Vec<Point> = points.into_iter().collect();
        if elements.is_empty() {
            return Err(HausdorffError::EmptySet);
        }
        elements.sort_by(Point::canonical_cmp);
        elements.dedup();
        Ok(FiniteSet { elements })
    }

    pub fn singleton(p: Point) -> Self {
        FiniteSet { elements: vec![p] }
    }

    pub fn elements(&self) -> &[Point] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.elements.binary_search_by(|e| e.canonical_cmp(p)).is_ok()
    }

    /// Nearest element to `x`, ties going to the first element in canonical
    /// order. Returns the element and its distance.
    pub fn nearest(&self, space: &Space, x: &Point) -> Result<(&Point, f64), MetricError> {
        let mut best = (&self.elements[0], space.distance(x, &self.elements[0])?);
        for e in &self.elements[1..] {
            let d = space.distance(x, e)?;
            if d < best.1 {
                best = (e, d);
            }
        }
        Ok(best)
    }
}

/// `d(a, B)`.
pub fn dist_to_set(space: &Space, a: &Point, set: &FiniteSet) -> Result<f64, MetricError> {
    Ok(set.nearest(space, a)?.1)
}

/// `h(A, B) = max_{a ∈ A} d(a, B)`.
pub fn directed_hausdorff(space: &Space, a: &FiniteSet, b: &FiniteSet) -> Result<f64, MetricError> {
    let mut worst = 0.0f64;
    for p in a.elements() {
        worst = worst.max(dist_to_set(space, p, b)?);
    }
    Ok(worst)
}

pub fn hausdorff(space: &Space, a: &FiniteSet, b: &FiniteSet) -> Result<f64, MetricError> {
    Ok(directed_hausdorff(space, a, b)?.max(directed_hausdorff(space, b, a)?))
}

/// Reference Hausdorff distance from the full `|A|×|B|` distance table, with
/// row and column minima taken separately. Used as an oracle for
/// [`hausdorff`].
pub fn brute_force_hausdorff(space: &Space, a: &FiniteSet, b: &FiniteSet) -> Result<f64, HausdorffError> {
    let (n, m) = (a.len(), b.len());
    let size = n.saturating_mul(m);
    if size > BRUTE_FORCE_LIMIT {
        return Err(HausdorffError::SizeLimitExceeded { size });
    }
    let mut table = Vec::with_capacity(size);
    for p in a.elements() {
        for q in b.elements() {
            table.push(space.distance(p, q)?);
        }
    }
    let row_min = (0..n).map(|i| table[i * m..(i + 1) * m].iter().copied().fold(f64::INFINITY, f64::min));
    let col_min = (0..m).map(|j| (0..n).map(|i| table[i * m + j]).fold(f64::INFINITY, f64::min));
    let forward = row_min.fold(0.0, f64::max);
    let backward = col_min.fold(0.0, f64::max);
    Ok(forward.max(backward))
}
