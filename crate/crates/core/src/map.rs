//! Multivalued maps `F: X → CB(X)` with finite images.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hausdorff::FiniteSet;
use crate::metric::Point;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error("map expects points of dimension {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point {0} is not an index of the table")]
    NotAnIndex(Point),
    #[error("malformed map: {0}")]
    Malformed(String),
}

/// `x ↦ F(x)`. Evaluation must be deterministic: the same point always gives
/// the same set.
pub trait MultiMap: Send + Sync {
    fn eval(&self, x: &Point) -> Result<FiniteSet, MapError>;

    /// Point dimension the map accepts.
    fn dimension(&self) -> usize;
}

/// `x ↦ A x + b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineBranch {
    #[serde(rename = "A")]
    pub matrix: Vec<Vec<f64>>,
    pub b: Vec<f64>,
}

impl AffineBranch {
    pub fn new(matrix: Vec<Vec<f64>>, b: Vec<f64>) -> Self {
        AffineBranch { matrix, b }
    }

    /// One-dimensional branch `x ↦ a·x + b`.
    pub fn scalar(a: f64, b: f64) -> Self {
        AffineBranch { matrix: vec![vec![a]], b: vec![b] }
    }

    pub fn apply(&self, x: &[f64]) -> Point {
        Point::new(
            self.matrix
                .iter()
                .zip(&self.b)
                .map(|(row, bi)| row.iter().zip(x).map(|(a, xi)| a * xi).sum::<f64>() + bi)
                .collect(),
        )
    }

    /// Frobenius norm, an upper bound on the Lipschitz constant of the branch.
    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.iter().flatten().map(|a| a * a).sum::<f64>().sqrt()
    }
}

/// `F(x) = {A_i x + b_i : i}` for a finite list of affine branches.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSelector {
    branches: Vec<AffineBranch>,
    dimension: usize,
}

impl AffineSelector {
    pub fn new(branches: Vec<AffineBranch>) -> Result<Self, MapError> {
        let Some(first) = branches.first() else {
            return Err(MapError::Malformed("affine selector needs at least one branch".into()));
        };
        let dimension = first.b.len();
        if dimension == 0 {
            return Err(MapError::Malformed("affine branch has an empty offset".into()));
        }
        for (i, br) in branches.iter().enumerate() {
            if br.b.len() != dimension || br.matrix.len() != dimension || br.matrix.iter().any(|r| r.len() != dimension) {
                return Err(MapError::Malformed(format!("branch {i} is not a {dimension}x{dimension} affine map")));
            }
            if br.matrix.iter().flatten().chain(&br.b).any(|v| !v.is_finite()) {
                return Err(MapError::Malformed(format!("branch {i} has a non-finite entry")));
            }
        }
        Ok(AffineSelector { branches, dimension })
    }

    /// One-dimensional selector `F(x) = {a_i x + b_i}`.
    pub fn scalar(branches: &[(f64, f64)]) -> Result<Self, MapError> {
        Self::new(branches.iter().map(|&(a, b)| AffineBranch::scalar(a, b)).collect())
    }

    pub fn branches(&self) -> &[AffineBranch] {
        &self.branches
    }

    /// Upper bound on `H(F(x), F(y)) / d(x, y)` in the Euclidean metric.
    pub fn lipschitz_bound(&self) -> f64 {
        self.branches.iter().map(AffineBranch::frobenius_norm).fold(0.0, f64::max)
    }
}

impl MultiMap for AffineSelector {
    fn eval(&self, x: &Point) -> Result<FiniteSet, MapError> {
        if x.dim() != self.dimension {
            return Err(MapError::DimensionMismatch { expected: self.dimension, found: x.dim() });
        }
        FiniteSet::new(self.branches.iter().map(|br| br.apply(x.coords())))
            .map_err(|e| MapError::Malformed(e.to_string()))
    }

    fn dimension(&self) -> usize {
        self.dimension
    }
}

/// Explicit map on the index points `0..n` of a finite space: `F(i)` is the
/// set of indices in row `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct TableMap {
    rows: Vec<Vec<usize>>,
}

impl TableMap {
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self, MapError> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.is_empty() {
                return Err(MapError::Malformed(format!("table row {i} is empty")));
            }
            if let Some(&bad) = row.iter().find(|&&j| j >= n) {
                return Err(MapError::Malformed(format!("table row {i} refers to index {bad} of {n}")));
            }
        }
        Ok(TableMap { rows })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

impl MultiMap for TableMap {
    fn eval(&self, x: &Point) -> Result<FiniteSet, MapError> {
        if x.dim() != 1 {
            return Err(MapError::DimensionMismatch { expected: 1, found: x.dim() });
        }
        let v = x.coords()[0];
        if !(v >= 0.0 && v.fract() == 0.0 && v < self.rows.len() as f64) {
            return Err(MapError::NotAnIndex(x.clone()));
        }
        FiniteSet::new(self.rows[v as usize].iter().map(|&j| Point::index(j)))
            .map_err(|e| MapError::Malformed(e.to_string()))
    }

    fn dimension(&self) -> usize {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_selector_evaluates_all_branches() {
        let f = AffineSelector::scalar(&[(0.5, 0.0), (0.0, 7.0)]).unwrap();
        let image = f.eval(&7.0.into()).unwrap();
        assert_eq!(image.elements(), &[Point::scalar(3.5), Point::scalar(7.0)]);
    }

    #[test]
    fn coinciding_branches_collapse() {
        let f = AffineSelector::scalar(&[(0.5, 0.0), (1.0 / 3.0, 0.0)]).unwrap();
        assert_eq!(f.eval(&0.0.into()).unwrap().len(), 1);
    }

    #[test]
    fn planar_branch() {
        let br = AffineBranch::new(vec![vec![0.0, -1.0], vec![1.0, 0.0]], vec![1.0, 0.0]);
        assert_eq!(br.apply(&[2.0, 3.0]), Point::new(vec![-2.0, 2.0]));
        assert_eq!(br.frobenius_norm(), 2f64.sqrt());
    }

    #[test]
    fn selector_validation() {
        assert!(AffineSelector::new(vec![]).is_err());
        assert!(AffineSelector::new(vec![AffineBranch::new(vec![vec![1.0, 0.0]], vec![0.0])]).is_err());
        assert!(AffineSelector::new(vec![AffineBranch::scalar(1.0, 0.0), AffineBranch::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![0.0, 0.0])]).is_err());
        assert!(AffineSelector::scalar(&[(f64::INFINITY, 0.0)]).is_err());
        let f = AffineSelector::scalar(&[(0.5, 0.0)]).unwrap();
        assert_eq!(f.eval(&Point::new(vec![0.0, 0.0])), Err(MapError::DimensionMismatch { expected: 1, found: 2 }));
    }

    #[test]
    fn table_map() {
        let t = TableMap::new(vec![vec![1], vec![1, 0]]).unwrap();
        assert_eq!(t.eval(&Point::index(1)).unwrap().elements(), &[Point::index(0), Point::index(1)]);
        assert!(matches!(t.eval(&Point::scalar(0.5)), Err(MapError::NotAnIndex(_))));
        assert!(matches!(t.eval(&Point::index(2)), Err(MapError::NotAnIndex(_))));
        assert!(TableMap::new(vec![vec![]]).is_err());
        assert!(TableMap::new(vec![vec![3]]).is_err());
    }
}
