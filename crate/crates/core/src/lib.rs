//! Multivalued contractions on metric spaces.
//!
//! The crate turns a Mizoguchi-Takahashi gauge `α` and a locality radius `ε`
//! into a uniform local contraction constant `k < 1`, and checks that
//! constant against concrete set-valued maps by chaining Hausdorff bounds
//! along metric segments.
//!
//! Module map:
//!
//! - [`metric`]: points, spaces, distance and segment oracles, axiom checks.
//! - [`hausdorff`]: finite sets and the Hausdorff metric between them.
//! - [`gauge`]: piecewise-affine gauges, exact interval suprema, `p₀`.
//! - [`map`]: multivalued maps `x ↦ F(x)`.
//! - [`reduction`]: certificates, segment subdivision, chain bounds, sampling
//!   verification.
//! - [`fixedpoint`]: successive approximation and ε-chainability.

pub mod fixedpoint;
pub mod gauge;
pub mod hausdorff;
pub mod map;
pub mod metric;
pub mod reduction;

pub use fixedpoint::{ChainPath, Chainability, FixedPointError, IterationLog};
pub use gauge::{Gauge, GaugeError, GaugeViolation, Piece, SupProfile, ValidGauge};
pub use hausdorff::{FiniteSet, HausdorffError};
pub use map::{AffineBranch, AffineSelector, MapError, MultiMap, TableMap};
pub use metric::{DistanceMatrix, MetricError, Point, Segment, Space};
pub use reduction::{CaseTag, Certificate, ChainTrace, Evidence, LocalPairSampler, ReductionError};
