//! Mizoguchi-Takahashi gauges.
//!
//! A gauge `α: [0, ∞) → [0, 1)` is stored as contiguous half-open affine
//! pieces `[start, end)` with `α(t) = c0 + c1·t`, followed by a constant tail
//! on `[tail_start, ∞)`. Pieces are right-continuous, so the right limit of
//! `α` at every `t` is `α(t)` itself and the condition
//! `limsup_{s→t+} α(s) < 1` comes down to `α(t) < 1` everywhere. The value
//! `1` may still show up as an unattained left limit at a piece end, which
//! is exactly what makes the running supremum
//! `S(p) = sup{α(t) : 0 ≤ t ≤ p}` reach `1`.
//!
//! Affine pieces evaluated in floating point are monotone, so all extrema are
//! taken at piece endpoints and every supremum here is exact.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaugeError {
    #[error("malformed gauge pieces: {0}")]
    MalformedPieces(String),
    #[error("gauge violates the range or limsup condition: {}", describe(.0))]
    Invalid(Vec<GaugeViolation>),
    #[error("supremum radius must be positive, got {0}")]
    NonPositiveP(f64),
}

fn describe(violations: &[GaugeViolation]) -> String {
    violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaugeViolation {
    #[error("range: piece {piece} takes value {value} at t = {t}, outside [0, 1)")]
    AttainedOutOfRange { piece: usize, t: f64, value: f64 },
    #[error("range: piece {piece} tends to {value} as t -> {t}-, outside [0, 1]")]
    LeftLimitOutOfRange { piece: usize, t: f64, value: f64 },
    #[error("range: tail value {value} outside [0, 1)")]
    TailOutOfRange { value: f64 },
    #[error("limsup: right limit {value} >= 1 at t = {t}")]
    Limsup { t: f64, value: f64 },
}

/// `α(t) = c0 + c1·t` on `[start, end)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Piece {
    pub start: f64,
    pub end: f64,
    pub c0: f64,
    pub c1: f64,
}

impl Piece {
    pub fn eval(&self, t: f64) -> f64 {
        self.c0 + self.c1 * t
    }
}

/// An unvalidated gauge description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Gauge {
    pub pieces: Vec<Piece>,
    pub tail_start: f64,
    pub tail_value: f64,
}

impl Gauge {
    pub fn constant(value: f64) -> Self {
        Gauge { pieces: Vec::new(), tail_start: 0.0, tail_value: value }
    }

    /// `α(t) = c0 + c1·t` on `[0, end)`, then `tail` from `end` on.
    pub fn affine_then_constant(c0: f64, c1: f64, end: f64, tail: f64) -> Self {
        Gauge { pieces: vec![Piece { start: 0.0, end, c0, c1 }], tail_start: end, tail_value: tail }
    }

    fn check_structure(&self) -> Result<(), GaugeError> {
        let malformed = |msg: String| Err(GaugeError::MalformedPieces(msg));
        let mut cursor = 0.0;
        for (i, p) in self.pieces.iter().enumerate() {
            if ![p.start, p.end, p.c0, p.c1].iter().all(|v| v.is_finite()) {
                return malformed(format!("piece {i} has a non-finite field"));
            }
            if p.start != cursor {
                return malformed(format!("piece {i} starts at {} but the previous piece ends at {cursor}", p.start));
            }
            if p.start >= p.end {
                return malformed(format!("piece {i} has empty interval [{}, {})", p.start, p.end));
            }
            cursor = p.end;
        }
        if !self.tail_start.is_finite() || !self.tail_value.is_finite() {
            return malformed("tail has a non-finite field".into());
        }
        if self.tail_start != cursor {
            return malformed(format!("tail starts at {} but the pieces end at {cursor}", self.tail_start));
        }
        Ok(())
    }

    /// Structural check followed by the range and limsup conditions. An empty
    /// list means the gauge is valid.
    pub fn validate(&self) -> Result<Vec<GaugeViolation>, GaugeError> {
        self.check_structure()?;
        let mut violations = Vec::new();
        for (i, p) in self.pieces.iter().enumerate() {
            let first = p.eval(p.start);
            let last = p.eval(p.end);
            if !(0.0..1.0).contains(&first) {
                violations.push(GaugeViolation::AttainedOutOfRange { piece: i, t: p.start, value: first });
            }
            if !(0.0..=1.0).contains(&last) {
                violations.push(GaugeViolation::LeftLimitOutOfRange { piece: i, t: p.end, value: last });
            }
            if first >= 1.0 {
                violations.push(GaugeViolation::Limsup { t: p.start, value: first });
            } else if last > 1.0 {
                // α crosses 1 inside the piece; α(t) = 1 there is its own right limit.
                violations.push(GaugeViolation::Limsup { t: (1.0 - p.c0) / p.c1, value: 1.0 });
            }
        }
        if !(0.0..1.0).contains(&self.tail_value) {
            violations.push(GaugeViolation::TailOutOfRange { value: self.tail_value });
        }
        if self.tail_value >= 1.0 {
            violations.push(GaugeViolation::Limsup { t: self.tail_start, value: self.tail_value });
        }
        Ok(violations)
    }
}

/// A gauge that passed [`Gauge::validate`].
#[derive(Clone, Debug, PartialEq)]
pub struct ValidGauge(Gauge);

impl TryFrom<Gauge> for ValidGauge {
    type Error = GaugeError;

    fn try_from(gauge: Gauge) -> Result<Self, GaugeError> {
        let violations = gauge.validate()?;
        if violations.is_empty() {
            Ok(ValidGauge(gauge))
        } else {
            Err(GaugeError::Invalid(violations))
        }
    }
}

impl ValidGauge {
    pub fn new(gauge: Gauge) -> Result<Self, GaugeError> {
        Self::try_from(gauge)
    }

    pub fn gauge(&self) -> &Gauge {
        &self.0
    }

    /// `α(t)` for `t ≥ 0`.
    ///
    /// # Panics
    ///
    /// On negative or NaN `t`.
    pub fn value(&self, t: f64) -> f64 {
        assert!(t >= 0.0, "gauge evaluated at {t}");
        if t >= self.0.tail_start {
            return self.0.tail_value;
        }
        let idx = self.0.pieces.partition_point(|p| p.end <= t);
        self.0.pieces[idx].eval(t)
    }

    /// `sup{α(t) : 0 ≤ t ≤ p}`, with left limits at piece ends counted. May
    /// be exactly `1`, which is never a value of `α`.
    pub fn sup_alpha(&self, p: f64) -> Result<f64, GaugeError> {
        if p.is_nan() || p <= 0.0 {
            return Err(GaugeError::NonPositiveP(p));
        }
        let mut sup = f64::NEG_INFINITY;
        for piece in &self.0.pieces {
            sup = sup.max(piece.eval(piece.start));
            if p < piece.end {
                return Ok(sup.max(piece.eval(p)));
            }
            sup = sup.max(piece.eval(piece.end));
        }
        Ok(sup.max(self.0.tail_value))
    }

    /// `inf{α(t) : t > 0}`. A map whose branches are all Lipschitz with at
    /// most this constant satisfies the gauge condition at every distance.
    pub fn infimum(&self) -> f64 {
        self.0
            .pieces
            .iter()
            .flat_map(|p| [p.eval(p.start), p.eval(p.end)])
            .fold(self.0.tail_value, f64::min)
    }

    /// Largest slope magnitude over the pieces.
    pub fn lipschitz(&self) -> f64 {
        self.0.pieces.iter().map(|p| p.c1.abs()).fold(0.0, f64::max)
    }

    pub fn profile(&self) -> SupProfile {
        let mut pieces = Vec::with_capacity(self.0.pieces.len() + 1);
        let mut prefix = f64::NEG_INFINITY;
        let mut reach_one = None;
        for p in &self.0.pieces {
            let floor = prefix.max(p.eval(p.start));
            pieces.push(RunningSup { start: p.start, end: p.end, floor, c0: p.c0, c1: p.c1.max(0.0) });
            let limit = p.eval(p.end);
            if reach_one.is_none() && limit >= 1.0 {
                reach_one = Some(p.end);
            }
            prefix = floor.max(limit);
        }
        pieces.push(RunningSup {
            start: self.0.tail_start,
            end: f64::INFINITY,
            floor: prefix.max(self.0.tail_value),
            c0: 0.0,
            c1: 0.0,
        });
        SupProfile { pieces, reach_one }
    }
}

/// One stretch of the running supremum: on `[start, end)`,
/// `S(p) = max(floor, c0 + c1·p)` with `c1 ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunningSup {
    pub start: f64,
    pub end: f64,
    pub floor: f64,
    pub c0: f64,
    pub c1: f64,
}

/// The running supremum `S(p) = sup{α(t) : 0 ≤ t ≤ p}` of a valid gauge.
#[derive(Clone, Debug, PartialEq)]
pub struct SupProfile {
    pub pieces: Vec<RunningSup>,
    /// `p₀ = inf{p > 0 : S(p) = 1}`, absent when `S < 1` everywhere. When
    /// present it is a piece end, hence positive, and `S(p₀) = 1`.
    pub reach_one: Option<f64>,
}

impl SupProfile {
    pub fn at(&self, p: f64) -> f64 {
        let idx = self.pieces.partition_point(|r| r.end <= p);
        let r = &self.pieces[idx.min(self.pieces.len() - 1)];
        if r.c1 > 0.0 {
            r.floor.max(r.c0 + r.c1 * p)
        } else {
            r.floor
        }
    }

    /// True when the radius set `{p > 0 : S(p) = 1}` is empty.
    pub fn is_case_one(&self) -> bool {
        self.reach_one.is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half_slope() -> ValidGauge {
        ValidGauge::new(Gauge::affine_then_constant(0.0, 0.5, 1.0, 0.5)).unwrap()
    }

    fn unit_slope() -> ValidGauge {
        ValidGauge::new(Gauge::affine_then_constant(0.0, 1.0, 1.0, 0.5)).unwrap()
    }

    #[test]
    fn valid_examples() {
        half_slope();
        unit_slope();
        ValidGauge::new(Gauge::constant(0.9)).unwrap();
        ValidGauge::new(Gauge::constant(0.0)).unwrap();
    }

    #[test]
    fn tail_of_one_is_out_of_range() {
        let err = ValidGauge::new(Gauge::affine_then_constant(0.0, 0.5, 1.0, 1.0)).unwrap_err();
        let GaugeError::Invalid(v) = err else { panic!("expected violations") };
        assert!(v.contains(&GaugeViolation::TailOutOfRange { value: 1.0 }));
    }

    #[test]
    fn reaching_one_at_zero_is_rejected() {
        let g = Gauge::affine_then_constant(1.0, -0.5, 1.0, 0.5);
        let v = g.validate().unwrap();
        assert!(v.contains(&GaugeViolation::Limsup { t: 0.0, value: 1.0 }));
        assert!(v.contains(&GaugeViolation::AttainedOutOfRange { piece: 0, t: 0.0, value: 1.0 }));
    }

    #[test]
    fn crossing_one_inside_a_piece() {
        let g = Gauge::affine_then_constant(0.0, 2.0, 1.0, 0.5);
        let v = g.validate().unwrap();
        assert!(v.contains(&GaugeViolation::Limsup { t: 0.5, value: 1.0 }));
        assert!(v.contains(&GaugeViolation::LeftLimitOutOfRange { piece: 0, t: 1.0, value: 2.0 }));
    }

    #[test]
    fn negative_values_rejected() {
        let v = Gauge::affine_then_constant(0.5, -1.0, 1.0, 0.2).validate().unwrap();
        assert_eq!(v, vec![GaugeViolation::LeftLimitOutOfRange { piece: 0, t: 1.0, value: -0.5 }]);
    }

    #[test]
    fn malformed_pieces() {
        let gap = Gauge {
            pieces: vec![
                Piece { start: 0.0, end: 1.0, c0: 0.1, c1: 0.0 },
                Piece { start: 1.5, end: 2.0, c0: 0.1, c1: 0.0 },
            ],
            tail_start: 2.0,
            tail_value: 0.1,
        };
        assert!(matches!(gap.validate(), Err(GaugeError::MalformedPieces(_))));
        let late = Gauge { pieces: vec![Piece { start: 0.5, end: 1.0, c0: 0.1, c1: 0.0 }], tail_start: 1.0, tail_value: 0.1 };
        assert!(matches!(late.validate(), Err(GaugeError::MalformedPieces(_))));
        let empty = Gauge { pieces: vec![Piece { start: 0.0, end: 0.0, c0: 0.1, c1: 0.0 }], tail_start: 0.0, tail_value: 0.1 };
        assert!(matches!(empty.validate(), Err(GaugeError::MalformedPieces(_))));
        let tail = Gauge { pieces: vec![Piece { start: 0.0, end: 1.0, c0: 0.1, c1: 0.0 }], tail_start: 2.0, tail_value: 0.1 };
        assert!(matches!(tail.validate(), Err(GaugeError::MalformedPieces(_))));
        let nan = Gauge::affine_then_constant(f64::NAN, 0.0, 1.0, 0.1);
        assert!(matches!(nan.validate(), Err(GaugeError::MalformedPieces(_))));
    }

    #[test]
    fn sup_examples() {
        assert_eq!(half_slope().sup_alpha(0.8).unwrap(), 0.4);
        assert_eq!(half_slope().sup_alpha(3.0).unwrap(), 0.5);
        assert_eq!(unit_slope().sup_alpha(1.0).unwrap(), 1.0);
        assert_eq!(unit_slope().sup_alpha(0.5).unwrap(), 0.5);
        assert_eq!(half_slope().sup_alpha(0.0), Err(GaugeError::NonPositiveP(0.0)));
        assert!(half_slope().sup_alpha(f64::NAN).is_err());
    }

    #[test]
    fn sup_counts_value_at_p_from_next_piece() {
        let g = ValidGauge::new(Gauge {
            pieces: vec![
                Piece { start: 0.0, end: 1.0, c0: 0.1, c1: 0.0 },
                Piece { start: 1.0, end: 2.0, c0: 0.9, c1: -0.4 },
            ],
            tail_start: 2.0,
            tail_value: 0.0,
        })
        .unwrap();
        assert_eq!(g.sup_alpha(1.0).unwrap(), 0.5);
        assert_eq!(g.sup_alpha(0.999).unwrap(), 0.1);
        assert_eq!(g.value(1.0), 0.5);
        assert_eq!(g.value(2.5), 0.0);
        assert_eq!(g.infimum(), 0.0);
    }

    #[test]
    fn profile_cases() {
        assert!(half_slope().profile().is_case_one());
        assert_eq!(unit_slope().profile().reach_one, Some(1.0));
        assert!(ValidGauge::new(Gauge::constant(0.9)).unwrap().profile().is_case_one());
    }

    #[test]
    fn profile_agrees_with_sup() {
        let g = unit_slope();
        let profile = g.profile();
        for p in [0.1, 0.5, 0.99, 1.0, 1.5, 10.0] {
            assert_eq!(profile.at(p), g.sup_alpha(p).unwrap(), "p = {p}");
        }
    }

    #[test]
    fn infimum_and_lipschitz() {
        let g = ValidGauge::new(Gauge::affine_then_constant(0.3, 0.2, 1.0, 0.5)).unwrap();
        assert_eq!(g.infimum(), 0.3);
        assert_eq!(g.lipschitz(), 0.2);
    }
}
