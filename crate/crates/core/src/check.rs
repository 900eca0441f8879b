//! Uniform result record for inequality checks.

use serde::{Deserialize, Serialize};

use crate::tol;

/// Where the left-hand side of a check is realized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// Zero-based start of the maximizing window, and its length.
    Window { start: usize, n: usize },
    /// Left endpoint of the maximizing interval, and its length.
    Interval { left: f64, length: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `lhs <= rhs + INEQ_REL * max(1, |rhs|)`.
    AtMost,
    /// `lhs < rhs`, no slack.
    StrictlyLess,
}

/// One evaluated inequality `lhs (<=|<) rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub slack: f64,
    pub relation: Relation,
    pub passed: bool,
    /// Scale factor on the right-hand side, for the two-scale bounds.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub factor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
}

impl BoundCheck {
    pub fn at_most(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self {
            name: name.into(),
            lhs,
            rhs,
            slack: rhs - lhs,
            relation: Relation::AtMost,
            passed: lhs <= rhs + tol::ineq_slack(rhs),
            factor: None,
            witness: None,
        }
    }

    pub fn strictly_less(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self {
            name: name.into(),
            lhs,
            rhs,
            slack: rhs - lhs,
            relation: Relation::StrictlyLess,
            passed: lhs < rhs,
            factor: None,
            witness: None,
        }
    }

    pub fn with_witness(mut self, witness: Witness) -> Self {
        self.witness = Some(witness);
        self
    }

    /// Records the two-scale factor; the check also requires `factor <= 2`.
    pub(crate) fn with_factor(mut self, factor: f64) -> Self {
        self.factor = Some(factor);
        self.passed &= factor <= 2.0 + tol::FACTOR_SLACK;
        self
    }

    pub(crate) fn and(mut self, ok: bool) -> Self {
        self.passed &= ok;
        self
    }
}

/// A two-sided bound `lower <= value <= upper`, kept as two checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoSidedCheck {
    pub lower: BoundCheck,
    pub upper: BoundCheck,
}

impl TwoSidedCheck {
    pub fn passed(&self) -> bool {
        self.lower.passed && self.upper.passed
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn at_most_uses_absolute_floor() {
        assert!(BoundCheck::at_most("x", 1e-10, 0.0).passed);
        assert!(!BoundCheck::at_most("x", 1e-8, 0.0).passed);
        assert!(BoundCheck::at_most("x", 1000.0 + 1e-7, 1000.0).passed);
        assert!(!BoundCheck::at_most("x", 1000.0 + 1e-5, 1000.0).passed);
    }

    #[test]
    fn strict_has_no_slack() {
        assert!(!BoundCheck::strictly_less("x", 1.0, 1.0).passed);
        assert!(BoundCheck::strictly_less("x", 1.0, 1.0 + 1e-15).passed);
    }

    #[test]
    fn factor_above_two_fails() {
        let c = BoundCheck::at_most("x", 0.0, 1.0).with_factor(2.0);
        assert!(c.passed);
        let c = BoundCheck::at_most("x", 0.0, 1.0).with_factor(2.001);
        assert!(!c.passed);
    }
}
