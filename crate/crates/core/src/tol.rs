//! Numeric tolerances shared by the fast paths, the oracles and the checks.

/// Relative gap under which two window means count as tied. Both the sliding
/// sweep and the brute-force oracle resolve ties to the smallest start.
pub const TIE_REL: f64 = 1e-12;

/// Relative tolerance for exactness and oracle-agreement comparisons.
pub const EXACT_REL: f64 = 1e-12;

/// Slack for inequality checks: `lhs <= rhs + INEQ_REL * max(1, |rhs|)`.
pub const INEQ_REL: f64 = 1e-9;

/// Allowed excess of the two-scale factor over 2.
pub const FACTOR_SLACK: f64 = 1e-12;

/// A ratio within this relative distance of an integer is treated as one.
pub const INTEGER_RATIO_REL: f64 = 1e-12;

/// Timestamps whose steps agree to this relative tolerance are uniform.
pub const UNIFORM_SPACING_REL: f64 = 1e-6;

/// Maximum relative rounding when converting a physical window to samples.
pub const WINDOW_CONVERSION_REL: f64 = 0.01;

/// Sliding sums are rebuilt from scratch at least this often.
pub const RESUM_PERIOD: usize = 1 << 16;

pub(crate) fn ineq_slack(rhs: f64) -> f64 {
    INEQ_REL * rhs.abs().max(1.0)
}

/// `|a - b| <= rel * max(|a|, |b|)`, with exact zeros comparing equal.
pub fn rel_eq(a: f64, b: f64, rel: f64) -> bool {
    a == b || (a - b).abs() <= rel * a.abs().max(b.abs())
}

/// Whether `ratio` is an integer up to [`INTEGER_RATIO_REL`].
pub fn is_integer_ratio(ratio: f64) -> bool {
    (ratio - ratio.round()).abs() <= INTEGER_RATIO_REL * ratio.abs()
}
