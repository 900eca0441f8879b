//! Maximal interval p-means of step functions on the real line.
//!
//! In one dimension the open convex sets of measure `T` are the open
//! intervals of length `T`, so
//!
//! ```text
//! ‖f‖_{p,T} = sup_t ( (1/T) ∫_t^{t+T} |f|^p )^(1/p).
//! ```
//!
//! For a step function `t ↦ ∫_t^{t+T} |f|^p` is continuous and piecewise
//! linear, with kinks only where `t` or `t + T` crosses a breakpoint. It
//! vanishes outside `[b_0 - T, b_K]`, so the supremum is a maximum over the
//! candidates `{b_k} ∪ {b_k - T}`. Each candidate is evaluated through prefix
//! integrals of `|f|^p`.

use serde::{Deserialize, Serialize};

use crate::check::{BoundCheck, Witness};
use crate::error::{Error, Result};
use crate::series::{abs_pow, check_exponent, root};
use crate::step::{integrate_parts, StepFunction};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalNormResult {
    pub value: f64,
    /// `(1/T) ∫ |f|^p` over the best interval.
    pub value_pow_p: f64,
    /// Smallest candidate left endpoint of a maximizing interval.
    pub arg_left: f64,
}

/// `t ↦ ∫_{-∞}^t |f|^p`, piecewise linear between breakpoints.
pub(crate) struct MassProfile<'a> {
    breakpoints: &'a [f64],
    density: Vec<f64>,
    prefix: Vec<f64>,
}

impl<'a> MassProfile<'a> {
    pub(crate) fn new(breakpoints: &'a [f64], values: &[f64], p: f64) -> Self {
        let density: Vec<f64> = values.iter().map(|&v| abs_pow(v, p)).collect();
        let mut prefix = Vec::with_capacity(breakpoints.len());
        prefix.push(0.0);
        for (k, w) in density.iter().enumerate() {
            prefix.push(prefix[k] + w * (breakpoints[k + 1] - breakpoints[k]));
        }
        Self {
            breakpoints,
            density,
            prefix,
        }
    }

    pub(crate) fn at(&self, t: f64) -> f64 {
        let last = self.breakpoints.len() - 1;
        if t <= self.breakpoints[0] {
            return 0.0;
        }
        if t >= self.breakpoints[last] {
            return self.prefix[last];
        }
        let k = self.breakpoints.partition_point(|&b| b <= t) - 1;
        self.prefix[k] + self.density[k] * (t - self.breakpoints[k])
    }

    pub(crate) fn between(&self, a: f64, b: f64) -> f64 {
        (self.at(b) - self.at(a)).max(0.0)
    }

    /// Kinks of `t ↦ ∫_t^{t+T}`, as `(left, right)` intervals sorted by
    /// `left`. The endpoint sitting on a breakpoint is kept exact, so
    /// `b - T + T` rounding never clips mass off a piece.
    pub(crate) fn candidates(&self, length: f64) -> Vec<(f64, f64)> {
        let mut c: Vec<(f64, f64)> = self
            .breakpoints
            .iter()
            .flat_map(|&b| [(b, b + length), (b - length, b)])
            .collect();
        c.sort_by(|x, y| x.0.total_cmp(&y.0));
        c
    }
}

fn check_length(length: f64) -> Result<()> {
    if length.is_finite() && length > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidLength(length))
    }
}

/// Sweep over raw parts; the parts need not be canonical.
fn sweep(breakpoints: &[f64], values: &[f64], p: f64, length: f64) -> IntervalNormResult {
    let profile = MassProfile::new(breakpoints, values, p);
    let candidates = profile.candidates(length);
    let masses: Vec<f64> = candidates.iter().map(|&(a, b)| profile.between(a, b)).collect();
    let best = masses.iter().copied().fold(0.0_f64, f64::max);
    let cutoff = best - tol::TIE_REL * best;
    let idx = masses.iter().position(|&m| m >= cutoff).unwrap_or(0);
    let (arg_left, right) = candidates[idx];

    let value_pow_p = integrate_parts(breakpoints, values, p, arg_left, right) / length;
    IntervalNormResult {
        value: root(value_pow_p, p),
        value_pow_p,
        arg_left,
    }
}

/// Exact `‖f‖_{p,T}` for a step function, `O(K log K)`.
pub fn interval_pnorm(f: &StepFunction, p: f64, length: f64) -> Result<IntervalNormResult> {
    check_exponent(p)?;
    check_length(length)?;
    if f.pieces() < 1 {
        return Err(Error::EmptySupport);
    }
    Ok(sweep(f.breakpoints(), f.values(), p, length))
}

/// Rectangle of unit `L^p` mass: `ε^(-1/p)` on `(0, ε)`.
pub fn single_bump(epsilon: f64, p: f64) -> Result<StepFunction> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    check_exponent(p)?;
    StepFunction::indicator(0.0, epsilon, epsilon.powf(-p.recip()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BumpTrain {
    pub f: StepFunction,
    /// `⌊S/T⌋`; the train has `d + 1` bumps.
    pub d: u64,
    pub epsilon: f64,
}

fn check_counterexample_scales(short: f64, long: f64) -> Result<f64> {
    check_length(short)?;
    check_length(long)?;
    let ratio = long / short;
    if short >= long || tol::is_integer_ratio(ratio) {
        return Err(Error::NotACounterexampleCase { t: short, s: long });
    }
    Ok(ratio)
}

/// `d + 1` unit-mass bumps of width `ε = (S - dT) / (2(d+1))`, the `i`-th on
/// `(i(T+ε), i(T+ε)+ε)`, with `d = ⌊S/T⌋`. Each height is taken from the
/// bump's stored width, so the masses stay 1 when `ε` is tiny next to the
/// bump offsets.
///
/// Gaps between bumps are exactly `T`, so an interval of length `T` meets at
/// most one bump, while the whole train spans `dT + (d+1)ε < S`. Hence the
/// p-th powers of the norms are `1/T` at scale `T` and `(d+1)/S` at scale `S`.
pub fn bump_train(short: f64, long: f64, p: f64) -> Result<BumpTrain> {
    check_exponent(p)?;
    let ratio = check_counterexample_scales(short, long)?;
    let d = ratio.floor();
    let epsilon = (long - d * short) / (2.0 * (d + 1.0));
    let bumps = d as u64 + 1;

    let mut breakpoints = Vec::with_capacity(2 * bumps as usize);
    let mut values = Vec::with_capacity(2 * bumps as usize - 1);
    for i in 0..bumps {
        let start = i as f64 * (short + epsilon);
        if i > 0 {
            values.push(0.0);
        }
        let end = start + epsilon;
        breakpoints.push(start);
        breakpoints.push(end);
        values.push((end - start).powf(-p.recip()));
    }
    Ok(BumpTrain {
        f: StepFunction::new(breakpoints, values)?,
        d: d as u64,
        epsilon,
    })
}

fn require_norm_exponent(p: f64) -> Result<()> {
    check_exponent(p)?;
    if p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    Ok(())
}

fn interval_witness(r: &IntervalNormResult, length: f64) -> Witness {
    Witness::Interval {
        left: r.arg_left,
        length,
    }
}

/// The bump train's two scale norms: `1/T < (d+1)/S`, with both sides
/// reproducing their closed forms to [`tol::EXACT_REL`].
pub fn check_bump_train(short: f64, long: f64, p: f64) -> Result<BoundCheck> {
    let train = bump_train(short, long, p)?;
    let at_short = interval_pnorm(&train.f, p, short)?;
    let at_long = interval_pnorm(&train.f, p, long)?;
    let exact = tol::rel_eq(short * at_short.value_pow_p, 1.0, tol::EXACT_REL)
        && tol::rel_eq(long * at_long.value_pow_p, (train.d + 1) as f64, tol::EXACT_REL);
    Ok(
        BoundCheck::strictly_less("bump_train", at_short.value_pow_p, at_long.value_pow_p)
            .with_witness(interval_witness(&at_long, long))
            .and(exact),
    )
}

/// A single bump of width `min(T, S-T)/2`: `1/S < 1/T`.
pub fn check_reverse_counterexample(short: f64, long: f64, p: f64) -> Result<BoundCheck> {
    check_length(short)?;
    check_length(long)?;
    if short >= long {
        return Err(Error::BadOrder {
            small: short,
            large: long,
        });
    }
    let g = single_bump(short.min(long - short) / 2.0, p)?;
    let at_short = interval_pnorm(&g, p, short)?;
    let at_long = interval_pnorm(&g, p, long)?;
    let exact = tol::rel_eq(long * at_long.value_pow_p, 1.0, tol::EXACT_REL)
        && tol::rel_eq(short * at_short.value_pow_p, 1.0, tol::EXACT_REL);
    Ok(
        BoundCheck::strictly_less("reverse_counterexample", at_long.value_pow_p, at_short.value_pow_p)
            .with_witness(interval_witness(&at_short, short))
            .and(exact),
    )
}

/// `‖f‖^p_{p,V} <= Σ_l (α_l/V) ‖f‖^p_{p,α_l}` with `V = Σ_l α_l`.
pub fn check_partition_inequality_cont(f: &StepFunction, p: f64, parts: &[f64]) -> Result<BoundCheck> {
    require_norm_exponent(p)?;
    if parts.is_empty() {
        return Err(Error::InvalidPartition("no parts".into()));
    }
    if parts.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
        return Err(Error::InvalidPartition("parts must be finite and positive".into()));
    }
    let total: f64 = parts.iter().sum();
    let whole = interval_pnorm(f, p, total)?;
    let mut rhs = 0.0;
    for &a in parts {
        rhs += a / total * interval_pnorm(f, p, a)?.value_pow_p;
    }
    Ok(BoundCheck::at_most("partition_inequality_cont", whole.value_pow_p, rhs)
        .with_witness(interval_witness(&whole, total)))
}

/// `‖f‖_{p,dV} <= ‖f‖_{p,V}`.
pub fn check_multiple_ordering_cont(f: &StepFunction, p: f64, volume: f64, d: u32) -> Result<BoundCheck> {
    require_norm_exponent(p)?;
    if d == 0 {
        return Err(Error::InvalidPartition("multiplier must be at least 1".into()));
    }
    let large_len = f64::from(d) * volume;
    let small = interval_pnorm(f, p, volume)?;
    let large = interval_pnorm(f, p, large_len)?;
    Ok(BoundCheck::at_most("divisor_ordering_cont", large.value, small.value)
        .with_witness(interval_witness(&large, large_len)))
}

/// `(⌊S/T⌋ + 1) T / S`.
pub fn two_scale_factor_cont(short: f64, long: f64) -> f64 {
    ((long / short).floor() + 1.0) * short / long
}

/// `‖f‖^p_{p,S} <= ((⌊S/T⌋+1) T/S) ‖f‖^p_{p,T}` for `T < S`, and the factor is at most 2.
pub fn check_two_scale_bound_cont(f: &StepFunction, p: f64, short: f64, long: f64) -> Result<BoundCheck> {
    require_norm_exponent(p)?;
    check_length(short)?;
    check_length(long)?;
    if short >= long {
        return Err(Error::BadOrder {
            small: short,
            large: long,
        });
    }
    let factor = two_scale_factor_cont(short, long);
    let small = interval_pnorm(f, p, short)?;
    let large = interval_pnorm(f, p, long)?;
    Ok(
        BoundCheck::at_most("two_scale_bound_cont", large.value_pow_p, factor * small.value_pow_p)
            .with_factor(factor)
            .with_witness(interval_witness(&large, long)),
    )
}
