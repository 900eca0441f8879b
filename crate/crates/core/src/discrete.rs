//! Maximal windowed p-means of finite sample series.
//!
//! For a series `x` of length `N`, exponent `p > 0` and window length `n`,
//!
//! ```text
//! ‖x‖_{∞,p,n} = max_{0 <= j <= N-n} ( (1/n) Σ_{i=j}^{j+n-1} |x_i|^p )^(1/p)
//! ```
//!
//! Only windows fully inside the series are considered. The maximum is found
//! with a compensated sliding sum of `|x_i|^p` in `O(N)`, and the winning
//! window is re-summed directly so the reported value is never the product of
//! accumulated drift.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::check::{BoundCheck, TwoSidedCheck, Witness};
use crate::error::{Error, Result};
use crate::report::{ScaleReport, ScaleRow};
use crate::series::{abs_pow, check_exponent, root, SampleSeries, WindowSpec};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowedNormResult {
    /// `value_pow_p^(1/p)`.
    pub value: f64,
    /// Maximal `(1/n) Σ |x_i|^p` over the window starts.
    pub value_pow_p: f64,
    /// Smallest zero-based start of a maximizing window.
    pub arg_start: usize,
}

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    #[inline]
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    fn value(&self) -> f64 {
        self.sum + self.comp
    }

    fn of(values: impl IntoIterator<Item = f64>) -> Self {
        let mut acc = Self::default();
        for v in values {
            acc.add(v);
        }
        acc
    }
}

/// Calls `visit(j, Σ powers[j..j+n])` for every window start in order.
///
/// The running sum is rebuilt from scratch every `max(n, RESUM_PERIOD)` steps,
/// which bounds drift while keeping the total cost linear in `powers.len()`.
fn for_each_window_sum(powers: &[f64], n: usize, mut visit: impl FnMut(usize, f64)) {
    debug_assert!(n >= 1 && n <= powers.len());
    let starts = powers.len() - n + 1;
    let period = n.max(tol::RESUM_PERIOD);
    let mut acc = CompensatedSum::of(powers[..n].iter().copied());
    visit(0, acc.value().max(0.0));
    for j in 1..starts {
        if j % period == 0 {
            acc = CompensatedSum::of(powers[j..j + n].iter().copied());
        } else {
            acc.add(powers[j + n - 1]);
            acc.add(-powers[j - 1]);
        }
        visit(j, acc.value().max(0.0));
    }
}

fn max_window(powers: &[f64], n: usize, p: f64) -> WindowedNormResult {
    let mut best = f64::NEG_INFINITY;
    for_each_window_sum(powers, n, |_, s| best = best.max(s));

    let cutoff = best - tol::TIE_REL * best;
    let mut arg_start = None;
    for_each_window_sum(powers, n, |j, s| {
        if arg_start.is_none() && s >= cutoff {
            arg_start = Some(j);
        }
    });
    let arg_start = arg_start.unwrap_or(0);

    let value_pow_p = CompensatedSum::of(powers[arg_start..arg_start + n].iter().copied()).value() / n as f64;
    WindowedNormResult {
        value: root(value_pow_p, p),
        value_pow_p,
        arg_start,
    }
}

fn powers_of(x: &SampleSeries, p: f64) -> Vec<f64> {
    x.values().iter().map(|&v| abs_pow(v, p)).collect()
}

fn validate(x: &SampleSeries, spec: WindowSpec) -> Result<()> {
    check_exponent(spec.p)?;
    if spec.n == 0 {
        return Err(Error::ZeroWindow);
    }
    if spec.n > x.len() {
        return Err(Error::WindowTooLong {
            n: spec.n,
            len: x.len(),
        });
    }
    Ok(())
}

/// Maximal windowed p-mean `‖x‖_{∞,p,n}` with its smallest maximizing start.
pub fn windowed_pnorm(x: &SampleSeries, spec: WindowSpec) -> Result<WindowedNormResult> {
    validate(x, spec)?;
    Ok(max_window(&powers_of(x, spec.p), spec.n, spec.p))
}

/// `(1/n) Σ_{i=start}^{start+n-1} |x_i|^p`, summed directly.
pub fn window_mean_pow(x: &SampleSeries, start: usize, n: usize, p: f64) -> Result<f64> {
    check_exponent(p)?;
    if n == 0 {
        return Err(Error::ZeroWindow);
    }
    let end = start
        .checked_add(n)
        .filter(|&e| e <= x.len())
        .ok_or(Error::WindowTooLong { n, len: x.len() })?;
    let acc = CompensatedSum::of(x.values()[start..end].iter().map(|&v| abs_pow(v, p)));
    Ok(acc.value() / n as f64)
}

/// `max_i |x_i|`.
pub fn sup_norm(x: &SampleSeries) -> f64 {
    x.values().iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Length-`len` prefix of the impulse train with period `n`: ones at the
/// zero-based indices `0, n, 2n, ...`, zeros elsewhere, unit spacing.
pub fn impulse_train(n: usize, len: usize) -> Result<SampleSeries> {
    if n < 1 {
        return Err(Error::InvalidPeriod);
    }
    if len < n {
        return Err(Error::LengthTooShort { n, len });
    }
    let values = (0..len).map(|i| if i % n == 0 { 1.0 } else { 0.0 }).collect();
    SampleSeries::from_values(values)
}

fn require_norm_exponent(p: f64) -> Result<()> {
    check_exponent(p)?;
    if p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    Ok(())
}

/// `n^(-1/p) ‖x‖_∞ <= ‖x‖_{∞,p,n} <= ‖x‖_∞`. Requires `p >= 1`.
pub fn check_equivalence_bounds(x: &SampleSeries, spec: WindowSpec) -> Result<TwoSidedCheck> {
    require_norm_exponent(spec.p)?;
    let norm = windowed_pnorm(x, spec)?;
    let sup = sup_norm(x);
    let lower_bound = (spec.n as f64).powf(-spec.p.recip()) * sup;
    let witness = Witness::Window {
        start: norm.arg_start,
        n: spec.n,
    };
    Ok(TwoSidedCheck {
        lower: BoundCheck::at_most("equivalence_lower", lower_bound, norm.value).with_witness(witness),
        upper: BoundCheck::at_most("equivalence_upper", norm.value, sup).with_witness(witness),
    })
}

/// `‖x‖^p_{∞,p,n} <= Σ_l (α_l/n) ‖x‖^p_{∞,p,α_l}` with `n = Σ_l α_l`.
pub fn check_partition_inequality(x: &SampleSeries, p: f64, parts: &[usize]) -> Result<BoundCheck> {
    require_norm_exponent(p)?;
    if parts.is_empty() {
        return Err(Error::InvalidPartition("no parts".into()));
    }
    if parts.contains(&0) {
        return Err(Error::InvalidPartition("parts must be positive".into()));
    }
    let total: usize = parts.iter().sum();
    if total > x.len() {
        return Err(Error::PartitionTooLong { total, len: x.len() });
    }
    let powers = powers_of(x, p);
    let whole = max_window(&powers, total, p);
    let rhs: f64 = parts
        .iter()
        .map(|&a| a as f64 / total as f64 * max_window(&powers, a, p).value_pow_p)
        .sum();
    Ok(
        BoundCheck::at_most("partition_inequality", whole.value_pow_p, rhs).with_witness(Witness::Window {
            start: whole.arg_start,
            n: total,
        }),
    )
}

/// `‖x‖_{∞,p,dn} <= ‖x‖_{∞,p,n}`.
pub fn check_multiple_ordering(x: &SampleSeries, p: f64, n: usize, d: usize) -> Result<BoundCheck> {
    require_norm_exponent(p)?;
    if n == 0 || d == 0 {
        return Err(Error::ZeroWindow);
    }
    let m = n.checked_mul(d).ok_or(Error::WindowTooLong {
        n: usize::MAX,
        len: x.len(),
    })?;
    validate(x, WindowSpec { p, n: m })?;
    let powers = powers_of(x, p);
    let large = max_window(&powers, m, p);
    let small = max_window(&powers, n, p);
    Ok(
        BoundCheck::at_most("divisor_ordering", large.value, small.value).with_witness(Witness::Window {
            start: large.arg_start,
            n: m,
        }),
    )
}

/// `(⌊m/n⌋ + 1) n / m`.
pub fn two_scale_factor(n: usize, m: usize) -> f64 {
    ((m / n + 1) * n) as f64 / m as f64
}

/// `‖x‖^p_{∞,p,m} <= ((⌊m/n⌋+1) n/m) ‖x‖^p_{∞,p,n}` for `n < m`, and the factor is at most 2.
///
/// The extended window of `(⌊m/n⌋+1) n` samples must fit in the series.
pub fn check_two_scale_bound(x: &SampleSeries, p: f64, n: usize, m: usize) -> Result<BoundCheck> {
    require_norm_exponent(p)?;
    if n == 0 {
        return Err(Error::ZeroWindow);
    }
    if n >= m {
        return Err(Error::BadOrder {
            small: n as f64,
            large: m as f64,
        });
    }
    let extended = (m / n + 1) * n;
    if extended > x.len() {
        return Err(Error::WindowTooLong {
            n: extended,
            len: x.len(),
        });
    }
    let factor = two_scale_factor(n, m);
    let powers = powers_of(x, p);
    let large = max_window(&powers, m, p);
    let small = max_window(&powers, n, p);
    Ok(
        BoundCheck::at_most("two_scale_bound", large.value_pow_p, factor * small.value_pow_p)
            .with_factor(factor)
            .with_witness(Witness::Window {
                start: large.arg_start,
                n: m,
            }),
    )
}

/// Tabulates `‖x‖_{∞,p,n}` over a ladder of window sizes.
///
/// Windows are sorted and deduplicated. A row is flagged when its value
/// exceeds the value at some smaller window of the ladder by more than
/// [`tol::TIE_REL`] relative.
pub fn scale_ladder(x: &SampleSeries, p: f64, windows: &[usize]) -> Result<ScaleReport> {
    check_exponent(p)?;
    let mut windows = windows.to_vec();
    windows.sort_unstable();
    windows.dedup();
    if windows.is_empty() {
        return Err(Error::EmptyLadder);
    }
    for &n in &windows {
        validate(x, WindowSpec { p, n })?;
    }
    let powers = powers_of(x, p);
    let results: Vec<WindowedNormResult> = windows.par_iter().map(|&n| max_window(&powers, n, p)).collect();

    let mut running_min = f64::INFINITY;
    let rows = windows
        .iter()
        .zip(results)
        .map(|(&n, r)| {
            let flagged = r.value > running_min * (1.0 + tol::TIE_REL);
            running_min = running_min.min(r.value);
            ScaleRow {
                window_samples: n,
                window_duration: n as f64 * x.dt(),
                value: r.value,
                value_pow_p: r.value_pow_p,
                arg_start: r.arg_start,
                violates_naive_monotonicity: flagged,
            }
        })
        .collect();
    Ok(ScaleReport {
        p,
        source: x.fingerprint(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(v: &[f64]) -> SampleSeries {
        SampleSeries::from_values(v.to_vec()).unwrap()
    }

    fn spec(p: f64, n: usize) -> WindowSpec {
        WindowSpec::new(p, n).unwrap()
    }

    #[test]
    fn zero_sequence() {
        let r = windowed_pnorm(&series(&[0.0, 0.0, 0.0]), spec(1.0, 2)).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.arg_start, 0);
    }

    #[test]
    fn picks_the_pair_of_ones() {
        let r = windowed_pnorm(&series(&[1.0, 0.0, 0.0, 1.0, 1.0, 0.0]), spec(1.0, 2)).unwrap();
        assert_eq!(r.value_pow_p, 1.0);
        assert_eq!(r.value, 1.0);
        assert_eq!(r.arg_start, 3);
    }

    #[test]
    fn impulse_train_window_means() {
        let x = impulse_train(3, 7).unwrap();
        assert_eq!(x.values(), &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0]);
        let at3 = windowed_pnorm(&x, spec(1.0, 3)).unwrap();
        let at4 = windowed_pnorm(&x, spec(1.0, 4)).unwrap();
        assert!((at3.value_pow_p - 1.0 / 3.0).abs() < 1e-15);
        assert!((at4.value_pow_p - 0.5).abs() < 1e-15);
    }

    #[test]
    fn windowed_errors() {
        let x = series(&[1.0, 2.0]);
        assert!(matches!(
            windowed_pnorm(&x, WindowSpec { p: 1.0, n: 3 }),
            Err(Error::WindowTooLong { n: 3, len: 2 })
        ));
        assert!(matches!(
            windowed_pnorm(&x, WindowSpec { p: 0.0, n: 1 }),
            Err(Error::InvalidExponent(_))
        ));
    }

    #[test]
    fn length_one_series() {
        let x = series(&[-2.5]);
        for p in [0.5, 1.0, 2.0, 3.0] {
            let r = windowed_pnorm(&x, spec(p, 1)).unwrap();
            assert!((r.value - 2.5).abs() < 1e-12);
        }
    }

    #[test]
    fn fractional_exponent_is_allowed() {
        let x = series(&[4.0, 0.0, 9.0]);
        let r = windowed_pnorm(&x, spec(0.5, 1)).unwrap();
        assert!((r.value_pow_p - 3.0).abs() < 1e-15);
        assert!((r.value - 9.0).abs() < 1e-12);
        assert_eq!(r.arg_start, 2);
    }

    #[test]
    fn sup_norm_examples() {
        assert_eq!(sup_norm(&series(&[0.0, 0.0])), 0.0);
        assert_eq!(sup_norm(&series(&[-3.0, 2.0])), 3.0);
        assert_eq!(sup_norm(&impulse_train(5, 11).unwrap()), 1.0);
    }

    #[test]
    fn impulse_train_examples() {
        assert_eq!(impulse_train(1, 3).unwrap().values(), &[1.0, 1.0, 1.0]);
        assert_eq!(impulse_train(2, 5).unwrap().values(), &[1.0, 0.0, 1.0, 0.0, 1.0]);
        assert!(matches!(impulse_train(0, 3), Err(Error::InvalidPeriod)));
        assert!(matches!(impulse_train(4, 3), Err(Error::LengthTooShort { .. })));
    }

    #[test]
    fn equivalence_examples() {
        let c = check_equivalence_bounds(&series(&[0.0, 0.0, 0.0]), spec(1.0, 2)).unwrap();
        assert!(c.passed());
        assert_eq!((c.lower.lhs, c.upper.lhs, c.upper.rhs), (0.0, 0.0, 0.0));

        let c = check_equivalence_bounds(&series(&[1.0; 4]), spec(2.0, 2)).unwrap();
        assert!(c.passed());
        assert!((c.lower.lhs - 0.5_f64.sqrt()).abs() < 1e-15);
        assert_eq!(c.upper.lhs, 1.0);
        assert_eq!(c.upper.rhs, 1.0);

        let c = check_equivalence_bounds(&impulse_train(4, 8).unwrap(), spec(1.0, 4)).unwrap();
        assert!(c.passed());
        assert_eq!(c.lower.lhs, 0.25);
        assert_eq!(c.lower.rhs, 0.25);
        assert_eq!(c.upper.rhs, 1.0);
    }

    #[test]
    fn equivalence_rejects_sub_one_exponent() {
        assert!(check_equivalence_bounds(&series(&[1.0]), WindowSpec { p: 0.5, n: 1 }).is_err());
    }

    #[test]
    fn partition_examples() {
        let x = series(&[3.0, -1.0, 4.0, 1.0, -5.0]);
        let c = check_partition_inequality(&x, 2.0, &[4]).unwrap();
        assert!(c.passed);
        assert_eq!(c.lhs, c.rhs);

        let c = check_partition_inequality(&impulse_train(3, 9).unwrap(), 1.0, &[3, 3]).unwrap();
        assert!(c.passed);
        assert!((c.lhs - 1.0 / 3.0).abs() < 1e-15);
        assert!((c.rhs - 1.0 / 3.0).abs() < 1e-15);

        let c = check_partition_inequality(&series(&[1.0, 0.0, 0.0, 0.0]), 1.0, &[1, 3]).unwrap();
        assert!(c.passed);
        assert_eq!(c.lhs, 0.25);
        assert!((c.rhs - 0.5).abs() < 1e-15);
    }

    #[test]
    fn partition_errors() {
        let x = series(&[1.0, 2.0, 3.0]);
        assert!(matches!(
            check_partition_inequality(&x, 1.0, &[2, 2]),
            Err(Error::PartitionTooLong { total: 4, len: 3 })
        ));
        assert!(matches!(
            check_partition_inequality(&x, 1.0, &[]),
            Err(Error::InvalidPartition(_))
        ));
        assert!(matches!(
            check_partition_inequality(&x, 1.0, &[1, 0]),
            Err(Error::InvalidPartition(_))
        ));
    }

    #[test]
    fn multiple_ordering_examples() {
        let x = series(&[2.0, -7.0, 1.0]);
        let c = check_multiple_ordering(&x, 1.5, 2, 1).unwrap();
        assert!(c.passed);
        assert_eq!(c.lhs, c.rhs);

        let c = check_multiple_ordering(&impulse_train(3, 12).unwrap(), 1.0, 3, 2).unwrap();
        assert!(c.passed);
        assert!((c.lhs - 1.0 / 3.0).abs() < 1e-15);
        assert!((c.rhs - 1.0 / 3.0).abs() < 1e-15);

        let c = check_multiple_ordering(&series(&[5.0, 0.0, 0.0, 0.0, 0.0, 0.0]), 1.0, 2, 3).unwrap();
        assert!(c.passed);
        assert!((c.lhs - 5.0 / 6.0).abs() < 1e-15);
        assert_eq!(c.rhs, 2.5);

        assert!(matches!(
            check_multiple_ordering(&x, 1.0, 2, 2),
            Err(Error::WindowTooLong { .. })
        ));
    }

    #[test]
    fn two_scale_examples() {
        assert_eq!(two_scale_factor(2, 4), 1.5);

        let c = check_two_scale_bound(&impulse_train(3, 10).unwrap(), 1.0, 3, 4).unwrap();
        assert!(c.passed);
        assert_eq!(c.factor, Some(1.5));
        assert_eq!(c.lhs, 0.5);
        assert!((c.rhs - 0.5).abs() < 1e-15);

        let c = check_two_scale_bound(&series(&[1.0, 1.0, 0.0]), 1.0, 1, 2).unwrap();
        assert!(c.passed);
        assert_eq!(c.lhs, 1.0);
        assert_eq!(c.rhs, 1.5);
    }

    #[test]
    fn two_scale_errors() {
        let x = series(&[1.0; 5]);
        assert!(matches!(
            check_two_scale_bound(&x, 1.0, 3, 3),
            Err(Error::BadOrder { .. })
        ));
        assert!(matches!(
            check_two_scale_bound(&x, 1.0, 3, 2),
            Err(Error::BadOrder { .. })
        ));
        // (⌊4/3⌋ + 1) * 3 = 6 > 5
        assert!(matches!(
            check_two_scale_bound(&x, 1.0, 3, 4),
            Err(Error::WindowTooLong { n: 6, len: 5 })
        ));
    }

    #[test]
    fn ladder_flags_the_non_multiple() {
        let report = scale_ladder(&impulse_train(3, 12).unwrap(), 1.0, &[6, 3, 4]).unwrap();
        let got: Vec<_> = report
            .rows
            .iter()
            .map(|r| (r.window_samples, r.value_pow_p, r.violates_naive_monotonicity))
            .collect();
        assert_eq!(got.len(), 3);
        assert_eq!(got[0].0, 3);
        assert!((got[0].1 - 1.0 / 3.0).abs() < 1e-15 && !got[0].2);
        assert_eq!((got[1].0, got[1].1, got[1].2), (4, 0.5, true));
        assert!((got[2].1 - 1.0 / 3.0).abs() < 1e-15 && !got[2].2);
    }

    #[test]
    fn ladder_constant_and_singleton() {
        let x = series(&[-2.0; 10]);
        let report = scale_ladder(&x, 3.0, &[1, 2, 5, 10]).unwrap();
        assert!(report.rows.iter().all(|r| !r.violates_naive_monotonicity));
        assert!(report.rows.iter().all(|r| (r.value - 2.0).abs() < 1e-12));

        let report = scale_ladder(&x, 1.0, &[4]).unwrap();
        assert_eq!(report.rows.len(), 1);
        assert!(!report.rows[0].violates_naive_monotonicity);

        assert!(matches!(scale_ladder(&x, 1.0, &[]), Err(Error::EmptyLadder)));
        assert!(matches!(
            scale_ladder(&x, 1.0, &[2, 11]),
            Err(Error::WindowTooLong { .. })
        ));
    }

    #[test]
    fn resum_boundary_is_seamless() {
        // Crosses several rebuild points of the running sum.
        let n = 3;
        let len = 3 * tol::RESUM_PERIOD + 17;
        let values: Vec<f64> = (0..len).map(|i| ((i * 7919) % 101) as f64 * 0.37 - 18.0).collect();
        let powers: Vec<f64> = values.iter().map(|v| v.abs()).collect();
        let mut checked = 0;
        for_each_window_sum(&powers, n, |j, s| {
            if j % tol::RESUM_PERIOD <= 1 || j + 1 == len - n + 1 {
                let direct: f64 = powers[j..j + n].iter().sum();
                assert!(tol::rel_eq(s, direct, 1e-12), "j={j}: {s} vs {direct}");
                checked += 1;
            }
        });
        assert!(checked > 6);
    }

    #[test]
    fn window_mean_pow_bounds() {
        let x = series(&[1.0, 2.0, 3.0]);
        assert_eq!(window_mean_pow(&x, 1, 2, 1.0).unwrap(), 2.5);
        assert!(window_mean_pow(&x, 2, 2, 1.0).is_err());
        assert!(window_mean_pow(&x, usize::MAX, 2, 1.0).is_err());
    }
}
