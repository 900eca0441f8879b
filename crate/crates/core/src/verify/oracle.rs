//! Slow reference implementations. They share no code with the sweeps they
//! check, only the tie tolerance.

use crate::continuous::IntervalNormResult;
use crate::discrete::WindowedNormResult;
use crate::error::{Error, Result};
use crate::series::{SampleSeries, WindowSpec};
use crate::step::StepFunction;
use crate::tol;

/// Literal `O(N·n)` transcription of `‖x‖_{∞,p,n}`: every window is summed
/// from scratch.
pub fn brute_force_windowed_pnorm(x: &SampleSeries, spec: WindowSpec) -> Result<WindowedNormResult> {
    let WindowSpec { p, n } = spec;
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::InvalidExponent(p));
    }
    if n == 0 {
        return Err(Error::ZeroWindow);
    }
    let values = x.values();
    if n > values.len() {
        return Err(Error::WindowTooLong { n, len: values.len() });
    }
    let sums: Vec<f64> = (0..=values.len() - n)
        .map(|j| values[j..j + n].iter().map(|v| v.abs().powf(p)).sum())
        .collect();
    let best = sums.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let arg_start = sums
        .iter()
        .position(|&s| s >= best - tol::TIE_REL * best)
        .expect("at least one window");
    let value_pow_p = sums[arg_start] / n as f64;
    Ok(WindowedNormResult {
        value: value_pow_p.powf(1.0 / p),
        value_pow_p,
        arg_start,
    })
}

/// `∫_a^b |f|^p`, visiting every piece.
fn mass_between(f: &StepFunction, p: f64, a: f64, b: f64) -> f64 {
    let bps = f.breakpoints();
    f.values()
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let overlap = (bps[k + 1].min(b) - bps[k].max(a)).max(0.0);
            v.abs().powf(p) * overlap
        })
        .sum()
}

/// Most grid points a single oracle call may visit.
const MAX_GRID_POINTS: f64 = 1e8;

/// Maximum of `(1/T) ∫_t^{t+T} |f|^p` over `t` on a uniform grid spanning
/// `[b_0 - T, b_K]` (both ends included).
///
/// This is a lower bound for the exact maximum; see [`grid_gap_bound`].
pub fn grid_oracle_interval_pnorm(f: &StepFunction, p: f64, length: f64, grid_step: f64) -> Result<f64> {
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::InvalidExponent(p));
    }
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::InvalidLength(length));
    }
    if !(grid_step.is_finite() && grid_step > 0.0) {
        return Err(Error::InvalidGrid(grid_step));
    }
    let (b0, bk) = f.support();
    let start = b0 - length;
    let steps = ((bk - start) / grid_step).ceil();
    if steps > MAX_GRID_POINTS {
        return Err(Error::InvalidGrid(grid_step));
    }
    let steps = steps as u64;
    let best = (0..=steps)
        .map(|i| (start + i as f64 * grid_step).min(bk))
        .map(|t| mass_between(f, p, t, t + length))
        .fold(0.0_f64, f64::max);
    Ok(best / length)
}

/// `max|c_k|^p · grid_step / T`: the objective is Lipschitz in `t` with
/// constant `max|c_k|^p / T`, and every `t` lies within one step of the grid.
pub fn grid_gap_bound(f: &StepFunction, p: f64, length: f64, grid_step: f64) -> f64 {
    f.max_abs().powf(p) * grid_step / length
}

/// Re-integrates the interval reported by `interval_pnorm`.
pub fn reintegrate(f: &StepFunction, p: f64, length: f64, r: &IntervalNormResult) -> f64 {
    mass_between(f, p, r.arg_left, r.arg_left + length) / length
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuous::{bump_train, interval_pnorm, single_bump};
    use crate::discrete::{impulse_train, windowed_pnorm};

    #[test]
    fn brute_force_examples() {
        let x = SampleSeries::from_values(vec![1.0, 0.0, 0.0, 1.0, 1.0, 0.0]).unwrap();
        let spec = WindowSpec::new(1.0, 2).unwrap();
        let r = brute_force_windowed_pnorm(&x, spec).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r, windowed_pnorm(&x, spec).unwrap());

        let zero = SampleSeries::from_values(vec![0.0; 5]).unwrap();
        assert_eq!(
            brute_force_windowed_pnorm(&zero, WindowSpec::new(2.0, 3).unwrap())
                .unwrap()
                .value,
            0.0
        );

        let r = brute_force_windowed_pnorm(&impulse_train(4, 9).unwrap(), WindowSpec::new(2.0, 4).unwrap()).unwrap();
        assert_eq!(r.value_pow_p, 0.25);
    }

    #[test]
    fn brute_force_errors() {
        let x = SampleSeries::from_values(vec![1.0]).unwrap();
        assert!(brute_force_windowed_pnorm(&x, WindowSpec { p: 1.0, n: 2 }).is_err());
        assert!(brute_force_windowed_pnorm(&x, WindowSpec { p: -1.0, n: 1 }).is_err());
    }

    #[test]
    fn grid_zero_function() {
        let f = StepFunction::indicator(0.0, 1.0, 0.0).unwrap();
        assert_eq!(grid_oracle_interval_pnorm(&f, 1.0, 0.5, 0.1).unwrap(), 0.0);
        assert_eq!(grid_oracle_interval_pnorm(&f, 1.0, 0.5, 7.0).unwrap(), 0.0);
    }

    #[test]
    fn grid_single_bump() {
        let f = single_bump(0.5, 1.0).unwrap();
        let g = grid_oracle_interval_pnorm(&f, 1.0, 1.0, 1e-4).unwrap();
        assert!(g <= 1.0 + 1e-12);
        assert!(1.0 - g <= 2e-4 * 2.0);
    }

    #[test]
    fn grid_bump_train() {
        let f = bump_train(1.0, 2.5, 1.0).unwrap().f;
        let step = 1e-4;
        let g = grid_oracle_interval_pnorm(&f, 1.0, 2.5, step).unwrap();
        let exact = interval_pnorm(&f, 1.0, 2.5).unwrap().value_pow_p;
        assert!(g <= exact * (1.0 + 1e-12));
        assert!(exact - g <= grid_gap_bound(&f, 1.0, 2.5, step) + 1e-12);
        assert!((g - 1.2).abs() <= grid_gap_bound(&f, 1.0, 2.5, step) + 1e-12);
    }

    #[test]
    fn grid_rejects_bad_step() {
        let f = single_bump(1.0, 1.0).unwrap();
        assert!(matches!(
            grid_oracle_interval_pnorm(&f, 1.0, 1.0, 0.0),
            Err(Error::InvalidGrid(_))
        ));
        assert!(matches!(
            grid_oracle_interval_pnorm(&f, 1.0, 1.0, 1e-12),
            Err(Error::InvalidGrid(_))
        ));
    }
}
