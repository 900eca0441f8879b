//! Random inputs for the campaigns.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::continuous::bump_train;
use crate::discrete::impulse_train;
use crate::series::SampleSeries;
use crate::step::StepFunction;
use crate::tol;

/// Size limits for generated inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SizeBounds {
    /// Longest generated series.
    pub max_len: usize,
    /// Most pieces in a generated step function.
    pub max_pieces: usize,
    /// Series values are drawn from `[-series_amplitude, series_amplitude]`.
    pub series_amplitude: f64,
    /// Step values are drawn from `[-step_amplitude, step_amplitude]`.
    pub step_amplitude: f64,
    /// Breakpoints are drawn from `[0, support_span]`.
    pub support_span: f64,
}

impl Default for SizeBounds {
    fn default() -> Self {
        Self {
            max_len: 200,
            max_pieces: 50,
            series_amplitude: 10.0,
            step_amplitude: 5.0,
            support_span: 10.0,
        }
    }
}

pub const EXPONENTS: [f64; 4] = [1.0, 1.5, 2.0, 3.0];

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for one trial; depends only on `(seed, trial)`.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    splitmix64(seed ^ splitmix64(trial))
}

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(seed, trial))
}

pub fn exponent(rng: &mut impl Rng) -> f64 {
    EXPONENTS[rng.random_range(0..EXPONENTS.len())]
}

/// Uniform values, a 0/1 Bernoulli series, or an impulse train, with length
/// in `[min_len, max_len]`.
pub fn series(rng: &mut impl Rng, bounds: &SizeBounds, min_len: usize) -> SampleSeries {
    let max_len = bounds.max_len.max(min_len);
    let len = rng.random_range(min_len..=max_len);
    match rng.random_range(0..5) {
        0..=2 => uniform_series(rng, len, bounds.series_amplitude),
        3 => bernoulli_series(rng, len),
        _ => {
            let n = rng.random_range(1..=len.min(12));
            impulse_train(n, len).expect("n <= len")
        }
    }
}

pub fn uniform_series(rng: &mut impl Rng, len: usize, amplitude: f64) -> SampleSeries {
    let values = (0..len).map(|_| rng.random_range(-amplitude..=amplitude)).collect();
    SampleSeries::from_values(values).expect("finite values")
}

pub fn bernoulli_series(rng: &mut impl Rng, len: usize) -> SampleSeries {
    let density = rng.random_range(0.05..0.6);
    let values = (0..len)
        .map(|_| if rng.random_bool(density) { 1.0 } else { 0.0 })
        .collect();
    SampleSeries::from_values(values).expect("finite values")
}

/// Random composition of `total` into positive parts.
pub fn partition(rng: &mut impl Rng, total: usize) -> Vec<usize> {
    let mut parts = Vec::new();
    let mut left = total;
    while left > 0 {
        let a = rng.random_range(1..=left);
        parts.push(a);
        left -= a;
    }
    parts
}

/// Step function with up to `max_pieces` pieces on sorted uniform breakpoints,
/// occasionally replaced by a bump train.
pub fn step_function(rng: &mut impl Rng, bounds: &SizeBounds) -> StepFunction {
    if rng.random_range(0..6) == 0 {
        let (short, long) = counterexample_scales(rng);
        return bump_train(short, long, exponent(rng)).expect("valid scales").f;
    }
    uniform_step_function(rng, bounds, bounds.max_pieces)
}

pub fn uniform_step_function(rng: &mut impl Rng, bounds: &SizeBounds, max_pieces: usize) -> StepFunction {
    let pieces = rng.random_range(1..=max_pieces.max(1));
    let grid = sorted_breakpoints(rng, bounds, pieces);
    breakpoint_grid_function(rng, bounds, &grid)
}

/// Sorted distinct uniforms from `[0, support_span]`.
pub fn sorted_breakpoints(rng: &mut impl Rng, bounds: &SizeBounds, pieces: usize) -> Vec<f64> {
    loop {
        let mut bps: Vec<f64> = (0..=pieces)
            .map(|_| rng.random_range(0.0..bounds.support_span))
            .collect();
        bps.sort_by(f64::total_cmp);
        if bps.windows(2).all(|w| w[0] < w[1]) {
            return bps;
        }
    }
}

/// Random values on a fixed breakpoint grid.
pub fn breakpoint_grid_function(rng: &mut impl Rng, bounds: &SizeBounds, breakpoints: &[f64]) -> StepFunction {
    let a = bounds.step_amplitude;
    let values = (1..breakpoints.len()).map(|_| rng.random_range(-a..=a)).collect();
    StepFunction::new(breakpoints.to_vec(), values).expect("valid grid")
}

/// `0 < T < S` with `S/T` not an integer.
pub fn counterexample_scales(rng: &mut impl Rng) -> (f64, f64) {
    loop {
        let short = rng.random_range(0.1..5.0);
        let long = short * rng.random_range(1.01..8.0);
        if !tol::is_integer_ratio(long / short) && long > short {
            return (short, long);
        }
    }
}

/// Positive length comparable to the generated supports.
pub fn length(rng: &mut impl Rng, bounds: &SizeBounds) -> f64 {
    rng.random_range(0.01..bounds.support_span * 0.6)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trial_seeds_are_distinct_and_stable() {
        assert_eq!(trial_seed(42, 7), trial_seed(42, 7));
        assert_ne!(trial_seed(42, 7), trial_seed(42, 8));
        assert_ne!(trial_seed(42, 7), trial_seed(43, 7));
    }

    #[test]
    fn partitions_sum_to_total() {
        let mut rng = trial_rng(1, 2);
        for total in 1..50 {
            let parts = partition(&mut rng, total);
            assert_eq!(parts.iter().sum::<usize>(), total);
            assert!(parts.iter().all(|&a| a >= 1));
        }
    }

    #[test]
    fn generated_series_respect_bounds() {
        let bounds = SizeBounds::default();
        let mut rng = trial_rng(9, 0);
        for _ in 0..200 {
            let x = series(&mut rng, &bounds, 3);
            assert!((3..=200).contains(&x.len()));
            assert!(x.values().iter().all(|v| v.abs() <= 10.0));
        }
    }
}
