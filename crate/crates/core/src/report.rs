use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleRow {
    pub window_samples: usize,
    /// `window_samples * dt`.
    pub window_duration: f64,
    pub value: f64,
    pub value_pow_p: f64,
    pub arg_start: usize,
    pub violates_naive_monotonicity: bool,
}

/// Maximal p-means across a ladder of window sizes, ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleReport {
    pub p: f64,
    pub source: String,
    pub rows: Vec<ScaleRow>,
}

impl ScaleReport {
    pub fn flagged_windows(&self) -> Vec<usize> {
        self.rows
            .iter()
            .filter(|r| r.violates_naive_monotonicity)
            .map(|r| r.window_samples)
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("window_samples,window_duration,value,value_pow_p,arg_start,violates_naive_monotonicity\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.window_samples, r.window_duration, r.value, r.value_pow_p, r.arg_start, r.violates_naive_monotonicity
            );
        }
        out
    }

    /// Two-column `window_size,value` data for plotting.
    pub fn to_plot_csv(&self) -> String {
        let mut out = String::from("window_size,value\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{}", r.window_samples, r.value);
        }
        out
    }
}
