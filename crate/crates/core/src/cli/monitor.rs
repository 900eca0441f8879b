//! Multi-scale limit monitoring over a recorded series.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::discrete::windowed_pnorm;
use crate::error::{Error, Result};
use crate::series::{SampleSeries, WindowSpec};
use crate::tol;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Limit {
    /// Window length in seconds.
    pub window: f64,
    /// Largest allowed maximal p-mean over any window of that length.
    pub limit: f64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonitorConfig {
    pub p: f64,
    pub limits: Vec<Limit>,
}

impl MonitorConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: MonitorConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p.is_finite() && self.p > 0.0) {
            return Err(Error::InvalidExponent(self.p));
        }
        if self.limits.is_empty() {
            return Err(Error::InvalidConfig("no limits".into()));
        }
        let mut seen = HashSet::new();
        for l in &self.limits {
            if !(l.window.is_finite() && l.window > 0.0) {
                return Err(Error::InvalidConfig(format!("`{}`: window must be positive", l.label)));
            }
            if !(l.limit.is_finite() && l.limit >= 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "`{}`: limit must be nonnegative",
                    l.label
                )));
            }
            if !seen.insert(l.window.to_bits()) {
                return Err(Error::InvalidConfig(format!("duplicate window {}", l.window)));
            }
        }
        Ok(())
    }
}

/// `round(window / dt)`, refusing roundings of more than 1%.
pub fn window_to_samples(window: f64, dt: f64) -> Result<usize> {
    let ratio = window / dt;
    let n = ratio.round();
    if n < 1.0 || (n - ratio).abs() > tol::WINDOW_CONVERSION_REL * ratio {
        return Err(Error::WindowConversion { window, dt, ratio });
    }
    Ok(n as usize)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitResult {
    pub label: String,
    pub window: f64,
    pub window_samples: usize,
    pub limit: f64,
    pub value: f64,
    pub arg_start: usize,
    /// `arg_start * dt`, relative to the first sample.
    pub start_time: f64,
    pub violated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonitorReport {
    pub p: f64,
    pub source: String,
    pub results: Vec<LimitResult>,
    pub violations: usize,
}

impl MonitorReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("label,window,window_samples,limit,value,arg_start,start_time,violated\n");
        for r in &self.results {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.label, r.window, r.window_samples, r.limit, r.value, r.arg_start, r.start_time, r.violated
            );
        }
        out
    }
}

/// A limit is violated when the maximal windowed p-mean exceeds it.
pub fn evaluate_monitor(x: &SampleSeries, config: &MonitorConfig) -> Result<MonitorReport> {
    config.validate()?;
    let mut results = Vec::with_capacity(config.limits.len());
    for l in &config.limits {
        let n = window_to_samples(l.window, x.dt())?;
        let r = windowed_pnorm(x, WindowSpec::new(config.p, n)?)?;
        results.push(LimitResult {
            label: l.label.clone(),
            window: l.window,
            window_samples: n,
            limit: l.limit,
            value: r.value,
            arg_start: r.arg_start,
            start_time: r.arg_start as f64 * x.dt(),
            violated: r.value > l.limit,
        });
    }
    let violations = results.iter().filter(|r| r.violated).count();
    Ok(MonitorReport {
        p: config.p,
        source: x.fingerprint(),
        results,
        violations,
    })
}
