//! Compactly supported piecewise-constant functions on the real line.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::abs_pow;

/// `f(x) = values[k]` on `(breakpoints[k], breakpoints[k+1])`, zero outside
/// `(breakpoints[0], breakpoints[K])`.
///
/// Values at the breakpoints themselves are irrelevant: every quantity computed
/// from a step function is an integral. Adjacent pieces with equal values are
/// merged on construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        validate_parts(&breakpoints, &values)?;
        let (breakpoints, values) = merge_equal_pieces(&breakpoints, &values);
        Ok(Self { breakpoints, values })
    }

    /// Constant `value` on `(left, right)`.
    pub fn indicator(left: f64, right: f64, value: f64) -> Result<Self> {
        Self::new(vec![left, right], vec![value])
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn pieces(&self) -> usize {
        self.values.len()
    }

    /// `(b_0, b_K)`.
    pub fn support(&self) -> (f64, f64) {
        (self.breakpoints[0], self.breakpoints[self.breakpoints.len() - 1])
    }

    pub fn support_length(&self) -> f64 {
        let (a, b) = self.support();
        b - a
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// `x ↦ f(x - delta)`.
    pub fn shifted(&self, delta: f64) -> Result<Self> {
        Self::new(
            self.breakpoints.iter().map(|b| b + delta).collect(),
            self.values.clone(),
        )
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.breakpoints.clone(), self.values.iter().map(|v| c * v).collect())
    }

    /// Pointwise sum on the union of both breakpoint sets.
    pub fn add(&self, other: &StepFunction) -> Result<Self> {
        let mut grid: Vec<f64> = self.breakpoints.iter().chain(&other.breakpoints).copied().collect();
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let values = grid
            .windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                self.eval(mid) + other.eval(mid)
            })
            .collect();
        Self::new(grid, values)
    }

    /// Value on the open piece containing `x`; zero outside the support.
    /// At a breakpoint the piece to the right is used.
    pub fn eval(&self, x: f64) -> f64 {
        let (a, b) = self.support();
        if !(a..b).contains(&x) {
            return 0.0;
        }
        let k = self.breakpoints.partition_point(|&bp| bp <= x) - 1;
        self.values[k]
    }

    /// `∫_a^b |f|^p` by summing the overlap with each piece.
    pub fn integral_abs_pow(&self, a: f64, b: f64, p: f64) -> f64 {
        integrate_parts(&self.breakpoints, &self.values, p, a, b)
    }

    /// `breakpoint,value` CSV with `K + 1` rows; the last value field is empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("breakpoint,value\n");
        for (b, v) in self.breakpoints.iter().zip(&self.values) {
            let _ = writeln!(out, "{b},{v}");
        }
        let _ = writeln!(out, "{},", self.breakpoints[self.breakpoints.len() - 1]);
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(text.as_bytes());
        let headers = reader.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
        if headers.len() < 2 || &headers[0] != "breakpoint" || &headers[1] != "value" {
            return Err(Error::Parse("expected header `breakpoint,value`".into()));
        }
        let mut breakpoints = Vec::new();
        let mut values = Vec::new();
        let mut last_empty = false;
        for (row, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::Parse(e.to_string()))?;
            if last_empty {
                return Err(Error::Parse(format!(
                    "row {}: data after the closing breakpoint",
                    row + 1
                )));
            }
            let b = parse_f64(record.get(0).unwrap_or(""), row)?;
            breakpoints.push(b);
            match record.get(1).unwrap_or("") {
                "" => last_empty = true,
                v => values.push(parse_f64(v, row)?),
            }
        }
        if !last_empty {
            return Err(Error::Parse("last row must have an empty value field".into()));
        }
        Self::new(breakpoints, values)
    }
}

pub(crate) fn integrate_parts(breakpoints: &[f64], values: &[f64], p: f64, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let first = breakpoints.partition_point(|&bp| bp <= a).saturating_sub(1);
    let mut total = 0.0;
    for k in first..values.len() {
        let (lo, hi) = (breakpoints[k], breakpoints[k + 1]);
        if lo >= b {
            break;
        }
        let overlap = hi.min(b) - lo.max(a);
        if overlap > 0.0 {
            total += abs_pow(values[k], p) * overlap;
        }
    }
    total
}

fn parse_f64(field: &str, row: usize) -> Result<f64> {
    field
        .parse()
        .map_err(|_| Error::Parse(format!("row {}: `{field}` is not a number", row + 1)))
}

pub(crate) fn validate_parts(breakpoints: &[f64], values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::EmptySupport);
    }
    if breakpoints.len() != values.len() + 1 {
        return Err(Error::InvalidStepFunction(format!(
            "{} breakpoints for {} pieces",
            breakpoints.len(),
            values.len()
        )));
    }
    if breakpoints.iter().chain(values).any(|v| !v.is_finite()) {
        return Err(Error::InvalidStepFunction("non-finite breakpoint or value".into()));
    }
    if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidStepFunction(
            "breakpoints must be strictly increasing".into(),
        ));
    }
    Ok(())
}

fn merge_equal_pieces(breakpoints: &[f64], values: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut bps = vec![breakpoints[0]];
    let mut vals: Vec<f64> = Vec::with_capacity(values.len());
    for (k, &v) in values.iter().enumerate() {
        if vals.last() == Some(&v) {
            *bps.last_mut().unwrap() = breakpoints[k + 1];
        } else {
            vals.push(v);
            bps.push(breakpoints[k + 1]);
        }
    }
    (bps, vals)
}
