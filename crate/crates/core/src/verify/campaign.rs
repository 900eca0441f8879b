//! Seeded randomized campaigns over every check.
//!
//! Each trial draws its inputs from its own generator seeded by
//! `(seed, trial)`, so a campaign's report does not depend on how trials are
//! scheduled across threads, and any failure is reproducible with
//! [`run_trial`].

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::check::BoundCheck;
use crate::continuous::{
    bump_train, check_bump_train, check_multiple_ordering_cont, check_partition_inequality_cont,
    check_reverse_counterexample, check_two_scale_bound_cont, interval_pnorm,
};
use crate::discrete::{
    check_equivalence_bounds, check_multiple_ordering, check_partition_inequality, check_two_scale_bound,
    impulse_train, windowed_pnorm,
};
use crate::error::{Error, Result};
use crate::series::{SampleSeries, WindowSpec};
use crate::step::StepFunction;
use crate::tol;
use crate::verify::gen::{self, SizeBounds};
use crate::verify::oracle::{brute_force_windowed_pnorm, grid_gap_bound, grid_oracle_interval_pnorm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    EquivalenceBounds,
    PartitionInequality,
    DivisorOrdering,
    TwoScaleBound,
    NormLaws,
    OracleAgreement,
    PartitionInequalityCont,
    DivisorOrderingCont,
    TwoScaleBoundCont,
    NormLawsCont,
    BumpTrain,
    ReverseCounterexample,
    GridOracle,
    NaiveMonotonicity,
    NaiveMonotonicityCont,
}

impl CheckKind {
    pub const ALL: [CheckKind; 15] = [
        CheckKind::EquivalenceBounds,
        CheckKind::PartitionInequality,
        CheckKind::DivisorOrdering,
        CheckKind::TwoScaleBound,
        CheckKind::NormLaws,
        CheckKind::OracleAgreement,
        CheckKind::PartitionInequalityCont,
        CheckKind::DivisorOrderingCont,
        CheckKind::TwoScaleBoundCont,
        CheckKind::NormLawsCont,
        CheckKind::BumpTrain,
        CheckKind::ReverseCounterexample,
        CheckKind::GridOracle,
        CheckKind::NaiveMonotonicity,
        CheckKind::NaiveMonotonicityCont,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::EquivalenceBounds => "equivalence_bounds",
            CheckKind::PartitionInequality => "partition_inequality",
            CheckKind::DivisorOrdering => "divisor_ordering",
            CheckKind::TwoScaleBound => "two_scale_bound",
            CheckKind::NormLaws => "norm_laws",
            CheckKind::OracleAgreement => "oracle_agreement",
            CheckKind::PartitionInequalityCont => "partition_inequality_cont",
            CheckKind::DivisorOrderingCont => "divisor_ordering_cont",
            CheckKind::TwoScaleBoundCont => "two_scale_bound_cont",
            CheckKind::NormLawsCont => "norm_laws_cont",
            CheckKind::BumpTrain => "bump_train",
            CheckKind::ReverseCounterexample => "reverse_counterexample",
            CheckKind::GridOracle => "grid_oracle",
            CheckKind::NaiveMonotonicity => "naive_monotonicity",
            CheckKind::NaiveMonotonicityCont => "naive_monotonicity_cont",
        }
    }

    /// Proved statements. Violations of the others are findings, not failures.
    pub fn theorem_backed(self) -> bool {
        !matches!(self, CheckKind::NaiveMonotonicity | CheckKind::NaiveMonotonicityCont)
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownCheck(s.to_owned()))
    }
}

/// Result of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub fingerprint: String,
    pub checks: Vec<BoundCheck>,
    /// Observed ratio of the large-scale to the small-scale p-th power, for
    /// the two-scale checks.
    pub ratio: Option<f64>,
    /// Whether the input was a planted counterexample.
    pub injected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub fingerprint: String,
    pub check: BoundCheck,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CampaignReport {
    pub check: CheckKind,
    pub seed: u64,
    pub trials: u64,
    /// Violations of proved statements.
    pub failures: Vec<TrialRecord>,
    /// Violations of the naive monotonicity claim.
    pub findings: Vec<TrialRecord>,
    /// Trials whose input was a planted counterexample.
    pub injected: u64,
    pub max_observed_ratio: Option<f64>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl PartialEq for CampaignReport {
    /// Ignores `elapsed`.
    fn eq(&self, other: &Self) -> bool {
        self.check == other.check
            && self.seed == other.seed
            && self.trials == other.trials
            && self.failures == other.failures
            && self.findings == other.findings
            && self.injected == other.injected
            && self.max_observed_ratio == other.max_observed_ratio
    }
}

impl CampaignReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// One JSON object per failure and finding, then a summary object.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for (kind, records) in [("failure", &self.failures), ("finding", &self.findings)] {
            for r in records {
                let line = json!({
                    "kind": kind,
                    "check": self.check,
                    "trial": r.trial,
                    "fingerprint": r.fingerprint,
                    "result": r.check,
                });
                out.push_str(&line.to_string());
                out.push('\n');
            }
        }
        let summary = json!({
            "kind": "summary",
            "check": self.check,
            "theorem_backed": self.check.theorem_backed(),
            "seed": self.seed,
            "trials": self.trials,
            "failures": self.failures.len(),
            "findings": self.findings.len(),
            "injected": self.injected,
            "max_observed_ratio": self.max_observed_ratio,
            "elapsed_secs": self.elapsed.as_secs_f64(),
            "passed": self.passed(),
        });
        out.push_str(&summary.to_string());
        out.push('\n');
        out
    }
}

/// Runs `trials` seeded trials of `check`, sharded across threads.
pub fn run_campaign(check: CheckKind, trials: u64, seed: u64, bounds: &SizeBounds) -> Result<CampaignReport> {
    if trials == 0 {
        return Err(Error::InvalidConfig("a campaign needs at least one trial".into()));
    }
    let started = Instant::now();
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(check, seed, t, bounds))
        .collect::<Result<_>>()?;

    let mut report = CampaignReport {
        check,
        seed,
        trials,
        failures: Vec::new(),
        findings: Vec::new(),
        injected: 0,
        max_observed_ratio: None,
        elapsed: Duration::ZERO,
    };
    for (trial, outcome) in (0..trials).zip(outcomes) {
        report.injected += u64::from(outcome.injected);
        if let Some(r) = outcome.ratio {
            report.max_observed_ratio = Some(report.max_observed_ratio.map_or(r, |m: f64| m.max(r)));
        }
        let sink = if check.theorem_backed() {
            &mut report.failures
        } else {
            &mut report.findings
        };
        for c in outcome.checks.into_iter().filter(|c| !c.passed) {
            sink.push(TrialRecord {
                trial,
                fingerprint: outcome.fingerprint.clone(),
                check: c,
            });
        }
    }
    report.elapsed = started.elapsed();
    Ok(report)
}

/// Re-runs a single trial exactly as [`run_campaign`] does.
pub fn run_trial(check: CheckKind, seed: u64, trial: u64, bounds: &SizeBounds) -> Result<TrialOutcome> {
    let mut rng = gen::trial_rng(seed, trial);
    let rng = &mut rng;
    let mut fp = format!(
        "seed={seed} trial={trial} subseed={:#018x}",
        gen::trial_seed(seed, trial)
    );
    let mut ratio = None;
    let mut injected = false;

    let checks = match check {
        CheckKind::EquivalenceBounds => {
            let x = gen::series(rng, bounds, 1);
            let p = gen::exponent(rng);
            let n = rng.random_range(1..=x.len());
            describe_series(&mut fp, &x, &[("p", p), ("n", n as f64)]);
            let c = check_equivalence_bounds(&x, WindowSpec::new(p, n)?)?;
            vec![c.lower, c.upper]
        }
        CheckKind::PartitionInequality => {
            let x = gen::series(rng, bounds, 1);
            let p = gen::exponent(rng);
            let total = rng.random_range(1..=x.len());
            let parts = gen::partition(rng, total);
            describe_series(&mut fp, &x, &[("p", p), ("n", total as f64)]);
            fp.push_str(&format!(" parts={parts:?}"));
            vec![check_partition_inequality(&x, p, &parts)?]
        }
        CheckKind::DivisorOrdering => {
            let x = gen::series(rng, bounds, 1);
            let p = gen::exponent(rng);
            let n = rng.random_range(1..=x.len());
            let d = rng.random_range(1..=x.len() / n);
            describe_series(&mut fp, &x, &[("p", p), ("n", n as f64), ("d", d as f64)]);
            vec![check_multiple_ordering(&x, p, n, d)?]
        }
        CheckKind::TwoScaleBound => {
            let x = gen::series(rng, bounds, 3);
            let p = gen::exponent(rng);
            let n = rng.random_range(1..=(x.len() - 1) / 2);
            let m = rng.random_range(n + 1..=x.len() - n);
            describe_series(&mut fp, &x, &[("p", p), ("n", n as f64), ("m", m as f64)]);
            let c = check_two_scale_bound(&x, p, n, m)?;
            let small = c.rhs / c.factor.unwrap_or(1.0);
            if small > 0.0 {
                ratio = Some(c.lhs / small);
            }
            vec![c]
        }
        CheckKind::NormLaws => {
            let x = gen::series(rng, bounds, 1);
            let y = gen::uniform_series(rng, x.len(), bounds.series_amplitude);
            let p = gen::exponent(rng);
            let n = rng.random_range(1..=x.len());
            let c = rng.random_range(-5.0..=5.0);
            describe_series(&mut fp, &x, &[("p", p), ("n", n as f64), ("c", c)]);
            norm_law_checks(&x, &y, p, n, c)?
        }
        CheckKind::OracleAgreement => {
            let x = gen::series(rng, bounds, 1);
            let p = gen::exponent(rng);
            let n = rng.random_range(1..=x.len());
            describe_series(&mut fp, &x, &[("p", p), ("n", n as f64)]);
            let spec = WindowSpec::new(p, n)?;
            let fast = windowed_pnorm(&x, spec)?;
            let slow = brute_force_windowed_pnorm(&x, spec)?;
            let agree = tol::rel_eq(fast.value, slow.value, tol::EXACT_REL) && fast.arg_start == slow.arg_start;
            vec![BoundCheck::at_most("oracle_agreement", fast.value_pow_p, slow.value_pow_p).and(agree)]
        }
        CheckKind::PartitionInequalityCont => {
            let f = gen::step_function(rng, bounds);
            let p = gen::exponent(rng);
            let d = rng.random_range(1..=5);
            let parts: Vec<f64> = (0..d).map(|_| gen::length(rng, bounds) / d as f64).collect();
            describe_step(&mut fp, &f, p);
            fp.push_str(&format!(" parts={parts:?}"));
            vec![check_partition_inequality_cont(&f, p, &parts)?]
        }
        CheckKind::DivisorOrderingCont => {
            let f = gen::step_function(rng, bounds);
            let p = gen::exponent(rng);
            let v = gen::length(rng, bounds);
            let d = rng.random_range(1..=6);
            describe_step(&mut fp, &f, p);
            fp.push_str(&format!(" V={v} d={d}"));
            vec![check_multiple_ordering_cont(&f, p, v, d)?]
        }
        CheckKind::TwoScaleBoundCont => {
            let f = gen::step_function(rng, bounds);
            let p = gen::exponent(rng);
            let short = gen::length(rng, bounds);
            let long = short * rng.random_range(1.001..6.0);
            describe_step(&mut fp, &f, p);
            fp.push_str(&format!(" T={short} S={long}"));
            let c = check_two_scale_bound_cont(&f, p, short, long)?;
            let small = c.rhs / c.factor.unwrap_or(1.0);
            if small > 0.0 {
                ratio = Some(c.lhs / small);
            }
            vec![c]
        }
        CheckKind::NormLawsCont => {
            let pieces = rng.random_range(1..=bounds.max_pieces);
            let grid = gen::sorted_breakpoints(rng, bounds, pieces);
            let f = gen::breakpoint_grid_function(rng, bounds, &grid);
            let g = gen::breakpoint_grid_function(rng, bounds, &grid);
            let p = gen::exponent(rng);
            let length = gen::length(rng, bounds);
            let c = rng.random_range(-5.0..=5.0);
            describe_step(&mut fp, &f, p);
            fp.push_str(&format!(" T={length} c={c}"));
            let fg = f.add(&g)?;
            let (nf, ng, nfg) = (
                interval_pnorm(&f, p, length)?.value,
                interval_pnorm(&g, p, length)?.value,
                interval_pnorm(&fg, p, length)?.value,
            );
            let ncf = interval_pnorm(&f.scaled(c)?, p, length)?.value;
            vec![
                BoundCheck::at_most("homogeneity_cont", ncf, c.abs() * nf).and(tol::rel_eq(
                    ncf,
                    c.abs() * nf,
                    tol::EXACT_REL,
                )),
                BoundCheck::at_most("triangle_cont", nfg, nf + ng),
            ]
        }
        CheckKind::BumpTrain => {
            let (short, long) = gen::counterexample_scales(rng);
            let p = [1.0, 2.0][rng.random_range(0..2)];
            fp.push_str(&format!(" T={short} S={long} p={p}"));
            injected = true;
            vec![check_bump_train(short, long, p)?]
        }
        CheckKind::ReverseCounterexample => {
            let short = rng.random_range(0.05..5.0);
            let long = short * rng.random_range(1.001..8.0);
            let p = gen::exponent(rng);
            fp.push_str(&format!(" T={short} S={long} p={p}"));
            vec![check_reverse_counterexample(short, long, p)?]
        }
        CheckKind::GridOracle => {
            let f = gen::step_function(rng, bounds);
            let p = gen::exponent(rng);
            let length = gen::length(rng, bounds);
            let (b0, bk) = f.support();
            let step = (bk - b0 + length) / 2000.0;
            describe_step(&mut fp, &f, p);
            fp.push_str(&format!(" T={length} step={step}"));
            let exact = interval_pnorm(&f, p, length)?.value_pow_p;
            let grid = grid_oracle_interval_pnorm(&f, p, length, step)?;
            let gap = grid_gap_bound(&f, p, length, step);
            vec![
                BoundCheck::at_most("grid_oracle_lower", grid, exact)
                    .and(grid <= exact + tol::EXACT_REL * exact.max(f.max_abs().powf(p))),
                BoundCheck::at_most("grid_oracle_gap", exact - grid, gap),
            ]
        }
        CheckKind::NaiveMonotonicity => {
            let (x, n, m) = if trial.is_multiple_of(4) {
                injected = true;
                planted_impulse_case(rng)?
            } else {
                let len = rng.random_range(3..=bounds.max_len.max(3));
                let x = gen::bernoulli_series(rng, len);
                let n = rng.random_range(1..len);
                let m = rng.random_range(n + 1..=len);
                (x, n, m)
            };
            let p = gen::exponent(rng);
            describe_series(&mut fp, &x, &[("p", p), ("n", n as f64), ("m", m as f64)]);
            let small = windowed_pnorm(&x, WindowSpec::new(p, n)?)?;
            let large = windowed_pnorm(&x, WindowSpec::new(p, m)?)?;
            vec![BoundCheck::at_most("naive_monotonicity", large.value, small.value)]
        }
        CheckKind::NaiveMonotonicityCont => {
            let p = gen::exponent(rng);
            let (f, short, long) = if trial.is_multiple_of(4) {
                injected = true;
                let (short, long) = gen::counterexample_scales(rng);
                (bump_train(short, long, p)?.f, short, long)
            } else {
                let f = gen::uniform_step_function(rng, bounds, bounds.max_pieces);
                let short = gen::length(rng, bounds);
                (f, short, short * rng.random_range(1.001..4.0))
            };
            describe_step(&mut fp, &f, p);
            fp.push_str(&format!(" T={short} S={long}"));
            let small = interval_pnorm(&f, p, short)?;
            let large = interval_pnorm(&f, p, long)?;
            vec![BoundCheck::at_most("naive_monotonicity_cont", large.value, small.value)]
        }
    };

    Ok(TrialOutcome {
        fingerprint: fp,
        checks,
        ratio,
        injected,
    })
}

/// Impulse train of period `n` with a window `m = (d-1)n + j > n` that `n` does not divide.
fn planted_impulse_case(rng: &mut impl Rng) -> Result<(SampleSeries, usize, usize)> {
    let n = rng.random_range(2..=8);
    let d = rng.random_range(2..=4);
    let j = rng.random_range(1..n);
    let m = (d - 1) * n + j;
    Ok((impulse_train(n, m + 2 * n)?, n, m))
}

fn norm_law_checks(x: &SampleSeries, y: &SampleSeries, p: f64, n: usize, c: f64) -> Result<Vec<BoundCheck>> {
    let spec = WindowSpec::new(p, n)?;
    let nx = windowed_pnorm(x, spec)?.value;
    let ncx = windowed_pnorm(&x.scaled(c)?, spec)?.value;
    let sum: Vec<f64> = x.values().iter().zip(y.values()).map(|(a, b)| a + b).collect();
    let nxy = windowed_pnorm(&SampleSeries::from_values(sum)?, spec)?.value;
    let ny = windowed_pnorm(y, spec)?.value;
    let all_zero = x.values().iter().all(|&v| v == 0.0);
    Ok(vec![
        BoundCheck::at_most("homogeneity", ncx, c.abs() * nx).and(tol::rel_eq(ncx, c.abs() * nx, tol::EXACT_REL)),
        BoundCheck::at_most("triangle", nxy, nx + ny),
        BoundCheck::at_most("definiteness", nx, nx).and((nx == 0.0) == all_zero),
    ])
}

fn describe_series(fp: &mut String, x: &SampleSeries, params: &[(&str, f64)]) {
    fp.push_str(&format!(" series={}", x.fingerprint()));
    for (k, v) in params {
        fp.push_str(&format!(" {k}={v}"));
    }
}

fn describe_step(fp: &mut String, f: &StepFunction, p: f64) {
    fp.push_str(&format!(" pieces={} support={:?} p={p}", f.pieces(), f.support()));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for k in CheckKind::ALL {
            assert_eq!(k.name().parse::<CheckKind>().unwrap(), k);
        }
        assert!(matches!("nope".parse::<CheckKind>(), Err(Error::UnknownCheck(_))));
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(run_campaign(CheckKind::DivisorOrdering, 0, 1, &SizeBounds::default()).is_err());
    }

    #[test]
    fn trial_is_reproducible() {
        let b = SizeBounds::default();
        for k in CheckKind::ALL {
            assert_eq!(run_trial(k, 5, 17, &b).unwrap(), run_trial(k, 5, 17, &b).unwrap());
        }
    }

    #[test]
    fn json_lines_end_with_summary() {
        let r = run_campaign(CheckKind::NaiveMonotonicity, 8, 3, &SizeBounds::default()).unwrap();
        let text = r.to_json_lines();
        let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(lines.len(), r.findings.len() + 1);
        let summary = lines.last().unwrap();
        assert_eq!(summary["kind"], "summary");
        assert_eq!(summary["check"], "naive_monotonicity");
        assert_eq!(summary["trials"], 8);
        assert!(lines[..lines.len() - 1].iter().all(|l| l["kind"] == "finding"));
    }
}
