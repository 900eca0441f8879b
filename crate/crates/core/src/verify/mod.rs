//! Independent oracles and randomized campaigns over every check.

pub mod campaign;
pub mod gen;
pub mod oracle;

pub use campaign::{run_campaign, run_trial, CampaignReport, CheckKind, TrialOutcome, TrialRecord};
pub use gen::SizeBounds;
pub use oracle::{brute_force_windowed_pnorm, grid_gap_bound, grid_oracle_interval_pnorm};
