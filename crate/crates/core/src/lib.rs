//! Maximal windowed p-means of series and step functions across scales.
//!
//! The maximal mean of `|x|^p` over all windows of a fixed length is not
//! monotone in the window length: a longer window can have a larger maximal
//! mean. It is monotone along multiples (`d·n` never exceeds `n`), and across
//! arbitrary scales `n < m` it can grow by at most the factor
//! `(⌊m/n⌋+1)·n/m <= 2` in the p-th power.
//!
//! - [`discrete`]: sample series, `O(N)` sliding computation, impulse trains.
//! - [`continuous`]: step functions on the line, exact candidate sweep, bump trains.
//! - [`verify`]: brute-force oracles and seeded randomized campaigns.
//! - [`cli`]: ingestion, monitoring, and the `maxmean` command.

pub mod check;
pub mod cli;
pub mod continuous;
pub mod discrete;
pub mod error;
pub mod report;
pub mod series;
pub mod step;
pub mod tol;
pub mod verify;

pub use check::{BoundCheck, TwoSidedCheck, Witness};
pub use continuous::{bump_train, interval_pnorm, single_bump, BumpTrain, IntervalNormResult};
pub use discrete::{impulse_train, scale_ladder, sup_norm, windowed_pnorm, WindowedNormResult};
pub use error::{Error, Result};
pub use report::{ScaleReport, ScaleRow};
pub use series::{SampleSeries, WindowSpec};
pub use step::StepFunction;
