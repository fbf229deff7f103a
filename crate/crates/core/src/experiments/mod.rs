//! Monte Carlo harness: configs, runners, statistics and reports.

pub mod config;
pub mod report;
pub mod runners;
pub mod stats;

pub use config::{ExperimentConfig, ExperimentKind, Functional, LawName};
pub use report::{Report, Row, SampleSeries, Verdict};
pub use runners::run;
