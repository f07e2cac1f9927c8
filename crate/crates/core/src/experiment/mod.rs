//! Config-driven experiment runner and its report files.

mod config;
pub mod report;
mod runner;
mod strategy;

pub use config::ExperimentConfig;
pub use report::{emit_report, read_summary, write_rank_tests, write_turnover, SummaryRow};
pub use runner::{run_experiment, run_on_log, run_turnover, ExperimentRecord, ExperimentResult, TurnoverRecord};
pub use strategy::Strategy;
