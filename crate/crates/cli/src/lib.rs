//! Experiment harness for the batch reactor studies: repeat runs of the
//! single-objective problem, two-objective runs under each ranking scheme,
//! and the CSV files that back the plots.

pub mod config;
pub mod error;
pub mod output;
pub mod study;

pub use config::{ExperimentSpec, Settings};
pub use error::{CliError, Result};
pub use study::{run_multi_study, run_single_study, run_study, RunSummary, StudyReport};
