//! Evaluation harness around the `modmax` library: benchmark generation,
//! single solves, evaluation runs and summary reports.

pub mod algorithm;
pub mod error;
pub mod gen;
pub mod record;
pub mod report;
pub mod run;
pub mod solve;

pub use error::{CliError, Result};
