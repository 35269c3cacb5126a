//! Experiment harness for `auxit`: alpha sweeps, model comparisons, learning
//! curves and cost generation, with CSV/JSON outputs.

pub mod cli;
pub mod curves;
pub mod data;
mod error;
pub mod experiment;
pub mod gencosts;

pub use error::{CliError, ErrorLine, Result};
