//! Command-line experiment runner for the no-click probability models:
//! figure presets, parameter sweeps, curve comparisons and a self-check.

// negated comparisons are how NaN gets rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod config;
pub mod dataset;
pub mod error;
pub mod experiments;
pub mod selfcheck;

pub use config::{Command, ConfigLayer, ExperimentConfig};
pub use error::{CliError, Result};
