//! Command-line front end for `fhmux`: sweeps that emit plot-ready CSV/JSON
//! and the acceptance checks behind `fhmux validate`.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod validate;

pub use error::{CliError, Result};
