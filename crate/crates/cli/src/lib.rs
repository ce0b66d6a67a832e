//! Command-line lab over the `toricnp` library: single computations and resumable experiments.

pub mod commands;
pub mod error;
pub mod experiment;
pub mod record;
pub mod spec;

pub use error::{CliError, CliResult};
