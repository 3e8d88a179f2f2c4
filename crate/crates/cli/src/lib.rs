//! Batch front end: INI experiment configs in, CSV/JSON tables out.
//!
//! Each command writes into one output directory. Every file starts with the
//! full config: `#` comment lines in CSV, a `"config"` member in JSON.

pub mod commands;
pub mod config;

pub use commands::{cmd_simulate, cmd_spectrum, cmd_sweep, cmd_verify, execute, Outcome};
pub use config::{Command, ExperimentConfig, OUT_ENV};
