//! Argument handling and command dispatch for the `shor-noise` binary.
//!
//! Exit codes: 0 on success, 1 on runtime failures, 2 on invalid or
//! conflicting arguments.

pub mod config;
pub mod run;

pub use config::{parse_config, ConfigError, RunConfig};
pub use run::{run, RunError};
