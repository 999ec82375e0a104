//! Configuration-driven experiments and the command-line front end.

pub mod cli;
pub mod commands;
pub mod config;
pub mod fits;
pub mod output;

pub use commands::{cmd_compare, cmd_ising, cmd_plateau, cmd_run, CommandOptions, CommandOutcome, Status};
pub use config::{CaseConfig, ConfigFile};
