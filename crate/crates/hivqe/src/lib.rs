//! File formats, reports, and the command-line driver for the `hivqe-core`
//! solvers.

pub mod cli;
pub mod commands;
pub mod config;
pub mod fcidump;
pub mod report;
pub mod runner;

pub use config::{Method, RunConfig};
pub use fcidump::{fingerprint, parse_fcidump, read_fcidump, write_fcidump, FcidumpError};
pub use runner::{execute, RunArtifacts};
