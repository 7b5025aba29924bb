//! Parallel sweeps, experiments, report emission and the command-line front
//! end built on [`minbox_core`].

pub mod checkpoint;
pub mod cli;
mod error;
pub mod experiments;
pub mod report;
pub mod sweep;

pub use error::{Error, Result};
