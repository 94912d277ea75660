//! File formats, run configuration and the command-line front end for
//! `spikecomm-core`.

pub mod cli;
pub mod config;
pub mod error;
pub mod formats;

pub use error::{Error, Result};
