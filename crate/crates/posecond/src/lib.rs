//! File formats, parallel experiment drivers and the command line for
//! `posecond-core`.

pub mod cli;
pub mod error;
pub mod formats;
pub mod parallel;
pub mod svg;

pub use error::{CliError, Result};
