//! File formats, parallel drivers and the command-line interface on top of
//! [`mopef_core`].

pub mod cli;
pub mod error;
pub mod io;
pub mod parallel;

pub use error::{CliError, CliResult};
