//! Library side of the `binapprox` command: instance files, result records,
//! solver dispatch, witness verification, planted generation and sweeps.

pub mod bench;
pub mod error;
pub mod generate;
pub mod instance;
pub mod record;
pub mod solve;
pub mod verify;

pub use error::{CliError, CliResult};
