//! Library surface of the command-line tool, so integration tests can run
//! the commands in-process.

pub mod commands;
pub mod metrics;
pub mod presets;
pub mod reports;
pub mod startset;
