//! Command-line front end: JSON game, strategy, and report formats plus the
//! five commands behind the `priorless` binary.

pub mod commands;
pub mod format;
