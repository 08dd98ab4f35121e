//! Command-line front end: constructions, property checks, searches, the
//! class 2 hunt and self-contained certificates.

pub mod cert;
pub mod checks;
mod commands;
pub mod input;

pub use commands::{run, BuildArgs, BuildName, Cli, Command, CubicCmd, Exit, HuntSummary};
