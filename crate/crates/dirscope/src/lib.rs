//! File IO, reports and the `dirscope` command line on top of `dirscope-core`.

pub mod cli;
pub mod commands;
pub mod error;
pub mod io;
pub mod report;
