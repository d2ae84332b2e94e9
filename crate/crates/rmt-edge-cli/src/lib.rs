//! Pieces of the `rmt-edge` command-line driver: experiment files, the `verify`
//! suite and CSV output.

pub mod checks;
pub mod config;
pub mod output;
