//! File formats, generators and the command-line driver for the
//! `delivery-core` solvers.

pub mod bench;
pub mod cli;
pub mod dimacs;
pub mod doc;
pub mod generate;
pub mod solve;

pub use cli::run_command;
