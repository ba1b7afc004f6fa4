//! Command-line front end: single solves, parameter sweeps, reference
//! benchmarks and oracle runs.

pub mod bench;
pub mod commands;
pub mod config;
pub mod output;
