//! Text formats, parallel sweeps and the command-line front end for the
//! `wshift-core` analysis library.

pub mod config;
pub mod format;
pub mod report;
pub mod selftest;
pub mod sweep;

pub use config::{parse_literal, Output, RunConfig, Threads};
