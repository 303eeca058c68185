//! Run settings shared by every command, and literal parsing.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use wshift_core::hyponormality::SweepSettings;
use wshift_core::{Mode, Scalar};

/// Decimal literals in exact mode become the nearest rational with at most this denominator.
pub const MAX_DECIMAL_DENOMINATOR: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Output {
    Csv,
    Json,
    Pretty,
}

impl FromStr for Output {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Output::Csv),
            "json" => Ok(Output::Json),
            "pretty" => Ok(Output::Pretty),
            other => Err(format!("unknown output format `{}` (expected csv, json or pretty)", other)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threads {
    Auto,
    Fixed(usize),
}

impl FromStr for Threads {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(Threads::Auto);
        }
        match s.parse::<usize>() {
            Ok(n) if n > 0 => Ok(Threads::Fixed(n)),
            _ => Err(format!("threads must be a positive integer or `auto`, got `{}`", s)),
        }
    }
}

impl fmt::Display for Threads {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threads::Auto => write!(f, "auto"),
            Threads::Fixed(n) => write!(f, "{}", n),
        }
    }
}

pub fn parse_mode(s: &str) -> Result<Mode, String> {
    match s {
        "exact" => Ok(Mode::Exact),
        "float" => Ok(Mode::Float),
        other => Err(format!("unknown mode `{}` (expected exact or float)", other)),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    /// Bisection width and float eigenvalue tolerance.
    pub tol: f64,
    pub u_bound: u32,
    pub k_max: u32,
    pub output: Output,
    pub threads: Threads,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: Mode::Exact,
            tol: 1e-9,
            u_bound: 10,
            k_max: 6,
            output: Output::Pretty,
            threads: Threads::Auto,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(format!("tol must be positive, got {}", self.tol));
        }
        if self.k_max < 1 {
            return Err("kmax must be at least 1".to_string());
        }
        Ok(())
    }

    pub fn settings(&self) -> SweepSettings {
        SweepSettings {
            u_bound: self.u_bound,
            mode: self.mode,
            psd_tol: self.tol,
        }
    }

    /// Runs `f` on a pool sized by `threads`.
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> Result<R, rayon::ThreadPoolBuildError> {
        let n = match self.threads {
            Threads::Auto => 0,
            Threads::Fixed(n) => n,
        };
        let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build()?;
        Ok(pool.install(f))
    }
}

/// Parses `p/q`, an integer, or a decimal. In exact mode decimals are
/// rounded to the nearest rational with denominator at most 10⁶.
pub fn parse_literal(s: &str, mode: Mode) -> Result<Scalar, wshift_core::Error> {
    Scalar::parse_in_mode(s, mode, MAX_DECIMAL_DENOMINATOR)
}
