//! Exact analysis of 2-variable weighted shifts.
//!
//! Everything here works on *squared* weights so that every quantity that
//! enters a positivity decision stays rational. The crate is `no_std` and only
//! needs `alloc`; IO, threading and the command line live in the `wshift`
//! companion crate.
//!
//! Module map:
//!
//! - [`scalar`]: dual-mode numbers (exact rational or `f64`) and literal parsing.
//! - [`poly`]: rational polynomials on `[0,1]`, integration and sign certification.
//! - [`shifts`]: 1- and 2-variable weight sequences, including the built-in families.
//! - [`moments`]: moments `γ_k` and the lexicographically indexed moment matrices.
//! - [`positivity`]: exact and floating-point PSD tests, exact determinants.
//! - [`hyponormality`]: k-hyponormality verdicts, closed-form thresholds, bisection.
//! - [`berger`]: Berger measures, extremal/marginal measures, backward extensions.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod berger;
pub mod error;
pub mod hyponormality;
pub mod matrix;
pub mod moments;
pub mod poly;
pub mod positivity;
pub mod scalar;
pub mod shifts;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use scalar::{Mode, Scalar};
