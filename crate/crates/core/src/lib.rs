//! Simulation of Shor order finding with imperfect gates.
//!
//! The crate models Walsh-Hadamard and controlled-phase gates with
//! systematic, random, or combined angle errors, and compares three views of
//! the resulting output distribution: gate-level statevector simulation, a
//! per-index error model of the Fourier transform, and closed-form
//! probabilities. [`experiment`] drives figure reproduction, threshold
//! sweeps and serialization.

pub mod analytic;
pub mod error;
pub mod experiment;
pub mod gates;
pub mod qft;
pub mod rng;
pub mod selftest;
pub mod shor;
pub mod state;

pub use analytic::PeriodicStateSpec;
pub use error::{Error, Result};
pub use gates::{ErrorMode, ErrorModel};
pub use rng::RngStream;
pub use state::{Distribution, StateVector};
