//! Simulation toolkit for parametrically amplified spin-mechanical systems.
//!
//! Dynamics run in units where the bare spin-phonon coupling λ = 1 and
//! ħ = 1. Operators are dense and tagged with the tensor-product layout
//! they act on; see [`hilbert`] for the basis conventions.

pub mod dynamics;
pub mod error;
pub mod hilbert;
pub mod metrics;
pub mod models;
pub mod transforms;

pub use error::{Error, Result};
