//! Numerical model of an integrated two-channel source of
//! polarization-entangled photon pairs.
//!
//! Two periodically poled waveguides emit type-II pairs into an on-chip
//! polarizing coupler. The crate follows a pair from the coupler
//! ([`polarization`]) through its spectrum ([`spectral`]) and birefringent
//! walk-off ([`temporal`]) to the polarization state seen by a tomography
//! setup ([`analysis`]). [`pipeline`] composes these into predictions and runs
//! named scenarios.

pub mod analysis;
pub mod error;
pub mod pipeline;
pub mod polarization;
pub mod spectral;
pub mod temporal;
pub mod units;

pub use error::{Error, Result};
