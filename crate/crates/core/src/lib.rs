//! Uplink (multiaccess) MIMO with finite-rate feedback.
//!
//! The crate covers two power on/off feedback strategies for a base station
//! with `L_R` receive antennas serving `N` users with `L_T` antennas each:
//!
//! * antenna selection: turn on the `s` strongest transmit antennas;
//! * general beamforming: turn on the `s` strongest users and jointly quantize
//!   their dominant eigen-channel directions with a random codebook on the
//!   composite Grassmann manifold.
//!
//! Next to the simulators sits the analytical stack used to predict their sum
//! rate: extreme order statistics of chi-square sums ([`extremes`]), the
//! Marčenko–Pastur law and its Shannon transform ([`rmt`]), distortion-rate
//! theory on the composite Grassmann manifold ([`grassmann`]) and the
//! power-efficiency factor that ties them together ([`strategies`]).
//! [`experiments`] runs seeded, worker-count-invariant Monte Carlo sweeps.

pub mod error;
pub mod experiments;
pub mod extremes;
pub mod grassmann;
pub mod numerics;
pub mod rmt;
pub mod strategies;

pub use error::{Error, Result};
pub use numerics::{ComplexMatrix, RngStream, C64};
