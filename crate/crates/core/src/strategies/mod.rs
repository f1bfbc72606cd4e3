//! Feedback strategies for the uplink: antenna selection, beamforming with
//! quantized eigen-channel feedback, the no-CSIT baseline, and the
//! closed-form theory that predicts their sum rates.

mod antenna;
mod beamforming;
mod config;
mod theory;

pub use antenna::{antenna_select, antenna_selection_rate, no_csit_rate};
pub use beamforming::{beamform, beamforming_rate, individual_bit_split, user_select, Beamformed, Quantizer};
pub use config::{sample_channel, user_channels, Strategy, SystemConfig, TrialRecord};
pub use theory::{
    eta_theory_antenna, eta_theory_beamforming, eta_theory_individual, feedback_bits,
    optimal_s_search, rate_upper_bound_theory, theory_report, SearchKind, TheoryReport,
};

use crate::error::Result;
use crate::numerics::{logdet_hermitian_psd, ComplexMatrix, C64};

/// `log2 det(I + k Σ h h†)` over the given receive-side vectors.
pub(crate) fn sum_rate_of(vectors: &[Vec<C64>], rx: usize, k: f64) -> Result<f64> {
    if k == 0.0 || vectors.is_empty() {
        return Ok(0.0);
    }
    let mut m = ComplexMatrix::identity(rx);
    for v in vectors {
        m.add_outer(v, k);
    }
    Ok(logdet_hermitian_psd(&m)?.max(0.0))
}

/// Rate with each stream's power replaced by the realization's mean:
/// `log2 det(I + (ρ/s) η L_R Ξ Ξ†)` with unit-norm columns `ξ_k`.
pub(crate) fn jensen_rate_of(vectors: &[Vec<C64>], rx: usize, k: f64, eta: f64) -> Result<f64> {
    let dirs: Vec<Vec<C64>> = vectors
        .iter()
        .filter_map(|v| {
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            (norm > 0.0).then(|| v.iter().map(|z| z / norm).collect())
        })
        .collect();
    sum_rate_of(&dirs, rx, k * eta * rx as f64)
}

pub(crate) fn sq_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}
