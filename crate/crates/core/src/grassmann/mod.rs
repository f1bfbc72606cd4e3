//! Composite Grassmann manifold of `m` complex lines in `n`-space: points,
//! chordal distance, random codebooks, nearest-codeword quantization and
//! distortion-rate estimates.

mod codebook;
mod drf;
mod point;

pub use codebook::{
    measure_distortion, quantize, quantize_individual, random_codebook, Codebook, Quantized,
    QuantizedIndividual, MAX_CODEBOOK_SIZE,
};
pub use drf::{
    ball_volume, c_constant, drf_approx, drf_asymptotic, drf_bounds, ln_c_constant, BallVolume,
    DrfBounds, DrfEstimate, DrfQuery,
};
pub use point::{chordal_distance_sq, CompositePoint};
