//! Shared numerical kernels: seeded random streams, a small dense complex
//! matrix type, SVD / Hermitian log-determinant, quadrature and bracketing
//! root search.

mod linalg;
mod matrix;
mod quad;
mod rng;

pub use linalg::{logdet_hermitian_psd, singular_values, svd, Svd};
pub use matrix::{ComplexMatrix, C64};
pub use quad::{bisect, integrate, Quadrature};
pub use rng::{complex_gaussian, sample_gaussian_matrix, sample_unit_vector, RngStream, StreamRng};

/// Rates are reported in bits: natural-log quantities are divided by this.
pub const NATS_PER_RATE_UNIT: f64 = std::f64::consts::LN_2;

#[inline]
pub fn nats_to_rate(nats: f64) -> f64 {
    nats / NATS_PER_RATE_UNIT
}

/// Sum with Neumaier compensation.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `ln(n choose k)` through log-gamma.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    use statrs::function::gamma::ln_gamma;
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    if k <= 64 {
        return compensated_sum((1..=k).map(|i| ((n - k + i) as f64 / i as f64).ln()));
    }
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}
