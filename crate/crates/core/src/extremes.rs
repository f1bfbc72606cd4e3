//! Extreme order statistics of Gamma(L, 1) populations (sums of L unit
//! exponentials, i.e. squared norms of L-dimensional complex Gaussian
//! vectors).

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::numerics::{bisect, compensated_sum, integrate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderStatModel {
    /// Gamma shape.
    pub l: u32,
    /// Population size.
    pub n: u64,
    /// Number of maxima kept.
    pub s: u64,
}

impl OrderStatModel {
    pub fn new(l: u32, n: u64, s: u64) -> Result<Self> {
        if l == 0 {
            return Err(invalid("shape L must be at least 1"));
        }
        if s == 0 || s > n {
            return Err(invalid(format!("need 1 <= s <= n, got s={s}, n={n}")));
        }
        Ok(Self { l, n, s })
    }
}

/// `P(X > x)` for `X ~ Gamma(L, 1)`: `e^{-x} Σ_{i<L} x^i / i!`.
pub fn survival(x: f64, l: u32) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    // Terms are accumulated in log space so large x never overflows x^i.
    let lx = x.ln();
    let mut log_term = -x;
    let mut acc = 0.0;
    for i in 0..l {
        if i > 0 {
            log_term += lx - (i as f64).ln();
        }
        acc += log_term.exp();
    }
    acc.min(1.0)
}

/// Normalizer `a_n`: the point where the survival function equals `1/n`.
pub fn a_n(l: u32, n: u64) -> Result<f64> {
    if n < 2 {
        return Err(invalid("a_n needs n >= 2"));
    }
    if l == 0 {
        return Err(invalid("shape L must be at least 1"));
    }
    let target = 1.0 / n as f64;
    let hi = l as f64 + 50.0 + 2.0 * (n as f64).ln();
    // Relative tolerance 1e-12 on a root of order ln n.
    bisect(|x| survival(x, l) - target, 0.0, hi, 1e-13 * hi)
}

/// Normalizer `b_n = Σ (L-i)/i! a^i / Σ a^i/i!` over `i < L`.
pub fn b_n(l: u32, a: f64) -> f64 {
    // Ratio is scale free, so the terms are rescaled by the largest one.
    let ln_terms: Vec<f64> = (0..l)
        .map(|i| i as f64 * a.ln() - statrs::function::gamma::ln_gamma(i as f64 + 1.0))
        .collect();
    let peak = ln_terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = ln_terms.iter().map(|t| (t - peak).exp()).collect();
    let num = compensated_sum(w.iter().enumerate().map(|(i, w)| (l as f64 - i as f64) * w));
    let den = compensated_sum(w.iter().copied());
    num / den
}

/// Mean of the standard Gumbel law, `∫ x d exp(-e^{-x})`, by quadrature.
pub fn mu_1() -> f64 {
    use std::sync::OnceLock;
    static MU1: OnceLock<f64> = OnceLock::new();
    *MU1.get_or_init(|| {
        let density = |x: f64| {
            let e = (-x).exp();
            x * e * (-e).exp()
        };
        integrate(density, -10.0, 80.0, 1e-13, 1e-13)
            .expect("Gumbel mean quadrature converges")
            .value
    })
}

fn harmonic(k: u64) -> f64 {
    compensated_sum((1..=k).map(|i| 1.0 / i as f64))
}

/// `μ_k = μ_1 - H_{k-1}`, the limiting mean of the k-th largest normalized maximum.
pub fn mu_k(k: u64) -> Result<f64> {
    if k == 0 {
        return Err(invalid("mu_k is defined for k >= 1"));
    }
    Ok(mu_1() - harmonic(k - 1))
}

/// Approximate `E[sum of the s largest of n Gamma(L,1) draws]`.
pub fn expected_top_sum(model: OrderStatModel) -> Result<f64> {
    let OrderStatModel { l, n, s } = model;
    if 4 * s > n {
        warn!("expected_top_sum: s={s} is not small relative to n={n}; approximation degrades");
    }
    if n == 1 {
        // A single draw: the mean of Gamma(L, 1).
        return Ok(l as f64);
    }
    let a = a_n(l, n)?;
    let b = b_n(l, a);
    let s_f = s as f64;
    Ok(s_f * a + s_f * b * (mu_1() + 1.0 - harmonic(s)))
}
