use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma, ln_gamma};

use crate::error::{invalid, Result};

fn check_dims(n: usize, p: usize, beta: u8) -> Result<()> {
    if p == 0 || p > n {
        return Err(invalid(format!("need 1 <= p <= n, got p={p}, n={n}")));
    }
    if beta != 1 && beta != 2 {
        return Err(invalid(format!("beta must be 1 (real) or 2 (complex), got {beta}")));
    }
    Ok(())
}

fn t_of(n: usize, p: usize, beta: u8) -> f64 {
    beta as f64 * p as f64 * (n - p) as f64
}

/// `ln c_{n,p,p,β}`, the log of the small-ball volume constant on `G_{n,p}`.
pub fn ln_c_constant(n: usize, p: usize, beta: u8) -> Result<f64> {
    check_dims(n, p, beta)?;
    let half_beta = beta as f64 / 2.0;
    let t = t_of(n, p, beta);
    let (terms, inner) = if 2 * p <= n { (p, p) } else { (n - p, n - p) };
    let mut acc = -ln_gamma(t / 2.0 + 1.0);
    for i in 1..=terms {
        acc += ln_gamma(half_beta * (n - i + 1) as f64) - ln_gamma(half_beta * (inner - i + 1) as f64);
    }
    Ok(acc)
}

pub fn c_constant(n: usize, p: usize, beta: u8) -> Result<f64> {
    Ok(ln_c_constant(n, p, beta)?.exp())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallVolume {
    pub value: f64,
    /// False when `delta > 1`, where the formula no longer applies.
    pub in_regime: bool,
}

/// Normalized volume of a chordal ball of radius `delta` in `G_{n,p}^m`.
pub fn ball_volume(n: usize, p: usize, m: usize, beta: u8, delta: f64) -> Result<BallVolume> {
    check_dims(n, p, beta)?;
    if m == 0 {
        return Err(invalid("m must be positive"));
    }
    if !(delta >= 0.0) {
        return Err(invalid("radius must be nonnegative"));
    }
    let t = t_of(n, p, beta);
    let mf = m as f64;
    if t == 0.0 {
        return Ok(BallVolume { value: 1.0, in_regime: delta <= 1.0 });
    }
    if delta == 0.0 {
        return Ok(BallVolume { value: 0.0, in_regime: true });
    }
    let ln_v = mf * ln_gamma(t / 2.0 + 1.0) - ln_gamma(mf * t / 2.0 + 1.0)
        + mf * ln_c_constant(n, p, beta)?
        + mf * t * delta.ln();
    Ok(BallVolume { value: ln_v.exp().min(1.0), in_regime: delta <= 1.0 })
}

/// Distortion-rate question for a codebook of `2^log2_k` points on `G_{n,p}^m`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DrfQuery {
    pub n: usize,
    pub p: usize,
    pub m: usize,
    pub beta: u8,
    pub log2_k: f64,
}

impl DrfQuery {
    pub fn new(n: usize, p: usize, m: usize, beta: u8, log2_k: f64) -> Result<Self> {
        check_dims(n, p, beta)?;
        if m == 0 {
            return Err(invalid("m must be positive"));
        }
        if !(log2_k >= 0.0 && log2_k.is_finite()) {
            return Err(invalid(format!("log2 K must be finite and nonnegative, got {log2_k}")));
        }
        Ok(Self { n, p, m, beta, log2_k })
    }

    pub fn with_size(n: usize, p: usize, m: usize, beta: u8, k: u64) -> Result<Self> {
        if k == 0 {
            return Err(invalid("codebook size must be at least 1"));
        }
        Self::new(n, p, m, beta, (k as f64).log2())
    }

    pub fn t(&self) -> f64 {
        t_of(self.n, self.p, self.beta)
    }

    /// Shared factor `X` of both bounds; `X <= 1` is the large-`K` premise.
    fn ln_x(&self) -> Result<f64> {
        let t = self.t();
        let mt = self.m as f64 * t;
        Ok(2.0 / mt * ln_gamma(mt / 2.0 + 1.0) - 2.0 / t * ln_gamma(t / 2.0 + 1.0)
            - 2.0 / t * ln_c_constant(self.n, self.p, self.beta)?
            - 2.0 * self.log2_k * LN_2 / mt)
    }

    pub fn premise_holds(&self) -> Result<bool> {
        if self.t() == 0.0 {
            return Ok(true);
        }
        Ok(self.ln_x()? <= 0.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DrfBounds {
    pub lower: f64,
    pub upper: f64,
    pub premise_holds: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DrfEstimate {
    pub value: f64,
    pub premise_holds: bool,
}

/// Large-`K` lower and upper bounds on the distortion-rate function.
pub fn drf_bounds(q: &DrfQuery) -> Result<DrfBounds> {
    let t = q.t();
    if t == 0.0 {
        return Ok(DrfBounds { lower: 0.0, upper: 0.0, premise_holds: true });
    }
    let mt = q.m as f64 * t;
    let x = q.ln_x()?.exp();
    Ok(DrfBounds {
        lower: mt / (mt + 2.0) * x,
        upper: 2.0 / mt * gamma(2.0 / mt) * x,
        premise_holds: q.premise_holds()?,
    })
}

/// Working estimate of the distortion-rate function (the upper bound).
pub fn drf_approx(q: &DrfQuery) -> Result<DrfEstimate> {
    let b = drf_bounds(q)?;
    Ok(DrfEstimate { value: b.upper, premise_holds: b.premise_holds })
}

/// Limit `m p 2^{-2r/(β m p)}` as `n → ∞` with `log2 K = r n`.
pub fn drf_asymptotic(p: usize, m: usize, beta: u8, r: f64) -> Result<DrfEstimate> {
    if p == 0 || m == 0 {
        return Err(invalid("p and m must be positive"));
    }
    if beta != 1 && beta != 2 {
        return Err(invalid("beta must be 1 or 2"));
    }
    let mp = (m * p) as f64;
    let value = mp * 2f64.powf(-2.0 * r / (beta as f64 * mp));
    Ok(DrfEstimate { value, premise_holds: value <= 1.0 })
}
