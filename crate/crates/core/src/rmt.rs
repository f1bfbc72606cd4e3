//! Marčenko–Pastur law for `(1/m) H H†` with `H` an `n × m` complex Gaussian
//! matrix and aspect ratio `m_bar = m / n`, plus the spectral functionals
//! built on it.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numerics::{bisect, nats_to_rate};

const EDGE_CLAMP: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MpLaw {
    pub m_bar: f64,
    pub lambda_minus: f64,
    pub lambda_plus: f64,
}

impl MpLaw {
    pub fn new(m_bar: f64) -> Result<Self> {
        let (lambda_minus, lambda_plus) = mp_support(m_bar)?;
        Ok(Self { m_bar, lambda_minus, lambda_plus })
    }

    /// Weight of the atom at zero.
    pub fn point_mass(&self) -> f64 {
        (1.0 - self.m_bar).max(0.0)
    }

    /// Mass of the absolutely continuous part.
    pub fn bulk_mass(&self) -> f64 {
        self.m_bar.min(1.0)
    }

    /// Density of the continuous part.
    pub fn density(&self, lambda: f64) -> f64 {
        if lambda <= self.lambda_minus || lambda >= self.lambda_plus || lambda <= 0.0 {
            return 0.0;
        }
        let r = (self.lambda_plus - lambda) * (lambda - self.lambda_minus);
        self.m_bar * r.max(0.0).sqrt() / (2.0 * PI * lambda)
    }

    /// Closed-form `∫_a^{λ+} dμ`, clamped to `{0, min(1, m_bar)}` outside the support.
    pub fn tail_mass(&self, a: f64) -> f64 {
        let mb = self.m_bar;
        if a >= self.lambda_plus - EDGE_CLAMP {
            return 0.0;
        }
        if a <= self.lambda_minus + EDGE_CLAMP || a <= 0.0 {
            return self.bulk_mass();
        }
        let root = ((self.lambda_plus - a) * (a - self.lambda_minus)).max(0.0).sqrt();
        let arg1 = (mb.sqrt() * (1.0 + 1.0 / mb - a) / 2.0).clamp(-1.0, 1.0);
        let arg2 = (mb.sqrt() / 2.0 * ((1.0 + 1.0 / mb) * a - (1.0 - 1.0 / mb).powi(2)) / a)
            .clamp(-1.0, 1.0);
        let t = -root + (1.0 + mb) / mb * (PI / 2.0 + arg1.asin())
            - (mb - 1.0).abs() / mb * (PI / 2.0 - arg2.asin());
        (mb / (2.0 * PI) * t).clamp(0.0, self.bulk_mass())
    }

    /// Closed-form first moment over the tail, `∫_a^{λ+} λ dμ`.
    pub fn tail_first_moment(&self, a: f64) -> f64 {
        let mb = self.m_bar;
        let a = a.clamp(self.lambda_minus, self.lambda_plus);
        if a >= self.lambda_plus - EDGE_CLAMP {
            return 0.0;
        }
        let root = ((self.lambda_plus - a) * (a - self.lambda_minus)).max(0.0).sqrt();
        let arg = (mb.sqrt() * (1.0 + 1.0 / mb - a) / 2.0).clamp(-1.0, 1.0);
        let v = mb / (2.0 * PI)
            * ((1.0 + 1.0 / mb - a) / 2.0 * root + 2.0 / mb * (PI / 2.0 + arg.asin()));
        v.clamp(0.0, 1.0)
    }

    /// CDF including the atom at zero.
    pub fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        self.point_mass() + self.bulk_mass() - self.tail_mass(x.max(self.lambda_minus))
    }
}

/// Support edges `(1 ∓ √(1/m_bar))²`.
pub fn mp_support(m_bar: f64) -> Result<(f64, f64)> {
    if !(m_bar > 0.0 && m_bar.is_finite()) {
        return Err(invalid(format!("aspect ratio must be positive, got {m_bar}")));
    }
    let r = (1.0 / m_bar).sqrt();
    Ok(((1.0 - r).powi(2), (1.0 + r).powi(2)))
}

pub fn mp_density(lambda: f64, m_bar: f64) -> Result<f64> {
    Ok(MpLaw::new(m_bar)?.density(lambda))
}

pub fn mp_tail_mass(a: f64, m_bar: f64) -> Result<f64> {
    Ok(MpLaw::new(m_bar)?.tail_mass(a))
}

/// Threshold `a` whose MP tail mass equals `tau`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationQuery {
    pub tau: f64,
    pub a: f64,
}

fn check_tau(tau: f64, law: &MpLaw) -> Result<()> {
    if !(tau > 0.0 && tau < law.bulk_mass()) {
        return Err(Error::Domain(format!(
            "tau must lie in (0, {}), got {tau}",
            law.bulk_mass()
        )));
    }
    Ok(())
}

pub fn solve_threshold(tau: f64, m_bar: f64) -> Result<TruncationQuery> {
    let law = MpLaw::new(m_bar)?;
    check_tau(tau, &law)?;
    let a = bisect(|a| law.tail_mass(a) - tau, law.lambda_minus, law.lambda_plus, 1e-15)?;
    Ok(TruncationQuery { tau, a })
}

/// Limiting mean of the top `τ n` eigenvalues divided by `n`.
pub fn zeta_bar(tau: f64, m_bar: f64) -> Result<f64> {
    let law = MpLaw::new(m_bar)?;
    let q = solve_threshold(tau, m_bar)?;
    Ok(law.tail_first_moment(q.a))
}

/// Surrogate for `E[λ_1 | tr W = 1]` of an `n × m` complex Wishart matrix.
/// Arguments are swapped when `n > m`; `min(n, m) = 1` gives exactly 1.
pub fn zeta1_approx(n: usize, m: usize) -> Result<f64> {
    let (n, m) = if n <= m { (n, m) } else { (m, n) };
    if n == 0 {
        return Err(invalid("matrix dimensions must be positive"));
    }
    if n == 1 {
        return Ok(1.0);
    }
    zeta_bar(1.0 / n as f64, m as f64 / n as f64)
}

/// `E[λ_i | tr W = c]` via homogeneity; only the largest eigenvalue is supported.
pub fn conditioned_eigenvalue(i: usize, n: usize, m: usize, c: f64) -> Result<f64> {
    if i != 1 {
        return Err(Error::Unsupported(format!("conditioned eigenvalue index {i}; only 1 is available")));
    }
    if c < 0.0 {
        return Err(invalid("trace must be nonnegative"));
    }
    Ok(zeta1_approx(n, m)? * c)
}

/// Limit of `(1/n) E log det(I + c P P†)` for an `n × m` isotropic frame `P`
/// with `m / n = m_bar`, reported in rate units.
///
/// Equals `∫ log(1 + c m_bar λ) dμ` under the MP law.
pub fn shannon_transform(c: f64, m_bar: f64) -> Result<f64> {
    MpLaw::new(m_bar)?;
    if !(c >= 0.0 && c.is_finite()) {
        return Err(invalid(format!("c must be nonnegative and finite, got {c}")));
    }
    if c == 0.0 {
        return Ok(0.0);
    }
    let r = m_bar.sqrt();
    let f = ((1.0 + c * (r - 1.0).powi(2)).sqrt() - (1.0 + c * (r + 1.0).powi(2)).sqrt()).powi(2);
    let nats = if c < 1e-6 {
        // Two-term series; the closed form cancels catastrophically here.
        m_bar * c - m_bar * (1.0 + m_bar) * c * c / 2.0
    } else {
        (1.0 + c * m_bar - f / 4.0).ln() + m_bar * (1.0 + c - f / 4.0).ln() - f / (4.0 * c)
    };
    Ok(nats_to_rate(nats.max(0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate;

    const RATIOS: [f64; 6] = [0.25, 0.5, 1.0, 2.0, 3.0, 4.0];

    #[test]
    fn support_edges() {
        assert_eq!(mp_support(1.0).unwrap(), (0.0, 4.0));
        let (lo, hi) = mp_support(4.0).unwrap();
        assert!((lo - 0.25).abs() < 1e-15 && (hi - 2.25).abs() < 1e-15);
        let (lo, hi) = mp_support(0.25).unwrap();
        assert!((lo - 1.0).abs() < 1e-15 && (hi - 9.0).abs() < 1e-15);
        assert!(mp_support(0.0).is_err());
    }

    #[test]
    fn density_total_mass() {
        for mb in RATIOS {
            let law = MpLaw::new(mb).unwrap();
            let q = integrate(|x| law.density(x), law.lambda_minus, law.lambda_plus, 1e-12, 1e-12).unwrap();
            assert!((q.value + law.point_mass() - 1.0).abs() < 1e-9, "m_bar={mb}");
        }
    }

    #[test]
    fn tail_mass_and_moment_match_quadrature() {
        for mb in RATIOS {
            let law = MpLaw::new(mb).unwrap();
            for k in 1..10 {
                let a = law.lambda_minus + (law.lambda_plus - law.lambda_minus) * k as f64 / 10.0;
                let q0 = integrate(|x| law.density(x), a, law.lambda_plus, 1e-12, 1e-12).unwrap();
                let q1 = integrate(|x| x * law.density(x), a, law.lambda_plus, 1e-12, 1e-12).unwrap();
                assert!((law.tail_mass(a) - q0.value).abs() < 1e-8, "m_bar={mb} a={a}");
                assert!((law.tail_first_moment(a) - q1.value).abs() < 1e-8, "m_bar={mb} a={a}");
            }
            assert_eq!(law.tail_mass(law.lambda_plus), 0.0);
            assert_eq!(law.tail_mass(law.lambda_minus), law.bulk_mass());
        }
        let q = integrate(|x| (x * (4.0 - x)).sqrt() / (2.0 * PI * x), 1.0, 4.0, 1e-12, 1e-12).unwrap();
        assert!((mp_tail_mass(1.0, 1.0).unwrap() - q.value).abs() < 1e-8);
    }

    #[test]
    fn threshold_round_trip() {
        for mb in RATIOS {
            let law = MpLaw::new(mb).unwrap();
            for k in 1..10 {
                let a0 = law.lambda_minus + (law.lambda_plus - law.lambda_minus) * k as f64 / 10.0;
                let tau = law.tail_mass(a0);
                let q = solve_threshold(tau, mb).unwrap();
                assert!((q.a - a0).abs() < 1e-8);
                assert!((law.tail_mass(q.a) - tau).abs() < 1e-10);
            }
        }
        let q = solve_threshold(1e-9, 1.0).unwrap();
        assert!(q.a > 3.99);
        assert!(solve_threshold(1.0, 1.0).is_err());
        assert!(solve_threshold(0.6, 0.5).is_err());
    }

    #[test]
    fn zeta_bar_shape() {
        for mb in RATIOS {
            let law = MpLaw::new(mb).unwrap();
            let mut prev = 0.0;
            for k in 1..50 {
                let tau = law.bulk_mass() * k as f64 / 50.0;
                let z = zeta_bar(tau, mb).unwrap();
                assert!(z > prev);
                assert!(z <= tau * law.lambda_plus + 1e-12);
                prev = z;
            }
            let z = zeta_bar(law.bulk_mass() * (1.0 - 1e-9), mb).unwrap();
            assert!((z - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn zeta1_grid() {
        assert!((zeta1_approx(2, 2).unwrap() - 0.89373).abs() < 1e-4);
        assert!((zeta1_approx(2, 4).unwrap() - 0.78972).abs() < 1e-4);
        assert_eq!(zeta1_approx(4, 2).unwrap(), zeta1_approx(2, 4).unwrap());
        assert_eq!(zeta1_approx(1, 7).unwrap(), 1.0);
        let mut prev = f64::INFINITY;
        let mut prev_scaled = 0.0;
        for n in [2usize, 3, 4, 8, 16, 32, 64, 128] {
            let z = zeta1_approx(n, n).unwrap();
            assert!(z < prev);
            assert!(n as f64 * z > prev_scaled && n as f64 * z <= 4.0);
            prev = z;
            prev_scaled = n as f64 * z;
        }
    }

    #[test]
    fn conditioned_eigenvalue_homogeneity() {
        assert_eq!(conditioned_eigenvalue(1, 2, 2, 0.0).unwrap(), 0.0);
        let one = conditioned_eigenvalue(1, 3, 5, 1.3).unwrap();
        let two = conditioned_eigenvalue(1, 3, 5, 2.6).unwrap();
        assert!((two - 2.0 * one).abs() < 1e-14);
        assert!(matches!(conditioned_eigenvalue(2, 2, 2, 1.0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn shannon_transform_matches_quadrature() {
        for mb in RATIOS {
            let law = MpLaw::new(mb).unwrap();
            for c in [1e-3, 0.1, 0.5, 2.0, 10.0, 100.0] {
                let q = integrate(
                    |x| (1.0 + c * mb * x).log2() * law.density(x),
                    law.lambda_minus,
                    law.lambda_plus,
                    1e-13,
                    1e-13,
                )
                .unwrap();
                let st = shannon_transform(c, mb).unwrap();
                assert!((st - q.value).abs() < 1e-9 * (1.0 + q.value), "m_bar={mb} c={c}");
            }
        }
    }

    #[test]
    fn shannon_transform_shape() {
        assert_eq!(shannon_transform(0.0, 2.0).unwrap(), 0.0);
        for mb in RATIOS {
            let cs: Vec<f64> = (0..200).map(|i| i as f64 * 0.1).collect();
            let v: Vec<f64> = cs.iter().map(|&c| shannon_transform(c, mb).unwrap()).collect();
            for w in v.windows(3) {
                assert!(w[1] > w[0]);
                assert!(w[2] - w[1] <= w[1] - w[0] + 1e-12);
            }
            let h = 1e-6;
            let deriv = shannon_transform(h, mb).unwrap() / h * std::f64::consts::LN_2;
            assert!((deriv - mb).abs() < 1e-4, "m_bar={mb}: {deriv}");
        }
    }
}
