use super::matrix::{ComplexMatrix, C64};
use super::nats_to_rate;
use crate::error::{Error, Result};

const SVD_MAX_ITERATIONS: usize = 10_000;
const HERMITIAN_TOLERANCE: f64 = 1e-9;

/// Thin SVD `A = U diag(sigma) V^H` with `sigma` sorted decreasingly.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub sigma: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    /// Column of `V` paired with the largest singular value.
    pub fn top_right_vector(&self) -> Vec<C64> {
        self.v.column(0)
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let k = self.sigma.len();
        let mut us = self.u.clone();
        for r in 0..us.rows() {
            for c in 0..k {
                us.set(r, c, us.get(r, c) * self.sigma[c]);
            }
        }
        &us * &self.v.adjoint()
    }
}

pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    let m = a.to_nalgebra();
    let dec = m
        .try_svd(true, true, f64::EPSILON, SVD_MAX_ITERATIONS)
        .ok_or_else(|| Error::Numerical(format!("SVD of a {}x{} matrix did not converge", a.rows(), a.cols())))?;
    let u = dec.u.as_ref().ok_or_else(|| Error::Numerical("SVD returned no U".into()))?;
    let v_t = dec.v_t.as_ref().ok_or_else(|| Error::Numerical("SVD returned no V".into()))?;
    let sigma: Vec<f64> = dec.singular_values.iter().copied().collect();
    debug_assert!(sigma.windows(2).all(|w| w[0] >= w[1]));
    Ok(Svd {
        u: ComplexMatrix::from_nalgebra(u),
        sigma,
        v: ComplexMatrix::from_nalgebra(&v_t.adjoint()),
    })
}

/// Singular values only, decreasing.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let dec = a
        .to_nalgebra()
        .try_svd(false, false, f64::EPSILON, SVD_MAX_ITERATIONS)
        .ok_or_else(|| Error::Numerical(format!("SVD of a {}x{} matrix did not converge", a.rows(), a.cols())))?;
    Ok(dec.singular_values.iter().copied().collect())
}

/// `log det M` in rate units (bits) for Hermitian positive semidefinite `M`.
///
/// Uses an in-place Cholesky factorization. Pivots that are negative beyond
/// rounding are a domain error; a zero pivot gives `-inf`.
pub fn logdet_hermitian_psd(m: &ComplexMatrix) -> Result<f64> {
    let n = m.rows();
    if n != m.cols() {
        return Err(Error::DimensionMismatch(format!("log-det of a {}x{} matrix", n, m.cols())));
    }
    let scale = m.as_slice().iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    for i in 0..n {
        for j in i..n {
            if (m.get(i, j) - m.get(j, i).conj()).norm() > HERMITIAN_TOLERANCE * scale {
                return Err(Error::Domain(format!("matrix is not Hermitian at ({i},{j})")));
            }
        }
    }

    let pivot_floor = HERMITIAN_TOLERANCE * scale;
    let mut l = vec![C64::new(0.0, 0.0); n * n];
    let mut log_det = 0.0;
    for j in 0..n {
        let mut d = m.get(j, j).re;
        for k in 0..j {
            d -= l[j * n + k].norm_sqr();
        }
        if d < -pivot_floor {
            return Err(Error::Domain(format!("negative pivot {d:e} at row {j}: matrix is not PSD")));
        }
        if d <= 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        let root = d.sqrt();
        l[j * n + j] = C64::new(root, 0.0);
        log_det += d.ln();
        for i in j + 1..n {
            let mut s = m.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = s / root;
        }
    }
    Ok(nats_to_rate(log_det))
}
