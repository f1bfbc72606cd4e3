use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numerics::C64;

const UNIT_TOL: f64 = 1e-10;

/// `m` unit vectors in `C^n`, stored contiguously.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompositePoint {
    n: usize,
    m: usize,
    data: Vec<C64>,
}

pub(crate) fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

impl CompositePoint {
    /// Builds a point from vectors that are already unit norm.
    pub fn new(vectors: &[Vec<C64>]) -> Result<Self> {
        let p = Self::collect(vectors)?;
        for (j, v) in p.components().enumerate() {
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > UNIT_TOL {
                return Err(invalid(format!("component {j} has norm {norm}, expected 1")));
            }
        }
        Ok(p)
    }

    /// Builds a point by normalizing each vector.
    pub fn from_unnormalized(vectors: &[Vec<C64>]) -> Result<Self> {
        let mut p = Self::collect(vectors)?;
        let n = p.n;
        for (j, v) in p.data.chunks_mut(n).enumerate() {
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if !(norm > 0.0 && norm.is_finite()) {
                return Err(invalid(format!("component {j} cannot be normalized")));
            }
            v.iter_mut().for_each(|z| *z /= norm);
        }
        Ok(p)
    }

    fn collect(vectors: &[Vec<C64>]) -> Result<Self> {
        let m = vectors.len();
        if m == 0 {
            return Err(invalid("a composite point needs at least one component"));
        }
        let n = vectors[0].len();
        if n == 0 {
            return Err(invalid("ambient dimension must be positive"));
        }
        if vectors.iter().any(|v| v.len() != n) {
            return Err(Error::DimensionMismatch("components have different lengths".into()));
        }
        let data: Vec<C64> = vectors.iter().flatten().copied().collect();
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(invalid("non-finite entry"));
        }
        Ok(Self { n, m, data })
    }

    pub(crate) fn from_flat_unchecked(n: usize, m: usize, data: Vec<C64>) -> Self {
        debug_assert_eq!(data.len(), n * m);
        Self { n, m, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn component(&self, j: usize) -> &[C64] {
        &self.data[j * self.n..(j + 1) * self.n]
    }

    pub fn components(&self) -> impl Iterator<Item = &[C64]> {
        self.data.chunks(self.n)
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }
}

/// `Σ_j (1 - |p_j† q_j|²)`.
pub fn chordal_distance_sq(p: &CompositePoint, q: &CompositePoint) -> Result<f64> {
    if p.n != q.n || p.m != q.m {
        return Err(Error::DimensionMismatch(format!(
            "points live on ({}, {}) and ({}, {})",
            p.n, p.m, q.n, q.m
        )));
    }
    Ok(p.components()
        .zip(q.components())
        .map(|(a, b)| (1.0 - inner(a, b).norm_sqr()).max(0.0))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{sample_unit_vector, RngStream};

    fn random_point(rng: &mut impl rand::Rng, n: usize, m: usize) -> CompositePoint {
        let v: Vec<Vec<C64>> = (0..m).map(|_| sample_unit_vector(rng, n)).collect();
        CompositePoint::new(&v).unwrap()
    }

    #[test]
    fn distance_basics() {
        let mut rng = RngStream::new(3, 0).rng();
        let p = random_point(&mut rng, 4, 3);
        assert!(chordal_distance_sq(&p, &p).unwrap() < 1e-14);
        let e = |i: usize| {
            let mut v = vec![C64::new(0.0, 0.0); 3];
            v[i] = C64::new(1.0, 0.0);
            v
        };
        let a = CompositePoint::new(&[e(0), e(1)]).unwrap();
        let b = CompositePoint::new(&[e(2), e(0)]).unwrap();
        assert!((chordal_distance_sq(&a, &b).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn distance_phase_invariant_and_symmetric() {
        let mut rng = RngStream::new(4, 0).rng();
        for _ in 0..100 {
            let p = random_point(&mut rng, 3, 2);
            let q = random_point(&mut rng, 3, 2);
            let d = chordal_distance_sq(&p, &q).unwrap();
            assert!((0.0..=2.0).contains(&d));
            assert!((d - chordal_distance_sq(&q, &p).unwrap()).abs() < 1e-15);
            let rotated: Vec<Vec<C64>> = q
                .components()
                .enumerate()
                .map(|(j, v)| {
                    let ph = C64::from_polar(1.0, 0.7 + j as f64);
                    v.iter().map(|z| z * ph).collect()
                })
                .collect();
            let q2 = CompositePoint::new(&rotated).unwrap();
            assert!((d - chordal_distance_sq(&p, &q2).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn validation() {
        assert!(CompositePoint::new(&[vec![C64::new(2.0, 0.0)]]).is_err());
        assert!(CompositePoint::from_unnormalized(&[vec![C64::new(2.0, 0.0)]]).is_ok());
        assert!(CompositePoint::new(&[]).is_err());
        let a = CompositePoint::new(&[vec![C64::new(1.0, 0.0)]]).unwrap();
        let b = CompositePoint::new(&[vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]]).unwrap();
        assert!(matches!(chordal_distance_sq(&a, &b), Err(Error::DimensionMismatch(_))));
    }
}
