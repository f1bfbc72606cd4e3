use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, C64};

/// Generator behind every [`RngStream`].
pub type StreamRng = ChaCha8Rng;

/// Address of an independent random stream: a master seed plus a stream id.
///
/// The stream id selects one of ChaCha's 2^64 keystreams under the key derived
/// from the master seed, so the sequence depends only on the pair and never on
/// which thread or in which order it is consumed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        Self { master_seed, stream_id }
    }

    /// Child stream addressed by `tag`. Chains like
    /// `s.derive(TRIAL).derive(t)` give a tree of independent streams.
    pub fn derive(&self, tag: u64) -> Self {
        let id = splitmix64(self.stream_id ^ splitmix64(tag.wrapping_add(0x9E37_79B9_7F4A_7C15)));
        Self { master_seed: self.master_seed, stream_id: id }
    }

    pub fn rng(&self) -> StreamRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_id);
        rng
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One CN(0,1) draw: real and imaginary parts each N(0, 1/2).
#[inline]
pub fn complex_gaussian<R: rand::Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// `rows x cols` matrix of i.i.d. CN(0,1) entries, filled row-major.
pub fn sample_gaussian_matrix<R: rand::Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let data: Vec<C64> = (0..rows * cols).map(|_| complex_gaussian(rng)).collect();
    ComplexMatrix::new(rows, cols, data).expect("gaussian samples are finite")
}

/// Uniform point on the unit sphere of C^n (a normalized Gaussian vector).
pub fn sample_unit_vector<R: rand::Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..n).map(|_| complex_gaussian(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}
