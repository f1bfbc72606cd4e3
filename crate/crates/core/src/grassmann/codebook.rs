use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::point::{inner, CompositePoint};
use crate::error::{invalid, Error, Result};
use crate::numerics::{compensated_sum, sample_unit_vector, RngStream, C64};

/// Exhaustive search keeps quantization exact; this caps its cost.
pub const MAX_CODEBOOK_SIZE: usize = 1 << 16;

const MAGIC: &[u8; 8] = b"MACFBCB1";
const DISTORTION_CHUNK: usize = 256;

/// `K` composite points sharing `(n, m)`, stored as one flat array.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Codebook {
    n: usize,
    m: usize,
    k: usize,
    data: Vec<C64>,
    seed: Option<RngStream>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quantized {
    pub index: usize,
    pub distortion: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuantizedIndividual {
    pub indices: Vec<usize>,
    pub distortion: f64,
}

impl Codebook {
    pub fn from_points(points: &[CompositePoint]) -> Result<Self> {
        let first = points.first().ok_or_else(|| invalid("codebook must be nonempty"))?;
        let (n, m) = (first.n(), first.m());
        if points.len() > MAX_CODEBOOK_SIZE {
            return Err(invalid(format!("codebook size {} exceeds {MAX_CODEBOOK_SIZE}", points.len())));
        }
        if points.iter().any(|p| p.n() != n || p.m() != m) {
            return Err(Error::DimensionMismatch("codewords have different shapes".into()));
        }
        let data = points.iter().flat_map(|p| p.as_slice().iter().copied()).collect();
        Ok(Self { n, m, k: points.len(), data, seed: None })
    }

    /// Every combination of codewords from `m = 1` books; codeword index is
    /// mixed radix with the first book varying fastest.
    pub fn cartesian_product(books: &[Codebook]) -> Result<Self> {
        let n = books.first().ok_or_else(|| invalid("need at least one book"))?.n;
        if books.iter().any(|b| b.m != 1 || b.n != n) {
            return Err(Error::DimensionMismatch("product needs m = 1 books of equal n".into()));
        }
        let k = books.iter().try_fold(1usize, |acc, b| acc.checked_mul(b.k)).unwrap_or(usize::MAX);
        if k > MAX_CODEBOOK_SIZE {
            return Err(invalid(format!("product size exceeds {MAX_CODEBOOK_SIZE}")));
        }
        let mut data = Vec::with_capacity(k * books.len() * n);
        for idx in 0..k {
            let mut rest = idx;
            for b in books {
                data.extend_from_slice(b.codeword(rest % b.k).component(0));
                rest /= b.k;
            }
        }
        Ok(Self { n, m: books.len(), k, data, seed: None })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        self.k == 0
    }

    pub fn seed(&self) -> Option<RngStream> {
        self.seed
    }

    fn slot(&self, index: usize) -> &[C64] {
        let w = self.n * self.m;
        &self.data[index * w..(index + 1) * w]
    }

    pub fn codeword(&self, index: usize) -> CompositePoint {
        CompositePoint::from_flat_unchecked(self.n, self.m, self.slot(index).to_vec())
    }

    /// Serializes as a fixed header followed by little-endian `(re, im)` pairs.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(MAGIC)?;
        for v in [self.n as u64, self.m as u64, self.k as u64] {
            w.write_all(&v.to_le_bytes())?;
        }
        let (flag, master, stream) = match self.seed {
            Some(s) => (1u64, s.master_seed, s.stream_id),
            None => (0, 0, 0),
        };
        for v in [flag, master, stream] {
            w.write_all(&v.to_le_bytes())?;
        }
        for z in &self.data {
            w.write_all(&z.re.to_le_bytes())?;
            w.write_all(&z.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let mut word = || -> Result<u64> {
            let mut b = [0u8; 8];
            r.read_exact(&mut b)?;
            Ok(u64::from_le_bytes(b))
        };
        let (n, m, k) = (word()? as usize, word()? as usize, word()? as usize);
        let (flag, master, stream) = (word()?, word()?, word()?);
        if n == 0 || m == 0 || k == 0 || k > MAX_CODEBOOK_SIZE || flag > 1 {
            return Err(Error::Format(format!("bad header n={n} m={m} K={k}")));
        }
        let len = n.checked_mul(m).and_then(|x| x.checked_mul(k)).ok_or_else(|| Error::Format("header overflows".into()))?;
        let mut bytes = vec![0u8; len * 16];
        r.read_exact(&mut bytes)?;
        let data = bytes
            .chunks_exact(16)
            .map(|c| {
                let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
                let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
                C64::new(re, im)
            })
            .collect();
        let seed = (flag == 1).then(|| RngStream::new(master, stream));
        Ok(Self { n, m, k, data, seed })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let f = std::fs::File::create(path)?;
        let mut w = std::io::BufWriter::new(f);
        self.write_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_from(std::io::BufReader::new(std::fs::File::open(path)?))
    }
}

/// `K` codewords whose components are independent isotropic unit vectors.
pub fn random_codebook(n: usize, m: usize, k: usize, seed: RngStream) -> Result<Codebook> {
    if n == 0 || m == 0 {
        return Err(invalid("codebook dimensions must be positive"));
    }
    if k == 0 || k > MAX_CODEBOOK_SIZE {
        return Err(invalid(format!("codebook size must be in 1..={MAX_CODEBOOK_SIZE}, got {k}")));
    }
    let mut rng = seed.rng();
    let mut data = Vec::with_capacity(n * m * k);
    for _ in 0..k * m {
        data.extend(sample_unit_vector(&mut rng, n));
    }
    Ok(Codebook { n, m, k, data, seed: Some(seed) })
}

/// Nearest codeword in chordal distance, found by scanning every entry.
/// The scan maximizes `Σ_j |v_j† b_j|²`; ties go to the lowest index.
pub fn quantize(v: &CompositePoint, book: &Codebook) -> Result<Quantized> {
    if book.is_empty() {
        return Err(invalid("empty codebook"));
    }
    if v.n() != book.n || v.m() != book.m {
        return Err(Error::DimensionMismatch(format!(
            "point is ({}, {}), codebook is ({}, {})",
            v.n(),
            v.m(),
            book.n,
            book.m
        )));
    }
    let n = book.n;
    let mut best = (0usize, f64::NEG_INFINITY);
    for idx in 0..book.k {
        let gain: f64 = book
            .slot(idx)
            .chunks(n)
            .zip(v.components())
            .map(|(b, vj)| inner(vj, b).norm_sqr())
            .sum();
        if gain > best.1 {
            best = (idx, gain);
        }
    }
    Ok(Quantized { index: best.0, distortion: (book.m as f64 - best.1).max(0.0) })
}

/// Quantizes each component against its own `m = 1` book.
pub fn quantize_individual(v: &CompositePoint, books: &[Codebook]) -> Result<QuantizedIndividual> {
    if books.len() != v.m() {
        return Err(Error::DimensionMismatch(format!("{} books for {} components", books.len(), v.m())));
    }
    let mut indices = Vec::with_capacity(books.len());
    let mut distortion = 0.0;
    for (vj, book) in v.components().zip(books) {
        if book.m != 1 {
            return Err(Error::DimensionMismatch("individual books must have m = 1".into()));
        }
        let point = CompositePoint::from_flat_unchecked(v.n(), 1, vj.to_vec());
        let q = quantize(&point, book)?;
        indices.push(q.index);
        distortion += q.distortion;
    }
    Ok(QuantizedIndividual { indices, distortion })
}

/// Monte Carlo `E_Q[min_P d_c²(P, Q)]` over isotropic `Q`, with its standard error.
pub fn measure_distortion(book: &Codebook, samples: usize, seed: RngStream) -> Result<(f64, f64)> {
    if samples == 0 {
        return Err(invalid("need at least one sample"));
    }
    let chunks = samples.div_ceil(DISTORTION_CHUNK);
    let per_chunk: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = seed.derive(c as u64).rng();
            let count = DISTORTION_CHUNK.min(samples - c * DISTORTION_CHUNK);
            (0..count)
                .map(|_| {
                    let data = (0..book.m).flat_map(|_| sample_unit_vector(&mut rng, book.n)).collect();
                    let q = CompositePoint::from_flat_unchecked(book.n, book.m, data);
                    quantize(&q, book).map(|r| r.distortion)
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let values: Vec<f64> = per_chunk.into_iter().flatten().collect();
    let mean = compensated_sum(values.iter().copied()) / samples as f64;
    let stderr = if samples > 1 {
        let ss = compensated_sum(values.iter().map(|x| (x - mean).powi(2)));
        (ss / (samples - 1) as f64).sqrt() / (samples as f64).sqrt()
    } else {
        0.0
    };
    Ok((mean, stderr))
}
