use super::antenna::top_indices;
use super::{jensen_rate_of, sq_norm, sum_rate_of, Strategy, SystemConfig, TrialRecord};
use crate::error::{invalid, Error, Result};
use crate::grassmann::{quantize, quantize_individual, Codebook, CompositePoint};
use crate::numerics::{svd, ComplexMatrix, C64};

/// How each selected user's eigen-channel vector becomes a beamformer.
#[derive(Clone, Copy, Debug)]
pub enum Quantizer<'a> {
    /// One index into a codebook over all `s` directions at once.
    Joint(&'a Codebook),
    /// One `m = 1` book per stream, quantized separately.
    Individual(&'a [Codebook]),
    /// Unquantized feedback.
    Perfect,
}

impl Quantizer<'_> {
    pub fn strategy(&self) -> Strategy {
        match self {
            Quantizer::Joint(_) => Strategy::Joint,
            Quantizer::Individual(_) => Strategy::Individual,
            Quantizer::Perfect => Strategy::Perfect,
        }
    }
}

/// Result of selecting users and forming their beams on one realization.
#[derive(Clone, Debug, PartialEq)]
pub struct Beamformed {
    /// Selected users, strongest first.
    pub selected: Vec<usize>,
    /// Unit-norm beamformers `b_k`.
    pub beams: Vec<Vec<C64>>,
    /// Equivalent receive vectors `H_k b_k`.
    pub equivalent: Vec<Vec<C64>>,
    /// Chordal distortion between eigen-channel vectors and beams.
    pub distortion: Option<f64>,
}

impl Beamformed {
    pub fn eta_sample(&self, cfg: &SystemConfig) -> f64 {
        self.equivalent.iter().map(|h| sq_norm(h)).sum::<f64>() / (cfg.beams * cfg.rx_antennas) as f64
    }

    pub fn rate(&self, cfg: &SystemConfig) -> Result<f64> {
        sum_rate_of(&self.equivalent, cfg.rx_antennas, cfg.power_per_beam())
    }

    pub fn jensen_rate(&self, cfg: &SystemConfig) -> Result<f64> {
        jensen_rate_of(&self.equivalent, cfg.rx_antennas, cfg.power_per_beam(), self.eta_sample(cfg))
    }

    pub fn record(&self, cfg: &SystemConfig, strategy: Strategy) -> Result<TrialRecord> {
        let sum_rate = match strategy {
            Strategy::JointBound => self.jensen_rate(cfg)?,
            s if s.is_beamforming() => self.rate(cfg)?,
            s => return Err(invalid(format!("{s} is not a beamforming strategy"))),
        };
        Ok(TrialRecord {
            strategy,
            sum_rate,
            eta_sample: self.eta_sample(cfg),
            selected: self.selected.clone(),
            distortion: self.distortion,
        })
    }
}

/// Users with the `s` largest channel Frobenius norms, strongest first.
pub fn user_select(channels: &[ComplexMatrix], s: usize) -> Result<Vec<usize>> {
    if s == 0 || s > channels.len() {
        return Err(invalid(format!("cannot select {s} of {} users", channels.len())));
    }
    let norms: Vec<f64> = channels.iter().map(|h| h.frobenius_norm_sq()).collect();
    Ok(top_indices(&norms, s))
}

/// Bits per book when `R_q` bits are shared by `s` individual books; the
/// first `R_q mod s` books get one extra bit.
pub fn individual_bit_split(quant_bits: u32, beams: usize) -> Vec<u32> {
    let s = beams as u32;
    (0..s).map(|k| quant_bits / s + u32::from(k < quant_bits % s)).collect()
}

pub fn beamform(channels: &[ComplexMatrix], quantizer: Quantizer<'_>, cfg: &SystemConfig) -> Result<Beamformed> {
    cfg.validate_for(quantizer.strategy())?;
    if channels.len() != cfg.users {
        return Err(Error::DimensionMismatch(format!("{} channels for {} users", channels.len(), cfg.users)));
    }
    if channels.iter().any(|h| h.rows() != cfg.rx_antennas || h.cols() != cfg.tx_antennas) {
        return Err(Error::DimensionMismatch("user channel shape disagrees with config".into()));
    }
    let selected = user_select(channels, cfg.beams)?;
    let eigen: Vec<Vec<C64>> =
        selected.iter().map(|&u| svd(&channels[u]).map(|d| d.top_right_vector())).collect::<Result<_>>()?;
    let v = CompositePoint::from_unnormalized(&eigen)?;

    let (beams, distortion) = match quantizer {
        Quantizer::Perfect => (eigen, None),
        // A single transmit antenna has nothing to quantize.
        _ if cfg.tx_antennas == 1 => (eigen, Some(0.0)),
        Quantizer::Joint(book) => {
            if book.n() != cfg.tx_antennas || book.m() != cfg.beams {
                return Err(Error::DimensionMismatch(format!(
                    "joint codebook is ({}, {}), need ({}, {})",
                    book.n(),
                    book.m(),
                    cfg.tx_antennas,
                    cfg.beams
                )));
            }
            let q = quantize(&v, book)?;
            let b = book.codeword(q.index);
            (b.components().map(<[C64]>::to_vec).collect(), Some(q.distortion))
        }
        Quantizer::Individual(books) => {
            let q = quantize_individual(&v, books)?;
            let b = q.indices.iter().zip(books).map(|(&i, book)| book.codeword(i).component(0).to_vec()).collect();
            (b, Some(q.distortion))
        }
    };
    let equivalent = selected.iter().zip(&beams).map(|(&u, b)| channels[u].mul_vec(b)).collect();
    Ok(Beamformed { selected, beams, equivalent, distortion })
}

/// Exact sum rate of beamforming along the fed-back directions.
pub fn beamforming_rate(
    channels: &[ComplexMatrix],
    quantizer: Quantizer<'_>,
    cfg: &SystemConfig,
) -> Result<TrialRecord> {
    beamform(channels, quantizer, cfg)?.record(cfg, quantizer.strategy())
}
