use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::strategies::{Strategy, SystemConfig};

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Parameter varied across sweep points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    /// Total SNR in dB.
    SnrDb,
    /// Beamforming feedback bits `R_q`.
    QuantBits,
    /// Number of streams `s`.
    Beams,
    /// Number of users `N`.
    Users,
    /// A single configuration, no parameter varied.
    None,
}

impl SweepParam {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepParam::SnrDb => "snr_db",
            SweepParam::QuantBits => "quant_bits",
            SweepParam::Beams => "beams",
            SweepParam::Users => "users",
            SweepParam::None => "none",
        }
    }

    /// `base` with this parameter set to `value`.
    pub fn apply(self, base: &SystemConfig, value: f64) -> Result<SystemConfig> {
        let count = |v: f64| -> Result<usize> {
            if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
                Ok(v as usize)
            } else {
                Err(invalid(format!("{} needs a nonnegative integer, got {v}", self.as_str())))
            }
        };
        let mut cfg = *base;
        match self {
            SweepParam::SnrDb => cfg.rho = db_to_linear(value),
            SweepParam::QuantBits => cfg.quant_bits = count(value)? as u32,
            SweepParam::Beams => cfg.beams = count(value)?,
            SweepParam::Users => cfg.users = count(value)?,
            SweepParam::None => {}
        }
        Ok(cfg)
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [SweepParam::SnrDb, SweepParam::QuantBits, SweepParam::Beams, SweepParam::Users, SweepParam::None]
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| invalid(format!("unknown sweep parameter {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub base: SystemConfig,
    pub param: SweepParam,
    pub values: Vec<f64>,
    pub strategies: Vec<Strategy>,
    pub trials: usize,
    /// Independent random codebooks per point; trials are split evenly among them.
    pub codebooks_per_point: usize,
    pub seed: u64,
    /// When set, `s` is chosen per point by maximizing the theory bound over these values.
    pub beam_candidates: Option<Vec<usize>>,
}

impl SweepSpec {
    /// SNR sweep of antenna selection against the no-CSIT baseline.
    pub fn snr_default() -> Self {
        Self {
            base: SystemConfig::default(),
            param: SweepParam::SnrDb,
            values: (0..7).map(|i| -5.0 + 5.0 * i as f64).collect(),
            strategies: vec![Strategy::Antenna, Strategy::AntennaBound, Strategy::NoCsit],
            trials: 10_000,
            codebooks_per_point: 1,
            seed: 1,
            beam_candidates: None,
        }
    }

    /// Feedback-bit sweep of the beamforming variants with the antenna-selection reference.
    pub fn rq_default() -> Self {
        Self {
            base: SystemConfig::default(),
            param: SweepParam::QuantBits,
            values: vec![2.0, 4.0, 6.0, 8.0, 10.0, 12.0],
            strategies: vec![Strategy::Joint, Strategy::Individual, Strategy::Perfect, Strategy::Antenna],
            trials: 10_000,
            codebooks_per_point: 16,
            seed: 1,
            beam_candidates: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(invalid("trials must be at least 1"));
        }
        if self.codebooks_per_point == 0 {
            return Err(invalid("codebooks_per_point must be at least 1"));
        }
        if self.values.is_empty() {
            return Err(invalid("sweep needs at least one value"));
        }
        if self.values.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("sweep values must be strictly increasing"));
        }
        if self.strategies.is_empty() {
            return Err(invalid("sweep needs at least one strategy"));
        }
        if let Some(c) = &self.beam_candidates {
            if c.is_empty() {
                return Err(invalid("beam_candidates is empty"));
            }
            if self.param == SweepParam::Beams {
                return Err(invalid("beam_candidates cannot be combined with a beams sweep"));
            }
        }
        for &v in &self.values {
            let cfg = self.param.apply(&self.base, v)?;
            if self.beam_candidates.is_none() {
                for &s in &self.strategies {
                    cfg.validate_for(s)?;
                }
            }
        }
        Ok(())
    }
}

/// One aggregated (point, strategy) result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub param: SweepParam,
    pub value: f64,
    pub strategy: Strategy,
    pub mean_rate_bits: f64,
    pub stderr: f64,
    pub theory_bound_bits: f64,
    pub feedback_bits: f64,
    pub trials: usize,
    pub seed: u64,
}
