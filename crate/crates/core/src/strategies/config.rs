use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numerics::{sample_gaussian_matrix, ComplexMatrix};

/// Scalar parameters of one uplink configuration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    /// Number of users `N`.
    pub users: usize,
    /// Transmit antennas per user `L_T`.
    pub tx_antennas: usize,
    /// Receive antennas `L_R`.
    pub rx_antennas: usize,
    /// Total average SNR, linear.
    pub rho: f64,
    /// Number of active streams `s`; each gets power `rho / s`.
    pub beams: usize,
    /// Beamforming feedback bits `R_q`.
    pub quant_bits: u32,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self { users: 32, tx_antennas: 2, rx_antennas: 4, rho: 10.0, beams: 4, quant_bits: 12 }
    }
}

impl SystemConfig {
    pub fn validate(&self) -> Result<()> {
        if self.users == 0 {
            return Err(invalid("users must be at least 1"));
        }
        if self.tx_antennas == 0 {
            return Err(invalid("tx_antennas must be at least 1"));
        }
        if self.rx_antennas == 0 {
            return Err(invalid("rx_antennas must be at least 1"));
        }
        if !(self.rho >= 0.0 && self.rho.is_finite()) {
            return Err(invalid(format!("rho must be finite and nonnegative, got {}", self.rho)));
        }
        if self.beams == 0 {
            return Err(invalid("beams must be at least 1"));
        }
        Ok(())
    }

    pub fn validate_for(&self, strategy: Strategy) -> Result<()> {
        self.validate()?;
        if strategy.is_antenna() && self.beams > self.total_tx() {
            return Err(invalid(format!(
                "beams={} exceeds the {} transmit antennas available",
                self.beams,
                self.total_tx()
            )));
        }
        if strategy.is_beamforming() && self.beams > self.users {
            return Err(invalid(format!("beams={} exceeds users={}", self.beams, self.users)));
        }
        if strategy.is_beamforming() && self.quant_bits > 16 {
            return Err(invalid(format!("quant_bits={} exceeds 16", self.quant_bits)));
        }
        Ok(())
    }

    pub fn total_tx(&self) -> usize {
        self.users * self.tx_antennas
    }

    pub fn power_per_beam(&self) -> f64 {
        self.rho / self.beams as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Strongest-antenna selection, exact rate.
    Antenna,
    /// Strongest-antenna selection, Jensen bound with the realization's η.
    AntennaBound,
    /// Equal power on every transmit antenna, no feedback.
    NoCsit,
    /// Beamforming with jointly quantized eigen-channel vectors.
    Joint,
    /// Jensen bound of the joint beamforming rate.
    JointBound,
    /// Beamforming with per-user quantization.
    Individual,
    /// Beamforming with unquantized eigen-channel vectors.
    Perfect,
}

impl Strategy {
    pub const ALL: [Strategy; 7] = [
        Strategy::Antenna,
        Strategy::AntennaBound,
        Strategy::NoCsit,
        Strategy::Joint,
        Strategy::JointBound,
        Strategy::Individual,
        Strategy::Perfect,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Antenna => "antenna",
            Strategy::AntennaBound => "antenna_bound",
            Strategy::NoCsit => "no_csit",
            Strategy::Joint => "joint",
            Strategy::JointBound => "joint_bound",
            Strategy::Individual => "individual",
            Strategy::Perfect => "perfect",
        }
    }

    pub fn is_antenna(self) -> bool {
        matches!(self, Strategy::Antenna | Strategy::AntennaBound)
    }

    pub fn is_beamforming(self) -> bool {
        matches!(self, Strategy::Joint | Strategy::JointBound | Strategy::Individual | Strategy::Perfect)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| invalid(format!("unknown strategy {s:?}")))
    }
}

/// Outputs of one strategy on one channel realization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub strategy: Strategy,
    /// Bits per channel use.
    pub sum_rate: f64,
    /// Mean selected channel gain per stream, normalized by `L_R`.
    pub eta_sample: f64,
    /// Selected antenna or user indices, strongest first.
    pub selected: Vec<usize>,
    /// Total chordal quantization distortion (beamforming only).
    pub distortion: Option<f64>,
}

/// The aggregate `L_R × (N L_T)` channel; user `i` owns columns `i L_T .. (i+1) L_T`.
pub fn sample_channel<R: Rng + ?Sized>(rng: &mut R, cfg: &SystemConfig) -> ComplexMatrix {
    sample_gaussian_matrix(rng, cfg.rx_antennas, cfg.total_tx())
}

pub fn user_channels(h_all: &ComplexMatrix, tx_antennas: usize) -> Result<Vec<ComplexMatrix>> {
    if tx_antennas == 0 || h_all.cols() % tx_antennas != 0 {
        return Err(Error::DimensionMismatch(format!(
            "{} columns do not split into blocks of {tx_antennas}",
            h_all.cols()
        )));
    }
    Ok((0..h_all.cols() / tx_antennas).map(|i| h_all.column_block(i * tx_antennas, tx_antennas)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategy_names_round_trip() {
        for s in Strategy::ALL {
            assert_eq!(s.as_str().parse::<Strategy>().unwrap(), s);
            assert_eq!(serde_json::to_string(&s).unwrap(), format!("\"{}\"", s.as_str()));
        }
        assert!("bogus".parse::<Strategy>().is_err());
    }

    #[test]
    fn validation() {
        let cfg = SystemConfig::default();
        assert!(cfg.validate_for(Strategy::Joint).is_ok());
        let bad = SystemConfig { beams: 33, ..cfg };
        assert!(bad.validate_for(Strategy::Joint).is_err());
        assert!(bad.validate_for(Strategy::Antenna).is_ok());
        assert!(SystemConfig { beams: 0, ..cfg }.validate().is_err());
        assert!(SystemConfig { rho: -1.0, ..cfg }.validate().is_err());
        assert!(SystemConfig { quant_bits: 17, ..cfg }.validate_for(Strategy::Joint).is_err());
        assert_eq!(cfg.power_per_beam(), 2.5);
    }
}
