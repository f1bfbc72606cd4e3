//! Run configuration: a TOML file with `[system]`, `[run]` and `[sweep]`
//! sections, layered as flags > file > defaults.

use std::path::Path;

use macfb_core::experiments::{db_to_linear, SweepParam, SweepSpec};
use macfb_core::strategies::{Strategy, SystemConfig};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemSection {
    pub users: usize,
    pub tx_antennas: usize,
    pub rx_antennas: usize,
    pub snr_db: f64,
    pub beams: usize,
    pub quant_bits: u32,
}

impl Default for SystemSection {
    fn default() -> Self {
        let d = SystemConfig::default();
        Self {
            users: d.users,
            tx_antennas: d.tx_antennas,
            rx_antennas: d.rx_antennas,
            snr_db: 10.0,
            beams: d.beams,
            quant_bits: d.quant_bits,
        }
    }
}

impl SystemSection {
    pub fn to_system(&self) -> SystemConfig {
        SystemConfig {
            users: self.users,
            tx_antennas: self.tx_antennas,
            rx_antennas: self.rx_antennas,
            rho: db_to_linear(self.snr_db),
            beams: self.beams,
            quant_bits: self.quant_bits,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub seed: u64,
    pub trials: usize,
    /// 0 uses every available core.
    pub workers: usize,
    pub codebooks: usize,
    pub strategies: Vec<Strategy>,
    pub format: Format,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            seed: 1,
            trials: 10_000,
            workers: 0,
            codebooks: 16,
            strategies: vec![
                Strategy::Antenna,
                Strategy::AntennaBound,
                Strategy::NoCsit,
                Strategy::Joint,
                Strategy::Individual,
                Strategy::Perfect,
            ],
            format: Format::Csv,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub param: SweepParam,
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategies: Option<Vec<Strategy>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beam_candidates: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub system: SystemSection,
    pub run: RunSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| format!("invalid config: {e}"))
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Sweep spec from the `[sweep]` section, with unspecified strategies taken from `[run]`.
    pub fn sweep_spec(&self, sweep: &SweepSection) -> SweepSpec {
        SweepSpec {
            base: self.system.to_system(),
            param: sweep.param,
            values: sweep.values.clone(),
            strategies: sweep.strategies.clone().unwrap_or_else(|| self.run.strategies.clone()),
            trials: self.run.trials,
            codebooks_per_point: self.run.codebooks,
            seed: self.run.seed,
            beam_candidates: sweep.beam_candidates.clone(),
        }
    }
}
