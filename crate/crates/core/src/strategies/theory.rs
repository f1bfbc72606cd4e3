use serde::{Deserialize, Serialize};

use super::beamforming::individual_bit_split;
use super::{Strategy, SystemConfig};
use crate::error::{invalid, Result};
use crate::extremes::{a_n, b_n, expected_top_sum, OrderStatModel};
use crate::grassmann::{drf_approx, DrfQuery};
use crate::numerics::{ln_binomial, NATS_PER_RATE_UNIT};
use crate::rmt::{shannon_transform, zeta1_approx};

/// Closed-form predictions for one strategy at one configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoryReport {
    pub strategy: Strategy,
    pub config: SystemConfig,
    /// Order-statistic normalizers; absent when nothing is selected from a population.
    pub a_n: Option<f64>,
    pub b_n: Option<f64>,
    /// Mean gain of a selected antenna or user, `E[Σ top-s norms²] / s`.
    pub n_bar_sq: f64,
    pub zeta1: f64,
    /// Expected total beam alignment `Σ |v_k† b_k|²`, in `[0, s]`.
    pub gamma: f64,
    /// Distortion-rate estimate behind `gamma`, when quantization is involved.
    pub distortion: Option<f64>,
    /// Whether the large-codebook premise of the distortion estimate holds.
    pub distortion_premise_holds: Option<bool>,
    pub eta_theory: f64,
    /// Sum-rate upper bound in bits per channel use.
    pub rate_upper_bound: f64,
    pub feedback_bits_total: f64,
}

fn log2_binomial(n: usize, k: usize) -> f64 {
    ln_binomial(n as u64, k as u64) / NATS_PER_RATE_UNIT
}

/// Feedback bits needed by a strategy (infinite for unquantized beams).
pub fn feedback_bits(cfg: &SystemConfig, strategy: Strategy) -> f64 {
    match strategy {
        Strategy::Antenna | Strategy::AntennaBound => log2_binomial(cfg.total_tx(), cfg.beams),
        Strategy::NoCsit => 0.0,
        Strategy::Joint | Strategy::JointBound | Strategy::Individual => {
            log2_binomial(cfg.users, cfg.beams) + cfg.quant_bits as f64
        }
        Strategy::Perfect => f64::INFINITY,
    }
}

/// `L_R` times the Shannon transform at `c = ρ η L_R / s`, `m_bar = s / L_R`.
pub fn rate_upper_bound_theory(cfg: &SystemConfig, eta: f64) -> Result<f64> {
    cfg.validate()?;
    if !(eta >= 0.0 && eta.is_finite()) {
        return Err(invalid(format!("eta must be finite and nonnegative, got {eta}")));
    }
    let lr = cfg.rx_antennas as f64;
    let c = cfg.rho * eta * lr / cfg.beams as f64;
    Ok(lr * shannon_transform(c, cfg.beams as f64 / lr)?)
}

struct TopSum {
    a_n: Option<f64>,
    b_n: Option<f64>,
    mean_gain: f64,
}

fn top_sum(l: usize, n: usize, s: usize) -> Result<TopSum> {
    let model = OrderStatModel::new(l as u32, n as u64, s as u64)?;
    let total = expected_top_sum(model)?;
    let (a, b) = if n >= 2 {
        let a = a_n(l as u32, n as u64)?;
        (Some(a), Some(b_n(l as u32, a)))
    } else {
        (None, None)
    };
    Ok(TopSum { a_n: a, b_n: b, mean_gain: total / s as f64 })
}

/// Predicted η for antenna selection.
pub fn eta_theory_antenna(cfg: &SystemConfig) -> Result<f64> {
    Ok(antenna_report(cfg, Strategy::Antenna)?.eta_theory)
}

fn antenna_report(cfg: &SystemConfig, strategy: Strategy) -> Result<TheoryReport> {
    cfg.validate_for(Strategy::Antenna)?;
    let t = top_sum(cfg.rx_antennas, cfg.total_tx(), cfg.beams)?;
    let eta = t.mean_gain / cfg.rx_antennas as f64;
    Ok(TheoryReport {
        strategy,
        config: *cfg,
        a_n: t.a_n,
        b_n: t.b_n,
        n_bar_sq: t.mean_gain,
        zeta1: 1.0,
        gamma: cfg.beams as f64,
        distortion: None,
        distortion_premise_holds: None,
        eta_theory: eta,
        rate_upper_bound: rate_upper_bound_theory(cfg, eta)?,
        feedback_bits_total: feedback_bits(cfg, strategy),
    })
}

/// Distortion estimate of one codebook, capped at the distortion of an
/// uninformed guess, `m (1 - 1/n)`.
fn capped_drf(n: usize, m: usize, bits: f64) -> Result<(f64, bool)> {
    let est = drf_approx(&DrfQuery::new(n, 1, m, 2, bits)?)?;
    let cap = m as f64 * (1.0 - 1.0 / n as f64);
    Ok((est.value.min(cap), est.premise_holds))
}

fn beamforming_report(cfg: &SystemConfig, strategy: Strategy) -> Result<TheoryReport> {
    cfg.validate_for(strategy)?;
    let (lt, lr, s) = (cfg.tx_antennas, cfg.rx_antennas, cfg.beams);
    let t = top_sum(lt * lr, cfg.users, s)?;
    let zeta1 = zeta1_approx(lr.min(lt), lr.max(lt))?;
    let s_f = s as f64;

    let (gamma, distortion, premise) = if lt == 1 {
        (s_f, None, None)
    } else {
        match strategy {
            Strategy::Perfect => (s_f, None, None),
            Strategy::Individual => {
                let mut total = 0.0;
                let mut all_hold = true;
                for bits in individual_bit_split(cfg.quant_bits, s) {
                    let (d, ok) = capped_drf(lt, 1, bits as f64)?;
                    total += d;
                    all_hold &= ok;
                }
                ((s_f - total).clamp(0.0, s_f), Some(total), Some(all_hold))
            }
            _ => {
                let (d, ok) = capped_drf(lt, s, cfg.quant_bits as f64)?;
                ((s_f - d).clamp(0.0, s_f), Some(d), Some(ok))
            }
        }
    };

    let misaligned = if lt == 1 { 0.0 } else { (s_f - gamma) / s_f * (1.0 - zeta1) / (lt - 1) as f64 };
    let eta = (gamma / s_f * zeta1 + misaligned) * t.mean_gain / lr as f64;
    Ok(TheoryReport {
        strategy,
        config: *cfg,
        a_n: t.a_n,
        b_n: t.b_n,
        n_bar_sq: t.mean_gain,
        zeta1,
        gamma,
        distortion,
        distortion_premise_holds: premise,
        eta_theory: eta,
        rate_upper_bound: rate_upper_bound_theory(cfg, eta)?,
        feedback_bits_total: feedback_bits(cfg, strategy),
    })
}

/// Theory for joint beamforming with a random codebook of `2^R_q` entries.
pub fn eta_theory_beamforming(cfg: &SystemConfig) -> Result<TheoryReport> {
    beamforming_report(cfg, Strategy::Joint)
}

/// Theory for beamforming with individually quantized directions.
pub fn eta_theory_individual(cfg: &SystemConfig) -> Result<TheoryReport> {
    beamforming_report(cfg, Strategy::Individual)
}

/// Theory report for any strategy. For the no-CSIT baseline the bound is
/// Jensen's, `L_R log2(1 + ρ)`.
pub fn theory_report(cfg: &SystemConfig, strategy: Strategy) -> Result<TheoryReport> {
    match strategy {
        Strategy::Antenna | Strategy::AntennaBound => antenna_report(cfg, strategy),
        Strategy::NoCsit => {
            cfg.validate()?;
            Ok(TheoryReport {
                strategy,
                config: *cfg,
                a_n: None,
                b_n: None,
                n_bar_sq: cfg.rx_antennas as f64,
                zeta1: 1.0,
                gamma: cfg.beams as f64,
                distortion: None,
                distortion_premise_holds: None,
                eta_theory: 1.0,
                rate_upper_bound: cfg.rx_antennas as f64 * cfg.rho.ln_1p() / NATS_PER_RATE_UNIT,
                feedback_bits_total: 0.0,
            })
        }
        _ => beamforming_report(cfg, strategy),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchKind {
    Antenna,
    Beamforming,
}

/// Number of streams maximizing the theory bound over `candidates`; ties go
/// to the smaller `s`. Every evaluated report is returned.
pub fn optimal_s_search(
    cfg: &SystemConfig,
    kind: SearchKind,
    candidates: &[usize],
) -> Result<(usize, Vec<TheoryReport>)> {
    if candidates.is_empty() {
        return Err(invalid("no candidate values of s"));
    }
    let strategy = match kind {
        SearchKind::Antenna => Strategy::Antenna,
        SearchKind::Beamforming => Strategy::Joint,
    };
    let reports = candidates
        .iter()
        .map(|&s| theory_report(&SystemConfig { beams: s, ..*cfg }, strategy))
        .collect::<Result<Vec<_>>>()?;
    let best = reports
        .iter()
        .enumerate()
        .fold(None::<(usize, f64)>, |acc, (i, r)| match acc {
            Some((_, v)) if v > r.rate_upper_bound => acc,
            Some((j, v)) if v == r.rate_upper_bound && candidates[j] <= candidates[i] => acc,
            _ => Some((i, r.rate_upper_bound)),
        })
        .expect("candidates are nonempty");
    Ok((candidates[best.0], reports))
}
