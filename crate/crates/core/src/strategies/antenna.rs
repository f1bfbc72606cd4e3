use super::{jensen_rate_of, sum_rate_of, Strategy, SystemConfig, TrialRecord};
use crate::error::{invalid, Error, Result};
use crate::numerics::{logdet_hermitian_psd, ComplexMatrix, C64};

/// Indices of the `s` largest values, descending, ties to the lowest index.
pub(crate) fn top_indices(values: &[f64], s: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    idx.truncate(s);
    idx
}

/// Columns of `h_all` with the `s` largest norms, strongest first.
pub fn antenna_select(h_all: &ComplexMatrix, s: usize) -> Result<Vec<usize>> {
    if s == 0 || s > h_all.cols() {
        return Err(invalid(format!("cannot select {s} of {} antennas", h_all.cols())));
    }
    let norms: Vec<f64> = (0..h_all.cols()).map(|c| h_all.column_norm_sq(c)).collect();
    Ok(top_indices(&norms, s))
}

/// Sum rate of antenna selection on one realization.
///
/// With `exact` the log-det of the selected columns is returned; otherwise
/// the Jensen bound that replaces each stream's gain by the realization's mean.
pub fn antenna_selection_rate(h_all: &ComplexMatrix, cfg: &SystemConfig, exact: bool) -> Result<TrialRecord> {
    cfg.validate_for(Strategy::Antenna)?;
    if h_all.rows() != cfg.rx_antennas || h_all.cols() != cfg.total_tx() {
        return Err(Error::DimensionMismatch(format!(
            "channel is {}x{}, config expects {}x{}",
            h_all.rows(),
            h_all.cols(),
            cfg.rx_antennas,
            cfg.total_tx()
        )));
    }
    let selected = antenna_select(h_all, cfg.beams)?;
    let cols: Vec<Vec<C64>> = selected.iter().map(|&c| h_all.column(c)).collect();
    let gain: f64 = selected.iter().map(|&c| h_all.column_norm_sq(c)).sum();
    let eta_sample = gain / (cfg.beams * cfg.rx_antennas) as f64;
    let k = cfg.power_per_beam();
    let (strategy, sum_rate) = if exact {
        (Strategy::Antenna, sum_rate_of(&cols, cfg.rx_antennas, k)?)
    } else {
        (Strategy::AntennaBound, jensen_rate_of(&cols, cfg.rx_antennas, k, eta_sample)?)
    };
    Ok(TrialRecord { strategy, sum_rate, eta_sample, selected, distortion: None })
}

/// `log2 det(I + ρ/(N L_T) H H†)`: equal power on every transmit antenna.
pub fn no_csit_rate(h_all: &ComplexMatrix, cfg: &SystemConfig) -> Result<f64> {
    cfg.validate()?;
    if cfg.rho == 0.0 {
        return Ok(0.0);
    }
    let m = h_all.identity_plus_scaled_gram(cfg.rho / h_all.cols() as f64);
    Ok(logdet_hermitian_psd(&m)?.max(0.0))
}
