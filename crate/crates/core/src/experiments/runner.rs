use std::ops::Range;

use log::info;
use rayon::prelude::*;

use super::{aggregate, SweepParam, SweepRow, SweepSpec};
use crate::error::{invalid, Error, Result};
use crate::grassmann::{random_codebook, Codebook};
use crate::numerics::RngStream;
use crate::strategies::{
    antenna_selection_rate, beamform, feedback_bits, individual_bit_split, no_csit_rate, optimal_s_search,
    sample_channel, theory_report, user_channels, Quantizer, SearchKind, Strategy, SystemConfig,
};

const TAG_TRIAL: u64 = 1;
const TAG_BOOK: u64 = 2;

struct Unit {
    point: usize,
    batch: usize,
    trials: Range<usize>,
}

fn batches(trials: usize, codebooks: usize) -> Vec<Range<usize>> {
    let b = codebooks.min(trials);
    (0..b).map(|i| i * trials / b..(i + 1) * trials / b).collect()
}

struct Books {
    joint: Option<Codebook>,
    individual: Option<Vec<Codebook>>,
}

fn build_books(cfg: &SystemConfig, strategies: &[Strategy], stream: RngStream) -> Result<Books> {
    let needs_joint = strategies.iter().any(|s| matches!(s, Strategy::Joint | Strategy::JointBound));
    let needs_ind = strategies.contains(&Strategy::Individual);
    // One transmit antenna leaves nothing to quantize; a single-entry book stands in.
    let (n, scale) = if cfg.tx_antennas == 1 { (1, false) } else { (cfg.tx_antennas, true) };
    let joint = needs_joint
        .then(|| {
            let k = if scale { 1usize << cfg.quant_bits } else { 1 };
            random_codebook(n, cfg.beams, k, stream.derive(0))
        })
        .transpose()?;
    let individual = needs_ind
        .then(|| {
            individual_bit_split(cfg.quant_bits, cfg.beams)
                .into_iter()
                .enumerate()
                .map(|(k, bits)| {
                    let size = if scale { 1usize << bits } else { 1 };
                    random_codebook(n, 1, size, stream.derive(1).derive(k as u64))
                })
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?;
    Ok(Books { joint, individual })
}

/// Per-strategy rates for the trials of one unit, in trial order.
fn run_unit(spec: &SweepSpec, cfg: &SystemConfig, unit: &Unit) -> Result<Vec<Vec<f64>>> {
    let root = RngStream::new(spec.seed, 0);
    let books = build_books(cfg, &spec.strategies, root.derive(TAG_BOOK).derive(unit.point as u64).derive(unit.batch as u64))?;
    let mut out: Vec<Vec<f64>> = vec![Vec::with_capacity(unit.trials.len()); spec.strategies.len()];
    for t in unit.trials.clone() {
        // Trial streams ignore the sweep point, so every point sees the same channels.
        let mut rng = root.derive(TAG_TRIAL).derive(t as u64).rng();
        let h = sample_channel(&mut rng, cfg);
        let users = if spec.strategies.iter().any(|s| s.is_beamforming()) {
            Some(user_channels(&h, cfg.tx_antennas)?)
        } else {
            None
        };
        let mut joint = None;
        for (slot, &strategy) in out.iter_mut().zip(&spec.strategies) {
            let rate = match strategy {
                Strategy::Antenna => antenna_selection_rate(&h, cfg, true)?.sum_rate,
                Strategy::AntennaBound => antenna_selection_rate(&h, cfg, false)?.sum_rate,
                Strategy::NoCsit => no_csit_rate(&h, cfg)?,
                Strategy::Joint | Strategy::JointBound => {
                    if joint.is_none() {
                        let book = books.joint.as_ref().expect("joint book built");
                        joint = Some(beamform(users.as_ref().expect("users split"), Quantizer::Joint(book), cfg)?);
                    }
                    let bf = joint.as_ref().expect("set above");
                    if strategy == Strategy::Joint {
                        bf.rate(cfg)?
                    } else {
                        bf.jensen_rate(cfg)?
                    }
                }
                Strategy::Individual => {
                    let b = books.individual.as_deref().expect("individual books built");
                    beamform(users.as_ref().expect("users split"), Quantizer::Individual(b), cfg)?.rate(cfg)?
                }
                Strategy::Perfect => beamform(users.as_ref().expect("users split"), Quantizer::Perfect, cfg)?.rate(cfg)?,
            };
            slot.push(rate);
        }
    }
    Ok(out)
}

fn point_configs(spec: &SweepSpec) -> Result<Vec<SystemConfig>> {
    spec.values
        .iter()
        .map(|&v| {
            let mut cfg = spec.param.apply(&spec.base, v)?;
            if let Some(cands) = &spec.beam_candidates {
                let kind = if spec.strategies.iter().any(|s| s.is_beamforming()) {
                    SearchKind::Beamforming
                } else {
                    SearchKind::Antenna
                };
                cfg.beams = optimal_s_search(&cfg, kind, cands)?.0;
            }
            for &s in &spec.strategies {
                cfg.validate_for(s)?;
            }
            Ok(cfg)
        })
        .collect()
}

/// Runs every (point, strategy) pair of `spec` on up to `workers` threads
/// (0 = all cores). Output is identical for any worker count.
pub fn run_sweep(spec: &SweepSpec, workers: usize) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let configs = point_configs(spec)?;
    let ranges = batches(spec.trials, spec.codebooks_per_point);
    let units: Vec<Unit> = (0..configs.len())
        .flat_map(|p| ranges.iter().enumerate().map(move |(b, r)| Unit { point: p, batch: b, trials: r.clone() }))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    info!("sweep over {}: {} points x {} trials on {} threads", spec.param, configs.len(), spec.trials, pool.current_num_threads());
    let results: Vec<Vec<Vec<f64>>> =
        pool.install(|| units.par_iter().map(|u| run_unit(spec, &configs[u.point], u)).collect::<Result<_>>())?;

    let mut rows = Vec::with_capacity(configs.len() * spec.strategies.len());
    for (p, cfg) in configs.iter().enumerate() {
        let unit_results: Vec<&Vec<Vec<f64>>> =
            units.iter().zip(&results).filter(|(u, _)| u.point == p).map(|(_, r)| r).collect();
        for (si, &strategy) in spec.strategies.iter().enumerate() {
            let values: Vec<f64> = unit_results.iter().flat_map(|r| r[si].iter().copied()).collect();
            let agg = aggregate(&values)?;
            rows.push(SweepRow {
                param: spec.param,
                value: spec.values[p],
                strategy,
                mean_rate_bits: agg.mean,
                stderr: agg.stderr,
                theory_bound_bits: theory_report(cfg, strategy)?.rate_upper_bound,
                feedback_bits: feedback_bits(cfg, strategy),
                trials: agg.count,
                seed: spec.seed,
            });
        }
    }
    Ok(rows)
}

fn require(spec: &SweepSpec, param: SweepParam, allowed: &[Strategy]) -> Result<()> {
    if spec.param != param {
        return Err(invalid(format!("expected a {param} sweep, got {}", spec.param)));
    }
    if let Some(s) = spec.strategies.iter().find(|s| !allowed.contains(s)) {
        return Err(invalid(format!("strategy {s} is not part of a {param} sweep")));
    }
    Ok(())
}

/// SNR sweep of antenna selection (exact and bound) and the no-CSIT baseline.
pub fn run_snr_sweep(spec: &SweepSpec, workers: usize) -> Result<Vec<SweepRow>> {
    require(spec, SweepParam::SnrDb, &[Strategy::Antenna, Strategy::AntennaBound, Strategy::NoCsit])?;
    run_sweep(spec, workers)
}

/// Feedback-bit sweep of the beamforming variants, with antenna selection as reference.
pub fn run_rq_sweep(spec: &SweepSpec, workers: usize) -> Result<Vec<SweepRow>> {
    require(
        spec,
        SweepParam::QuantBits,
        &[Strategy::Joint, Strategy::JointBound, Strategy::Individual, Strategy::Perfect, Strategy::Antenna],
    )?;
    run_sweep(spec, workers)
}

/// Single configuration, one row per strategy.
pub fn simulate(
    cfg: &SystemConfig,
    strategies: &[Strategy],
    trials: usize,
    codebooks: usize,
    seed: u64,
    workers: usize,
) -> Result<Vec<SweepRow>> {
    let spec = SweepSpec {
        base: *cfg,
        param: SweepParam::None,
        values: vec![0.0],
        strategies: strategies.to_vec(),
        trials,
        codebooks_per_point: codebooks,
        seed,
        beam_candidates: None,
    };
    run_sweep(&spec, workers)
}
