//! Monte Carlo checks of the strategy layer at the reference configuration.

use macfb_core::grassmann::{random_codebook, Codebook};
use macfb_core::numerics::{RngStream, C64};
use macfb_core::strategies::{
    antenna_selection_rate, beamform, eta_theory_beamforming, individual_bit_split, no_csit_rate, rate_upper_bound_theory,
    eta_theory_antenna, sample_channel, user_channels, Beamformed, Quantizer, SystemConfig,
};

const TRIALS: u64 = 10_000;
const BATCHES: u64 = 16;

struct Samples {
    antenna: Vec<f64>,
    antenna_bound: Vec<f64>,
    no_csit: Vec<f64>,
    perfect: Vec<f64>,
    joint: Vec<Beamformed>,
    joint_rate: Vec<f64>,
    joint_bound: Vec<f64>,
    individual: Vec<f64>,
    individual_distortion: Vec<f64>,
}

fn collect(cfg: &SystemConfig) -> Samples {
    let mut s = Samples {
        antenna: vec![],
        antenna_bound: vec![],
        no_csit: vec![],
        perfect: vec![],
        joint: vec![],
        joint_rate: vec![],
        joint_bound: vec![],
        individual: vec![],
        individual_distortion: vec![],
    };
    let per = TRIALS / BATCHES;
    for b in 0..BATCHES {
        let book = random_codebook(cfg.tx_antennas, cfg.beams, 1 << cfg.quant_bits, RngStream::new(500, b)).unwrap();
        let books: Vec<Codebook> = individual_bit_split(cfg.quant_bits, cfg.beams)
            .into_iter()
            .enumerate()
            .map(|(k, bits)| random_codebook(cfg.tx_antennas, 1, 1 << bits, RngStream::new(501, b * 64 + k as u64)).unwrap())
            .collect();
        for t in b * per..(b + 1) * per {
            let mut rng = RngStream::new(502, t).rng();
            let h = sample_channel(&mut rng, cfg);
            s.antenna.push(antenna_selection_rate(&h, cfg, true).unwrap().sum_rate);
            s.antenna_bound.push(antenna_selection_rate(&h, cfg, false).unwrap().sum_rate);
            s.no_csit.push(no_csit_rate(&h, cfg).unwrap());
            let users = user_channels(&h, cfg.tx_antennas).unwrap();
            s.perfect.push(beamform(&users, Quantizer::Perfect, cfg).unwrap().rate(cfg).unwrap());
            let j = beamform(&users, Quantizer::Joint(&book), cfg).unwrap();
            s.joint_rate.push(j.rate(cfg).unwrap());
            s.joint_bound.push(j.jensen_rate(cfg).unwrap());
            s.joint.push(j);
            let ind = beamform(&users, Quantizer::Individual(&books), cfg).unwrap();
            s.individual.push(ind.rate(cfg).unwrap());
            s.individual_distortion.push(ind.distortion.unwrap());
        }
    }
    s
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

fn se(x: &[f64]) -> f64 {
    let m = mean(x);
    (x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (x.len() - 1) as f64).sqrt() / (x.len() as f64).sqrt()
}

/// `mean(a) >= mean(b)` unless contradicted at 3 paired standard errors.
fn ge(a: &[f64], b: &[f64]) -> bool {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    mean(&d) >= -3.0 * se(&d)
}

#[test]
fn reference_configuration() {
    let cfg = SystemConfig::default();
    let s = collect(&cfg);

    // Jensen ordering for both strategies.
    assert!(mean(&s.antenna) <= mean(&s.antenna_bound));
    assert!(mean(&s.joint_rate) <= mean(&s.joint_bound));

    // Rate orderings.
    assert!(ge(&s.perfect, &s.joint_rate));
    assert!(ge(&s.joint_rate, &s.individual));
    assert!(ge(&s.antenna, &s.no_csit) && mean(&s.no_csit) < mean(&s.antenna));
    assert!(s.antenna.iter().chain(&s.perfect).chain(&s.no_csit).all(|r| r.is_finite() && *r >= 0.0));

    // Joint quantization distorts less than individual quantization at equal bits.
    let dj: Vec<f64> = s.joint.iter().map(|j| j.distortion.unwrap()).collect();
    assert!(mean(&dj) < mean(&s.individual_distortion));

    // Theory bound is close to the simulated Jensen bound.
    let eta_a = eta_theory_antenna(&cfg).unwrap();
    let theory = rate_upper_bound_theory(&cfg, eta_a).unwrap();
    let sim = mean(&s.antenna_bound);
    assert!((theory - sim).abs() / sim < 0.10, "theory {theory} vs {sim}");
    let eta_b = eta_theory_beamforming(&cfg).unwrap().eta_theory;
    let theory_b = rate_upper_bound_theory(&cfg, eta_b).unwrap();
    assert!((theory_b - mean(&s.joint_bound)).abs() / mean(&s.joint_bound) < 0.10);

    // Equivalent directions are isotropic.
    let lr = cfg.rx_antennas;
    let mut cov = vec![C64::new(0.0, 0.0); lr * lr];
    let mut count = 0.0;
    let mut etas = Vec::new();
    let mut offdiag = Vec::new();
    for j in &s.joint {
        let dirs: Vec<Vec<C64>> = j
            .equivalent
            .iter()
            .map(|h| {
                let n = h.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                h.iter().map(|z| z / n).collect()
            })
            .collect();
        for xi in &dirs {
            for a in 0..lr {
                for b in 0..lr {
                    cov[a * lr + b] += xi[a] * xi[b].conj();
                }
            }
            count += 1.0;
        }
        let mut off = 0.0;
        let mut pairs = 0.0;
        for a in 0..dirs.len() {
            for b in a + 1..dirs.len() {
                off += dirs[a].iter().zip(&dirs[b]).map(|(x, y)| x.conj() * y).sum::<C64>().norm();
                pairs += 1.0;
            }
        }
        offdiag.push(off / pairs);
        etas.push(j.eta_sample(&cfg));
    }
    for a in 0..lr {
        for b in 0..lr {
            let expect = if a == b { 1.0 / lr as f64 } else { 0.0 };
            assert!((cov[a * lr + b] / count - expect).norm() < 0.02);
        }
    }
    // Directions are (nearly) independent of the gains.
    let (me, mo) = (mean(&etas), mean(&offdiag));
    let cxy: f64 = etas.iter().zip(&offdiag).map(|(e, o)| (e - me) * (o - mo)).sum();
    let cxx: f64 = etas.iter().map(|e| (e - me).powi(2)).sum();
    let cyy: f64 = offdiag.iter().map(|o| (o - mo).powi(2)).sum();
    let corr = cxy / (cxx * cyy).sqrt();
    assert!(corr.abs() < 0.05, "correlation {corr}");
}

#[test]
fn antenna_selection_beats_joint_at_matched_feedback() {
    // R_q = s log2 L_T makes the two feedback budgets comparable.
    let cfg = SystemConfig { quant_bits: 4, ..SystemConfig::default() };
    let mut a = Vec::new();
    let mut j = Vec::new();
    for b in 0..BATCHES {
        let book = random_codebook(2, 4, 16, RngStream::new(503, b)).unwrap();
        for t in b * 250..(b + 1) * 250 {
            let mut rng = RngStream::new(504, t).rng();
            let h = sample_channel(&mut rng, &cfg);
            a.push(antenna_selection_rate(&h, &cfg, true).unwrap().sum_rate);
            let users = user_channels(&h, 2).unwrap();
            j.push(beamform(&users, Quantizer::Joint(&book), &cfg).unwrap().rate(&cfg).unwrap());
        }
    }
    assert!(ge(&a, &j), "antenna {} joint {}", mean(&a), mean(&j));
}
