//! Sweep-level behaviour of the experiment harness.

use macfb_core::experiments::{run_rq_sweep, run_snr_sweep, simulate, write_csv, SweepRow, SweepSpec};
use macfb_core::strategies::{optimal_s_search, SearchKind, Strategy, SystemConfig};

fn rate(rows: &[SweepRow], v: f64, s: Strategy) -> &SweepRow {
    rows.iter().find(|r| r.value == v && r.strategy == s).unwrap()
}

#[test]
fn snr_sweep_monotone_and_more_users_help() {
    let mut spec = SweepSpec::snr_default();
    spec.trials = 2000;
    spec.strategies = vec![Strategy::Antenna];
    let small = run_snr_sweep(&spec, 0).unwrap();
    spec.base.users = 256;
    let big = run_snr_sweep(&spec, 0).unwrap();
    for w in small.windows(2) {
        assert!(w[1].mean_rate_bits + 3.0 * w[1].stderr >= w[0].mean_rate_bits);
    }
    for (a, b) in small.iter().zip(&big) {
        assert!(b.mean_rate_bits - a.mean_rate_bits > 3.0 * (a.stderr.powi(2) + b.stderr.powi(2)).sqrt());
    }
}

#[test]
fn quantization_gap_shrinks_with_bits() {
    let mut spec = SweepSpec::rq_default();
    spec.trials = 2000;
    spec.strategies = vec![Strategy::Joint, Strategy::Perfect];
    let rows = run_rq_sweep(&spec, 0).unwrap();
    let gaps: Vec<f64> = spec
        .values
        .iter()
        .map(|&v| rate(&rows, v, Strategy::Perfect).mean_rate_bits - rate(&rows, v, Strategy::Joint).mean_rate_bits)
        .collect();
    for w in gaps.windows(2) {
        assert!(w[1] < w[0], "{gaps:?}");
    }
    // Perfect beamforming does not depend on R_q.
    let p: Vec<f64> = spec.values.iter().map(|&v| rate(&rows, v, Strategy::Perfect).mean_rate_bits).collect();
    assert!(p.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn matched_feedback_single_point() {
    let mut spec = SweepSpec::rq_default();
    spec.values = vec![4.0];
    spec.trials = 200;
    let rows = run_rq_sweep(&spec, 0).unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.value == 4.0 && r.trials == 200));
}

#[test]
fn seeds_agree_statistically_and_runs_repeat() {
    let cfg = SystemConfig::default();
    let strategies = [Strategy::Antenna, Strategy::NoCsit, Strategy::Joint];
    let a = simulate(&cfg, &strategies, 1000, 4, 1, 0).unwrap();
    let b = simulate(&cfg, &strategies, 1000, 4, 2, 0).unwrap();
    for (x, y) in a.iter().zip(&b) {
        let se = (x.stderr.powi(2) + y.stderr.powi(2)).sqrt();
        assert!((x.mean_rate_bits - y.mean_rate_bits).abs() < 6.0 * se);
    }
    let csv = |rows: &[SweepRow]| {
        let mut buf = Vec::new();
        write_csv(rows, &mut buf).unwrap();
        buf
    };
    assert_eq!(csv(&a), csv(&simulate(&cfg, &strategies, 1000, 4, 1, 0).unwrap()));
}

#[test]
fn optimal_stream_count_shrinks_at_low_snr() {
    let cands: Vec<usize> = (1..=8).collect();
    let mut prev = usize::MAX;
    for db in [25.0, 20.0, 15.0, 10.0, 5.0, 0.0, -5.0, -10.0, -20.0] {
        let cfg = SystemConfig { rho: 10f64.powf(db / 10.0), ..SystemConfig::default() };
        let (s, reports) = optimal_s_search(&cfg, SearchKind::Antenna, &cands).unwrap();
        assert_eq!(reports.len(), 8);
        assert!(s <= prev);
        prev = s;
    }
}
