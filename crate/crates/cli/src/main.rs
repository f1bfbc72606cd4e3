//! `macfb`: theory, simulation and sweeps for multiaccess MIMO with
//! finite-rate feedback.

mod config;
mod manifest;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use macfb_core::experiments::{run_rq_sweep, run_snr_sweep, run_sweep, simulate, write_csv, write_jsonl, SweepParam, SweepRow, SweepSpec};
use macfb_core::grassmann::{drf_asymptotic, drf_bounds, random_codebook, Codebook, DrfQuery};
use macfb_core::numerics::RngStream;
use macfb_core::strategies::{theory_report, Strategy, TheoryReport};
use serde_json::json;

use config::{Config, Format, SweepSection};
use manifest::RunManifest;

#[derive(Parser)]
#[command(name = "macfb", version, about = "Multiaccess MIMO with finite-rate feedback: theory and Monte Carlo")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// TOML config with [system], [run] and [sweep] sections.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed (falls back to MACFB_SEED, then the config file).
    #[arg(long, global = true, env = "MACFB_SEED")]
    seed: Option<u64>,
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Worker threads; 0 uses every core. Does not change results.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Output file; a `<out>.manifest.json` is written next to it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    users: Option<usize>,
    #[arg(long, global = true)]
    tx_antennas: Option<usize>,
    #[arg(long, global = true)]
    rx_antennas: Option<usize>,
    /// Total SNR in dB.
    #[arg(long, global = true, allow_hyphen_values = true)]
    snr_db: Option<f64>,
    #[arg(long, global = true)]
    beams: Option<usize>,
    #[arg(long, global = true)]
    quant_bits: Option<u32>,
    /// Random codebooks per sweep point.
    #[arg(long, global = true)]
    codebooks: Option<usize>,
    /// Comma-separated strategies, e.g. `antenna,joint,perfect`.
    #[arg(long, global = true, value_delimiter = ',', value_parser = parse_strategy)]
    strategies: Option<Vec<Strategy>>,
}

fn parse_strategy(s: &str) -> Result<Strategy, String> {
    s.parse().map_err(|e: macfb_core::Error| e.to_string())
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Antenna selection against no CSIT over SNR.
    Snr,
    /// Beamforming variants over feedback bits.
    Rq,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form predictions for the configured system.
    Theory,
    /// Monte Carlo for one configuration.
    Simulate,
    /// Monte Carlo sweep over one parameter.
    Sweep {
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long)]
        param: Option<SweepParam>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        values: Option<Vec<f64>>,
        /// Choose the number of streams per point from these candidates.
        #[arg(long, value_delimiter = ',')]
        beam_candidates: Option<Vec<usize>>,
    },
    /// Distortion-rate bounds on the composite Grassmann manifold.
    Drf {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        beta: u8,
        /// log2 of the codebook size.
        #[arg(long)]
        bits: f64,
    },
    /// Print the resolved configuration as TOML.
    Config,
    /// Generate or inspect random codebook files.
    #[command(subcommand)]
    Codebook(CodebookCommand),
}

#[derive(Subcommand)]
enum CodebookCommand {
    /// Write a random codebook of 2^bits composite points to --out.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        bits: u32,
        #[arg(long, default_value_t = 0)]
        stream: u64,
    },
    /// Print a codebook file's header.
    Inspect { path: PathBuf },
}

fn resolve(g: &GlobalArgs) -> Result<Config, String> {
    let mut c = match &g.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let s = &mut c.system;
    s.users = g.users.unwrap_or(s.users);
    s.tx_antennas = g.tx_antennas.unwrap_or(s.tx_antennas);
    s.rx_antennas = g.rx_antennas.unwrap_or(s.rx_antennas);
    s.snr_db = g.snr_db.unwrap_or(s.snr_db);
    s.beams = g.beams.unwrap_or(s.beams);
    s.quant_bits = g.quant_bits.unwrap_or(s.quant_bits);
    let r = &mut c.run;
    r.seed = g.seed.unwrap_or(r.seed);
    r.trials = g.trials.unwrap_or(r.trials);
    r.workers = g.workers.unwrap_or(r.workers);
    r.codebooks = g.codebooks.unwrap_or(r.codebooks);
    r.format = g.format.unwrap_or(r.format);
    if let Some(st) = &g.strategies {
        r.strategies = st.clone();
    }
    Ok(c)
}

/// Writes `body` to `--out` (with manifest) or stdout.
fn emit(out: Option<&Path>, command: &str, cfg: &Config, body: &[u8]) -> Result<(), String> {
    match out {
        Some(path) => {
            std::fs::write(path, body).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            RunManifest::new(command, cfg, path).write().map_err(|e| format!("cannot write manifest: {e}"))?;
        }
        None => std::io::stdout().write_all(body).map_err(|e| e.to_string())?,
    }
    Ok(())
}

fn render_rows(rows: &[SweepRow], format: Format) -> Result<Vec<u8>, String> {
    let mut buf = Vec::new();
    match format {
        Format::Csv => write_csv(rows, &mut buf),
        Format::Jsonl => write_jsonl(rows, &mut buf),
    }
    .map_err(|e| e.to_string())?;
    Ok(buf)
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn render_theory(reports: &[TheoryReport], format: Format) -> Vec<u8> {
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str("strategy,a_n,b_n,n_bar_sq,zeta1,gamma,distortion,eta_theory,rate_upper_bound_bits,feedback_bits\n");
            for r in reports {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{}\n",
                    r.strategy,
                    opt(r.a_n),
                    opt(r.b_n),
                    r.n_bar_sq,
                    r.zeta1,
                    r.gamma,
                    opt(r.distortion),
                    r.eta_theory,
                    r.rate_upper_bound,
                    r.feedback_bits_total
                ));
            }
        }
        Format::Jsonl => {
            for r in reports {
                out.push_str(&serde_json::to_string(r).expect("report serializes"));
                out.push('\n');
            }
        }
    }
    out.into_bytes()
}

fn cmd_theory(cfg: &Config, out: Option<&Path>) -> Result<(), String> {
    let system = cfg.system.to_system();
    let reports = cfg
        .run
        .strategies
        .iter()
        .map(|&s| theory_report(&system, s).map_err(|e| format!("{s}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    emit(out, "theory", cfg, &render_theory(&reports, cfg.run.format))
}

fn cmd_simulate(cfg: &Config, out: Option<&Path>) -> Result<(), String> {
    let r = &cfg.run;
    let rows = simulate(&cfg.system.to_system(), &r.strategies, r.trials, r.codebooks, r.seed, r.workers)
        .map_err(|e| e.to_string())?;
    emit(out, "simulate", cfg, &render_rows(&rows, r.format)?)
}

fn cmd_sweep(
    g: &GlobalArgs,
    mut cfg: Config,
    mode: Option<Mode>,
    param: Option<SweepParam>,
    values: Option<Vec<f64>>,
    beam_candidates: Option<Vec<usize>>,
) -> Result<(), String> {
    let mut section = match (mode, &cfg.sweep) {
        (Some(m), _) => {
            let d = match m {
                Mode::Snr => SweepSpec::snr_default(),
                Mode::Rq => SweepSpec::rq_default(),
            };
            SweepSection {
                param: d.param,
                values: d.values,
                strategies: Some(g.strategies.clone().unwrap_or(d.strategies)),
                beam_candidates: None,
            }
        }
        (None, Some(s)) => s.clone(),
        (None, None) => match (param, &values) {
            (Some(p), Some(v)) => SweepSection { param: p, values: v.clone(), strategies: None, beam_candidates: None },
            _ => return Err("sweep needs --mode, a [sweep] config section, or --param with --values".into()),
        },
    };
    if let Some(p) = param {
        section.param = p;
    }
    if let Some(v) = values {
        section.values = v;
    }
    if beam_candidates.is_some() {
        section.beam_candidates = beam_candidates;
    }
    if g.strategies.is_some() {
        section.strategies = g.strategies.clone();
    }
    let spec = cfg.sweep_spec(&section);
    cfg.sweep = Some(section);
    let workers = cfg.run.workers;
    let rows = match mode {
        Some(Mode::Snr) => run_snr_sweep(&spec, workers),
        Some(Mode::Rq) => run_rq_sweep(&spec, workers),
        None => run_sweep(&spec, workers),
    }
    .map_err(|e| e.to_string())?;
    emit(g.out.as_deref(), "sweep", &cfg, &render_rows(&rows, cfg.run.format)?)
}

fn cmd_drf(cfg: &Config, out: Option<&Path>, n: usize, p: usize, m: usize, beta: u8, bits: f64) -> Result<(), String> {
    let q = DrfQuery::new(n, p, m, beta, bits).map_err(|e| e.to_string())?;
    let b = drf_bounds(&q).map_err(|e| e.to_string())?;
    let rate = bits / n as f64;
    let asym = drf_asymptotic(p, m, beta, rate).map_err(|e| e.to_string())?;
    let value = json!({
        "n": n, "p": p, "m": m, "beta": beta, "log2_k": bits, "t": q.t(),
        "lower": b.lower, "upper": b.upper, "approx": b.upper, "premise_holds": b.premise_holds,
        "asymptotic": asym.value, "asymptotic_rate": rate,
    });
    emit(out, "drf", cfg, format!("{}\n", serde_json::to_string_pretty(&value).expect("json")).as_bytes())
}

fn cmd_codebook(cfg: &Config, out: Option<&Path>, cmd: CodebookCommand) -> Result<(), String> {
    match cmd {
        CodebookCommand::Generate { n, m, bits, stream } => {
            let path = out.ok_or("codebook generate needs --out")?;
            if bits > 16 {
                return Err(format!("bits={bits} exceeds 16"));
            }
            let book = random_codebook(n, m, 1usize << bits, RngStream::new(cfg.run.seed, stream)).map_err(|e| e.to_string())?;
            book.save(path).map_err(|e| e.to_string())?;
            RunManifest::new("codebook generate", cfg, path).write().map_err(|e| e.to_string())?;
            Ok(())
        }
        CodebookCommand::Inspect { path } => {
            let book = Codebook::load(&path).map_err(|e| format!("{}: {e}", path.display()))?;
            let value = json!({
                "n": book.n(), "m": book.m(), "k": book.len(),
                "seed": book.seed().map(|s| json!({"master_seed": s.master_seed, "stream_id": s.stream_id})),
            });
            println!("{}", serde_json::to_string_pretty(&value).expect("json"));
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    let cfg = resolve(&cli.global)?;
    let out = cli.global.out.as_deref();
    match cli.command {
        Command::Theory => cmd_theory(&cfg, out),
        Command::Simulate => cmd_simulate(&cfg, out),
        Command::Sweep { mode, param, values, beam_candidates } => cmd_sweep(&cli.global, cfg, mode, param, values, beam_candidates),
        Command::Drf { n, p, m, beta, bits } => cmd_drf(&cfg, out, n, p, m, beta, bits),
        Command::Codebook(c) => cmd_codebook(&cfg, out, c),
        Command::Config => {
            print!("{}", cfg.to_toml());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("macfb: error: {e}");
            ExitCode::FAILURE
        }
    }
}
