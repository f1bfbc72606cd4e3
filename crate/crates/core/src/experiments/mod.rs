//! Monte Carlo harness: sweeps over SNR, feedback bits, stream count or
//! user count, with per-point aggregation and CSV / JSON-lines output.

mod aggregate;
mod output;
mod runner;
mod spec;

pub use aggregate::{aggregate, Aggregate};
pub use output::{write_csv, write_jsonl, CSV_HEADER};
pub use runner::{run_rq_sweep, run_snr_sweep, run_sweep, simulate};
pub use spec::{db_to_linear, linear_to_db, SweepParam, SweepRow, SweepSpec};
