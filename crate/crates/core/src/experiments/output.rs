use std::io::Write;

use super::SweepRow;
use crate::error::Result;

pub const CSV_HEADER: &str = "param,value,strategy,mean_rate_bits,stderr,theory_bound_bits,feedback_bits,trials,seed";

/// Writes rows under the fixed header. Floats use Rust's shortest
/// round-trip formatting, so identical rows give identical bytes.
pub fn write_csv<W: Write>(rows: &[SweepRow], mut w: W) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            r.param, r.value, r.strategy, r.mean_rate_bits, r.stderr, r.theory_bound_bits, r.feedback_bits, r.trials, r.seed
        )?;
    }
    Ok(())
}

/// One JSON object per row with the CSV's fields; infinite values become `null`.
pub fn write_jsonl<W: Write>(rows: &[SweepRow], mut w: W) -> Result<()> {
    for r in rows {
        let line = serde_json::to_string(r).map_err(|e| crate::Error::Format(e.to_string()))?;
        writeln!(w, "{line}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::SweepParam;
    use crate::strategies::Strategy;

    fn row() -> SweepRow {
        SweepRow {
            param: SweepParam::QuantBits,
            value: 12.0,
            strategy: Strategy::Perfect,
            mean_rate_bits: 15.5,
            stderr: 0.01,
            theory_bound_bits: 16.25,
            feedback_bits: f64::INFINITY,
            trials: 10,
            seed: 7,
        }
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_csv(&[row()], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        assert_eq!(lines.next().unwrap(), "quant_bits,12,perfect,15.5,0.01,16.25,inf,10,7");
    }

    #[test]
    fn jsonl_fields_match_header() {
        let mut buf = Vec::new();
        write_jsonl(&[row()], &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        let mut expected: Vec<&str> = CSV_HEADER.split(',').collect();
        let mut got = keys.clone();
        expected.sort();
        got.sort();
        assert_eq!(got, expected);
        assert!(v["feedback_bits"].is_null());
        assert_eq!(v["strategy"], "perfect");
    }
}
