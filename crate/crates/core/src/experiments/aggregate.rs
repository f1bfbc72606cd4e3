use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::numerics::compensated_sum;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub mean: f64,
    /// Sample standard deviation over `√count`; zero for a single value.
    pub stderr: f64,
    pub count: usize,
}

/// Mean and standard error. Values are sorted before compensated summation,
/// so the result does not depend on input order.
pub fn aggregate(values: &[f64]) -> Result<Aggregate> {
    if values.is_empty() {
        return Err(invalid("cannot aggregate zero records"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let count = sorted.len();
    let mean = compensated_sum(sorted.iter().copied()) / count as f64;
    let stderr = if count > 1 {
        let mut dev: Vec<f64> = sorted.iter().map(|x| (x - mean).powi(2)).collect();
        dev.sort_by(f64::total_cmp);
        (compensated_sum(dev) / (count - 1) as f64).sqrt() / (count as f64).sqrt()
    } else {
        0.0
    };
    Ok(Aggregate { mean, stderr, count })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_values() {
        let a = aggregate(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(a.count, 3);
        assert!((a.mean - 2.0).abs() < 1e-15);
        assert!((a.stderr - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(aggregate(&[4.5]).unwrap(), Aggregate { mean: 4.5, stderr: 0.0, count: 1 });
        assert!(aggregate(&[]).is_err());
    }

    #[test]
    fn order_independent() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 7919) % 1000) as f64 * 1e-3 + 1e8).collect();
        let mut rev = xs.clone();
        rev.reverse();
        let a = aggregate(&xs).unwrap();
        let b = aggregate(&rev).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
    }
}
