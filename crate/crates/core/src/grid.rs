//! Modulus grids for sweeps and scans.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::modulus::Modulus;

/// Largest grid the sweep helpers will build.
pub const MAX_POINTS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Spacing {
    #[default]
    Linear,
    /// Uniform in `log k'`, which resolves the approach to `k = 1`.
    LogComplementary,
}

impl FromStr for Spacing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Spacing::Linear),
            "logc" | "log-complementary" => Ok(Spacing::LogComplementary),
            _ => Err(Error::InvalidArgument(format!("unknown spacing {s:?}"))),
        }
    }
}

impl fmt::Display for Spacing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Spacing::Linear => "linear",
            Spacing::LogComplementary => "logc",
        })
    }
}

/// `points` moduli from `k_min` to `k_max` inclusive, ascending in `k`.
pub fn k_grid(k_min: f64, k_max: f64, points: usize, spacing: Spacing) -> Result<Vec<Modulus>> {
    if !(k_min > 0.0 && k_min < k_max && k_max < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < k_min < k_max < 1, got {k_min}, {k_max}"
        )));
    }
    if !(2..=MAX_POINTS).contains(&points) {
        return Err(Error::InvalidArgument(format!(
            "points must be in 2..={MAX_POINTS}, got {points}"
        )));
    }
    let last = (points - 1) as f64;
    match spacing {
        Spacing::Linear => (0..points)
            .map(|i| {
                let k = if i + 1 == points {
                    k_max
                } else {
                    k_min + (k_max - k_min) * i as f64 / last
                };
                Modulus::new(k)
            })
            .collect(),
        Spacing::LogComplementary => {
            let lo = Modulus::new(k_min)?;
            let hi = Modulus::new(k_max)?;
            let (a, b) = (lo.k_prime().ln(), hi.k_prime().ln());
            (0..points)
                .map(|i| match i {
                    0 => Ok(lo),
                    _ if i + 1 == points => Ok(hi),
                    _ => Modulus::from_complementary((a + (b - a) * i as f64 / last).exp()),
                })
                .collect()
        }
    }
}

/// `points` equally spaced values from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..points)
            .map(|i| {
                if i + 1 == points {
                    b
                } else {
                    a + (b - a) * i as f64 / (points - 1) as f64
                }
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_are_ascending() {
        for spacing in [Spacing::Linear, Spacing::LogComplementary] {
            let g = k_grid(0.01, 0.999_999, 60, spacing).unwrap();
            assert_eq!(g.len(), 60);
            assert!(g.windows(2).all(|w| w[0].k() < w[1].k()), "{spacing}");
            assert_eq!(g[0].k(), 0.01);
            assert_eq!(g[59].k(), 0.999_999);
        }
    }

    #[test]
    fn logc_is_uniform_in_log_k_prime() {
        let g = k_grid(0.6, 0.999_999_999_95, 6, Spacing::LogComplementary).unwrap();
        let logs: Vec<f64> = g.iter().map(|m| m.k_prime().ln()).collect();
        let step = logs[1] - logs[0];
        assert!(logs.windows(2).all(|w| ((w[1] - w[0]) - step).abs() < 1e-9));
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(k_grid(0.5, 0.4, 10, Spacing::Linear).is_err());
        assert!(k_grid(0.1, 0.9, 1, Spacing::Linear).is_err());
        assert!(k_grid(0.0, 0.9, 10, Spacing::Linear).is_err());
        assert!("cubic".parse::<Spacing>().is_err());
    }
}
