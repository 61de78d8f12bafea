use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Context};

pub const POINTS_ENV: &str = "DISTILL_GRID_POINTS";

/// Uniform grid written `lo:hi:points`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, points: usize) -> anyhow::Result<Self> {
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) {
            bail!("grid bounds must lie in [0, 1], got {lo}:{hi}");
        }
        match points {
            0 => bail!("grid needs at least one point"),
            1 if lo != hi => bail!("a one-point grid needs equal bounds (e.g. {lo}:{lo}:1)"),
            1 => {}
            _ if lo >= hi => bail!("grid minimum {lo} must be below maximum {hi}"),
            _ => {}
        }
        Ok(GridSpec { lo, hi, points })
    }

    /// `lo:hi` with the point count taken from the environment when set.
    pub fn with_default_points(lo: f64, hi: f64, points: usize) -> anyhow::Result<Self> {
        let points = match std::env::var(POINTS_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .with_context(|| format!("{POINTS_ENV}={v:?} is not a positive integer"))?,
            Err(_) => points,
        };
        GridSpec::new(lo, hi, points)
    }

    pub fn values(&self) -> Vec<f64> {
        distill::scalar::linspace(self.lo, self.hi, self.points)
    }
}

impl FromStr for GridSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts[..] else {
            bail!("grid must look like MIN:MAX:POINTS (e.g. 0:1:1000), got {s:?}");
        };
        let lo: f64 = lo.trim().parse().with_context(|| format!("bad grid minimum {lo:?}"))?;
        let hi: f64 = hi.trim().parse().with_context(|| format!("bad grid maximum {hi:?}"))?;
        let n: usize = n
            .trim()
            .parse()
            .with_context(|| format!("bad grid point count {n:?}"))?;
        GridSpec::new(lo, hi, n)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects() {
        assert_eq!(
            "0:1:1000".parse::<GridSpec>().unwrap(),
            GridSpec {
                lo: 0.0,
                hi: 1.0,
                points: 1000
            }
        );
        assert_eq!("1:1:1".parse::<GridSpec>().unwrap().values(), vec![1.0]);
        for bad in ["0:1", "1:0:10", "0:1:0", "0:1.5:10", "a:1:10", "0.2:0.3:1"] {
            assert!(bad.parse::<GridSpec>().is_err(), "{bad}");
        }
    }
}
