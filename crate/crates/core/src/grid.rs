//! Sample grids.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Grid families used by the checkers. Both place all nodes strictly inside
/// the interval, so open domains are safe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    /// Chebyshev points of the first kind.
    #[default]
    Cheb,
    /// Cell midpoints of a uniform partition.
    Uniform,
}

/// Default number of nodes per grid.
pub const DEFAULT_POINTS: usize = 12;
/// Largest accepted grid for Gram checks.
pub const MAX_POINTS: usize = 64;

impl GridKind {
    /// `n` increasing points in `(lo, hi)`.
    pub fn points(self, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidGrid(format!("need finite lo < hi, got ({lo}, {hi})")));
        }
        if n == 0 {
            return Err(Error::InvalidGrid("need at least one point".into()));
        }
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let pts = match self {
            GridKind::Cheb => (0..n)
                .map(|k| {
                    let theta = std::f64::consts::PI * (2 * (n - k) - 1) as f64 / (2 * n) as f64;
                    mid + half * theta.cos()
                })
                .collect(),
            GridKind::Uniform => (0..n).map(|k| lo + (hi - lo) * (k as f64 + 0.5) / n as f64).collect(),
        };
        Ok(pts)
    }
}

impl std::str::FromStr for GridKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cheb" | "chebyshev" => Ok(GridKind::Cheb),
            "uniform" => Ok(GridKind::Uniform),
            other => Err(Error::InvalidArgument(format!("unknown grid kind `{other}`"))),
        }
    }
}

/// `n` log-spaced points in `[lo, hi]`, endpoints included.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// `n` equispaced points in `[lo, hi]`, endpoints included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Rejects empty, non-finite or non-increasing point sets.
pub fn validate_points(points: &[f64]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    if points.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidGrid("non-finite grid point".into()));
    }
    if points.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidGrid("grid must be strictly increasing".into()));
    }
    Ok(())
}
