//! Run-wide numerical parameters.

use crate::error::{Error, Result};
use crate::trend::STABILITY;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Tsv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub log_tol: f64,
    pub roundtrip_tol: f64,
    pub stability: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { log_tol: 1e-9, roundtrip_tol: 1e-6, stability: STABILITY }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    /// Truncation index P of generated sequences.
    pub truncation: usize,
    /// Lower end of the weight-function grid.
    pub t_min: f64,
    /// Upper end of the weight-function grid.
    pub t_max: f64,
    pub points_per_decade: usize,
    /// Parameter grid of weight matrices.
    pub lambdas: Vec<f64>,
    /// Largest p + q scanned by pairwise matrix checks.
    pub pair_window: usize,
    /// Largest coefficient index used by the lambda norms.
    pub norm_support: u64,
    pub tolerances: Tolerances,
    pub output: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            truncation: 4096,
            t_min: 1e-2,
            t_max: 1e6,
            points_per_decade: 512,
            lambdas: vec![0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0],
            pair_window: 256,
            norm_support: 1_000_000,
            tolerances: Tolerances::default(),
            output: OutputFormat::Json,
        }
    }
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: RunConfig = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.truncation < 8 {
            return Err(Error::InvalidParameter(format!("truncation {} < 8", self.truncation)));
        }
        if !(self.t_min > 0.0 && self.t_max > self.t_min * 10.0) {
            return Err(Error::InvalidParameter("t grid needs 0 < t_min and t_max > 10 t_min".into()));
        }
        if self.points_per_decade < 8 {
            return Err(Error::InvalidParameter("points_per_decade < 8".into()));
        }
        if self.lambdas.is_empty() || self.lambdas.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
            return Err(Error::InvalidParameter("lambda grid must be non-empty and positive".into()));
        }
        Ok(())
    }

    pub fn with_truncation(mut self, p: usize) -> Self {
        self.truncation = p;
        self
    }

    /// Log-spaced grid on `[lo, hi]` with the configured density.
    pub fn log_grid(&self, lo: f64, hi: f64) -> Vec<f64> {
        log_grid(lo, hi, self.points_per_decade)
    }

    /// The weight-function probe grid `[t_min, t_max]`.
    pub fn t_grid(&self) -> Vec<f64> {
        self.log_grid(self.t_min, self.t_max)
    }
}

/// Log-spaced points on `[lo, hi]`, `per_decade` per factor of ten, both ends included.
pub fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    let steps = (((b - a) / std::f64::consts::LN_10) * per_decade as f64).ceil().max(1.0) as usize;
    (0..=steps)
        .map(|i| {
            if i == steps {
                hi
            } else {
                (a + (b - a) * i as f64 / steps as f64).exp()
            }
        })
        .collect()
}
