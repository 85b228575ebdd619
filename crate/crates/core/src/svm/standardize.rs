use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-column z-scoring learned from training data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
    /// Columns whose spread was below 1e-12 and pass through with std 1.
    #[serde(skip)]
    pub degenerate: Vec<bool>,
}

impl Standardizer {
    pub fn fit(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::InsufficientData { needed: 2, got: rows.len() });
        }
        let dim = rows[0].len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::invalid("feature rows differ in length"));
        }
        let n = rows.len() as f64;
        let mut means = vec![0.0; dim];
        for r in rows {
            for (m, v) in means.iter_mut().zip(r) {
                *m += v;
            }
        }
        means.iter_mut().for_each(|m| *m /= n);
        let mut stds = vec![0.0; dim];
        for r in rows {
            for ((s, v), m) in stds.iter_mut().zip(r).zip(&means) {
                *s += (v - m) * (v - m);
            }
        }
        let mut degenerate = vec![false; dim];
        for (s, d) in stds.iter_mut().zip(&mut degenerate) {
            *s = (*s / n).sqrt();
            if *s < 1e-12 {
                *s = 1.0;
                *d = true;
            }
        }
        Ok(Self { means, stds, degenerate })
    }

    pub fn identity(dim: usize) -> Self {
        Self { means: vec![0.0; dim], stds: vec![1.0; dim], degenerate: vec![false; dim] }
    }

    pub fn dim(&self) -> usize {
        self.means.len()
    }

    pub fn transform(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.means).zip(&self.stds).map(|((v, m), s)| (v - m) / s).collect()
    }
}
