use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianParams {
    pub mu: f64,
    pub sigma: f64,
}

/// Maximum-likelihood normal fit: sample mean and the divisor-`N` standard deviation.
pub fn fit_gaussian(samples: &[f64]) -> Result<GaussianParams> {
    if samples.len() < 2 {
        return Err(Error::InsufficientData { needed: 2, got: samples.len() });
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("non-finite sample"));
    }
    let n = samples.len() as f64;
    let mu = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / n;
    let sigma = var.sqrt();
    if sigma < 1e-12 {
        return Err(Error::DegenerateDistribution(format!(
            "{} samples have zero spread around {mu}",
            samples.len()
        )));
    }
    Ok(GaussianParams { mu, sigma })
}
