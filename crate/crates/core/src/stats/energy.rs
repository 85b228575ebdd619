use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transforms::SubbandCoefficients;

/// Mean absolute value (`e1`) and root mean square (`e2`) of a subband.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubbandEnergy {
    pub e1: f64,
    pub e2: f64,
}

impl SubbandEnergy {
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("empty subband"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite subband coefficient"));
        }
        let n = values.len() as f64;
        let e1 = values.iter().map(|v| v.abs()).sum::<f64>() / n;
        let e2 = (values.iter().map(|v| v * v).sum::<f64>() / n).sqrt();
        // Equal magnitudes make e1 == e2 exactly; rounding can otherwise put e1 an ulp above.
        Ok(Self { e1: e1.min(e2), e2 })
    }
}

pub fn subband_energy(sb: &SubbandCoefficients) -> Result<SubbandEnergy> {
    SubbandEnergy::from_values(&sb.values)
}
