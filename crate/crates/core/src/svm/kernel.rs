use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    Linear,
    Polynomial,
    Rbf,
    Sigmoid,
}

impl KernelKind {
    pub const ALL: [KernelKind; 4] = [KernelKind::Linear, KernelKind::Polynomial, KernelKind::Rbf, KernelKind::Sigmoid];

    pub fn as_str(self) -> &'static str {
        match self {
            KernelKind::Linear => "linear",
            KernelKind::Polynomial => "polynomial",
            KernelKind::Rbf => "rbf",
            KernelKind::Sigmoid => "sigmoid",
        }
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "linear" => Ok(KernelKind::Linear),
            "polynomial" | "poly" => Ok(KernelKind::Polynomial),
            "rbf" => Ok(KernelKind::Rbf),
            "sigmoid" => Ok(KernelKind::Sigmoid),
            other => Err(Error::invalid(format!("unknown kernel `{other}`"))),
        }
    }
}

/// `gamma` as configured: a fixed value or `1 / n_features`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GammaSetting {
    Auto,
    Value(f64),
}

impl GammaSetting {
    pub fn resolve(self, n_features: usize) -> f64 {
        match self {
            GammaSetting::Auto => 1.0 / n_features.max(1) as f64,
            GammaSetting::Value(g) => g,
        }
    }
}

impl fmt::Display for GammaSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaSetting::Auto => f.write_str("auto"),
            GammaSetting::Value(g) => write!(f, "{g}"),
        }
    }
}

impl FromStr for GammaSetting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("auto") {
            return Ok(GammaSetting::Auto);
        }
        let g: f64 = s.parse().map_err(|_| Error::invalid(format!("bad gamma `{s}`")))?;
        if !g.is_finite() || g <= 0.0 {
            return Err(Error::invalid(format!("gamma {g} must be positive")));
        }
        Ok(GammaSetting::Value(g))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KernelSpec {
    Linear,
    /// `(γ x·y + coef0)^degree`
    Polynomial { gamma: f64, degree: u32, coef0: f64 },
    /// `exp(−γ ‖x − y‖²)`
    Rbf { gamma: f64 },
    /// `tanh(γ x·y + coef0)`
    Sigmoid { gamma: f64, coef0: f64 },
}

impl KernelSpec {
    pub fn kind(&self) -> KernelKind {
        match self {
            KernelSpec::Linear => KernelKind::Linear,
            KernelSpec::Polynomial { .. } => KernelKind::Polynomial,
            KernelSpec::Rbf { .. } => KernelKind::Rbf,
            KernelSpec::Sigmoid { .. } => KernelKind::Sigmoid,
        }
    }

    pub fn gamma(&self) -> Option<f64> {
        match *self {
            KernelSpec::Linear => None,
            KernelSpec::Polynomial { gamma, .. } | KernelSpec::Rbf { gamma } | KernelSpec::Sigmoid { gamma, .. } => {
                Some(gamma)
            }
        }
    }

    pub fn degree(&self) -> Option<u32> {
        match *self {
            KernelSpec::Polynomial { degree, .. } => Some(degree),
            _ => None,
        }
    }

    pub fn coef0(&self) -> Option<f64> {
        match *self {
            KernelSpec::Polynomial { coef0, .. } | KernelSpec::Sigmoid { coef0, .. } => Some(coef0),
            _ => None,
        }
    }

    /// Builds a kernel, requiring exactly the parameters `kind` uses.
    pub fn from_parts(kind: KernelKind, gamma: Option<f64>, degree: Option<u32>, coef0: Option<f64>) -> Result<Self> {
        let need = |name: &str, present: bool, wanted: bool| {
            if present == wanted {
                Ok(())
            } else if wanted {
                Err(Error::invalid(format!("{kind} kernel requires `{name}`")))
            } else {
                Err(Error::invalid(format!("{kind} kernel takes no `{name}`")))
            }
        };
        let uses = |k: &[KernelKind]| k.contains(&kind);
        need("gamma", gamma.is_some(), !uses(&[KernelKind::Linear]))?;
        need("degree", degree.is_some(), uses(&[KernelKind::Polynomial]))?;
        need("coef0", coef0.is_some(), uses(&[KernelKind::Polynomial, KernelKind::Sigmoid]))?;
        let spec = match kind {
            KernelKind::Linear => KernelSpec::Linear,
            KernelKind::Polynomial => KernelSpec::Polynomial {
                gamma: gamma.unwrap_or_default(),
                degree: degree.unwrap_or_default(),
                coef0: coef0.unwrap_or_default(),
            },
            KernelKind::Rbf => KernelSpec::Rbf { gamma: gamma.unwrap_or_default() },
            KernelKind::Sigmoid => {
                KernelSpec::Sigmoid { gamma: gamma.unwrap_or_default(), coef0: coef0.unwrap_or_default() }
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(g) = self.gamma() {
            if !g.is_finite() || g <= 0.0 {
                return Err(Error::invalid(format!("kernel gamma {g} must be positive")));
            }
        }
        if self.degree() == Some(0) {
            return Err(Error::invalid("polynomial degree must be at least 1"));
        }
        if self.coef0().is_some_and(|c| !c.is_finite()) {
            return Err(Error::invalid("kernel coef0 must be finite"));
        }
        Ok(())
    }

    /// Kernel value for equal-length vectors (checked only in debug builds).
    #[inline]
    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), y.len());
        let dot = || x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
        match *self {
            KernelSpec::Linear => dot(),
            KernelSpec::Polynomial { gamma, degree, coef0 } => (gamma * dot() + coef0).powi(degree as i32),
            KernelSpec::Rbf { gamma } => {
                let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
                (-gamma * d2).exp()
            }
            KernelSpec::Sigmoid { gamma, coef0 } => (gamma * dot() + coef0).tanh(),
        }
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            KernelSpec::Linear => f.write_str("linear"),
            KernelSpec::Polynomial { gamma, degree, coef0 } => {
                write!(f, "polynomial(gamma={gamma}, degree={degree}, coef0={coef0})")
            }
            KernelSpec::Rbf { gamma } => write!(f, "rbf(gamma={gamma})"),
            KernelSpec::Sigmoid { gamma, coef0 } => write!(f, "sigmoid(gamma={gamma}, coef0={coef0})"),
        }
    }
}

pub fn kernel_eval(k: &KernelSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::invalid(format!("kernel inputs differ in length: {} vs {}", x.len(), y.len())));
    }
    Ok(k.eval(x, y))
}
