//! Maximum-likelihood fitting of the zero-mean generalized Gaussian
//!
//! ```text
//! g(x) = β / (2 α Γ(1/β)) · exp(−(|x|/α)^β)
//! ```
//!
//! Setting ∂lnL/∂α = 0 gives α(β) = (β/N · Σ|xᵢ|^β)^(1/β). Substituting it
//! into ∂lnL/∂β = 0 leaves one equation in β:
//!
//! ```text
//! h(β) = 1 + ψ(1/β)/β − Σ|xᵢ|^β ln|xᵢ| / Σ|xᵢ|^β + ln(β/N · Σ|xᵢ|^β)/β = 0
//! ```
//!
//! `h` is the derivative of the profile log-likelihood scaled by β/N, so a
//! positive value means the likelihood still grows with β. The root is found
//! with Newton–Raphson from a moment-ratio starting point, falling back to
//! bisection on `[BETA_MIN, BETA_MAX]`.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::digamma::digamma;
use crate::error::{Error, Result};

pub const BETA_MIN: f64 = 0.05;
pub const BETA_MAX: f64 = 5.0;
pub const MIN_GGD_SAMPLES: usize = 32;

const RESIDUAL_TOL: f64 = 1e-8;
const NEWTON_MAX_ITER: usize = 100;
const DERIVATIVE_STEP: f64 = 1e-6;
const BISECTION_MAX_ITER: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GgdParams {
    /// Scale.
    pub alpha: f64,
    /// Shape.
    pub beta: f64,
}

impl GgdParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let p = Self { alpha, beta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() || self.alpha <= 0.0 {
            return Err(Error::invalid(format!("GGD scale {} must be positive", self.alpha)));
        }
        if !(BETA_MIN..=BETA_MAX).contains(&self.beta) {
            return Err(Error::invalid(format!(
                "GGD shape {} outside [{BETA_MIN}, {BETA_MAX}]",
                self.beta
            )));
        }
        Ok(())
    }

    fn ln_norm(&self) -> f64 {
        self.beta.ln() - (2.0 * self.alpha).ln() - ln_gamma(1.0 / self.beta)
    }
}

pub fn ggd_pdf(x: f64, p: &GgdParams) -> Result<f64> {
    p.validate()?;
    Ok((p.ln_norm() - (x.abs() / p.alpha).powf(p.beta)).exp())
}

pub fn ggd_log_likelihood(samples: &[f64], p: &GgdParams) -> Result<f64> {
    p.validate()?;
    let tail: f64 = samples.iter().map(|x| (x.abs() / p.alpha).powf(p.beta)).sum();
    Ok(samples.len() as f64 * p.ln_norm() - tail)
}

/// `(E|x|)² / E[x²]` of a GGD with shape `beta`; increasing in `beta`.
pub fn moment_ratio(beta: f64) -> f64 {
    (2.0 * ln_gamma(2.0 / beta) - ln_gamma(1.0 / beta) - ln_gamma(3.0 / beta)).exp()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShapeSolver {
    Newton,
    Bisection,
    /// The likelihood kept increasing towards a bracket end.
    Clamped,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BetaBound {
    Lower,
    Upper,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GgdFit {
    pub params: GgdParams,
    pub solver: ShapeSolver,
    pub iterations: usize,
    /// |h(β̂)| at the returned shape.
    pub residual: f64,
    pub clamped: Option<BetaBound>,
    pub initial_beta: f64,
}

/// Sufficient statistics of the shape equation, with magnitudes divided by
/// their maximum so the result does not depend on the sample scale.
struct ShapeEquation {
    n: f64,
    ln_u: Vec<f64>,
    scale: f64,
}

impl ShapeEquation {
    fn new(samples: &[f64]) -> Result<Self> {
        let scale = samples.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if scale == 0.0 {
            return Err(Error::DegenerateDistribution(format!(
                "all {} samples are zero",
                samples.len()
            )));
        }
        // Zeros contribute nothing to Σ|x|^β and t^β ln t → 0, so they only count in N.
        let ln_u = samples
            .iter()
            .filter(|x| **x != 0.0)
            .map(|x| (x.abs() / scale).ln())
            .collect();
        Ok(Self { n: samples.len() as f64, ln_u, scale })
    }

    /// (Σu^β, Σu^β ln u)
    fn sums(&self, beta: f64) -> (f64, f64) {
        self.ln_u.iter().fold((0.0, 0.0), |(s, t), &l| {
            let p = (beta * l).exp();
            (s + p, t + p * l)
        })
    }

    fn residual(&self, beta: f64) -> f64 {
        let (s, t) = self.sums(beta);
        let psi = digamma(1.0 / beta).unwrap_or(f64::NAN);
        1.0 + psi / beta - t / s + (beta * s / self.n).ln() / beta
    }

    fn derivative(&self, beta: f64) -> f64 {
        let h = DERIVATIVE_STEP;
        (self.residual(beta + h) - self.residual(beta - h)) / (2.0 * h)
    }

    fn alpha(&self, beta: f64) -> f64 {
        let (s, _) = self.sums(beta);
        self.scale * (beta * s / self.n).powf(1.0 / beta)
    }
}

/// Starting shape from matching the sample moment ratio `(E|x|)²/E[x²]`.
fn initial_shape(samples: &[f64]) -> f64 {
    let n = samples.len() as f64;
    let m1 = samples.iter().map(|x| x.abs()).sum::<f64>() / n;
    let m2 = samples.iter().map(|x| x * x).sum::<f64>() / n;
    let target = m1 * m1 / m2;
    if !target.is_finite() || target <= moment_ratio(BETA_MIN) {
        return BETA_MIN;
    }
    if target >= moment_ratio(BETA_MAX) {
        return BETA_MAX;
    }
    let (mut lo, mut hi) = (BETA_MIN, BETA_MAX);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if moment_ratio(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Fits `GGD(α, β)` to zero-centred samples by maximum likelihood.
pub fn fit_ggd(samples: &[f64]) -> Result<GgdFit> {
    if samples.len() < MIN_GGD_SAMPLES {
        return Err(Error::InsufficientData { needed: MIN_GGD_SAMPLES, got: samples.len() });
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("non-finite sample"));
    }
    let eq = ShapeEquation::new(samples)?;
    let initial_beta = initial_shape(samples);

    let finish = |beta: f64, solver, iterations, clamped| {
        let params = GgdParams { alpha: eq.alpha(beta), beta };
        if !params.alpha.is_finite() || params.alpha <= 0.0 {
            return Err(Error::ConvergenceFailure(format!("scale estimate {} at β = {beta}", params.alpha)));
        }
        Ok(GgdFit { params, solver, iterations, residual: eq.residual(beta).abs(), clamped, initial_beta })
    };

    let h_lo = eq.residual(BETA_MIN);
    let h_hi = eq.residual(BETA_MAX);
    if !h_lo.is_finite() || !h_hi.is_finite() {
        return Err(Error::ConvergenceFailure(format!(
            "shape equation not finite on bracket: h({BETA_MIN}) = {h_lo}, h({BETA_MAX}) = {h_hi}"
        )));
    }
    if h_lo > 0.0 && h_hi > 0.0 {
        return finish(BETA_MAX, ShapeSolver::Clamped, 0, Some(BetaBound::Upper));
    }
    if h_lo < 0.0 && h_hi < 0.0 {
        return finish(BETA_MIN, ShapeSolver::Clamped, 0, Some(BetaBound::Lower));
    }
    if h_lo < 0.0 && h_hi > 0.0 {
        return Err(Error::ConvergenceFailure(format!(
            "no likelihood maximum in [{BETA_MIN}, {BETA_MAX}]: h({BETA_MIN}) = {h_lo}, h({BETA_MAX}) = {h_hi}"
        )));
    }

    // Newton–Raphson inside the bracket.
    let mut beta = initial_beta.clamp(BETA_MIN + DERIVATIVE_STEP, BETA_MAX - DERIVATIVE_STEP);
    for iter in 1..=NEWTON_MAX_ITER {
        let h = eq.residual(beta);
        if h.abs() < RESIDUAL_TOL {
            return finish(beta, ShapeSolver::Newton, iter - 1, None);
        }
        let dh = eq.derivative(beta);
        let next = beta - h / dh;
        if !next.is_finite() || next <= BETA_MIN || next >= BETA_MAX {
            break;
        }
        beta = next;
    }

    // Bisection: h(lo) ≥ 0 ≥ h(hi).
    let (mut lo, mut hi) = (BETA_MIN, BETA_MAX);
    for iter in 1..=BISECTION_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        let h = eq.residual(mid);
        if h.abs() < RESIDUAL_TOL {
            return finish(mid, ShapeSolver::Bisection, iter, None);
        }
        if h > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * mid {
            break;
        }
    }
    Err(Error::ConvergenceFailure(format!(
        "shape equation residual stayed above {RESIDUAL_TOL} on [{lo}, {hi}] (h = {}, {})",
        eq.residual(lo),
        eq.residual(hi)
    )))
}
