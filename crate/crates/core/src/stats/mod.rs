//! Distribution fitting for DCT coefficients and wavelet subband moments.

mod digamma;
mod energy;
mod gaussian;
mod ggd;

pub use digamma::digamma;
pub use energy::{subband_energy, SubbandEnergy};
pub use gaussian::{fit_gaussian, GaussianParams};
pub use ggd::{
    fit_ggd, ggd_log_likelihood, ggd_pdf, moment_ratio, BetaBound, GgdFit, GgdParams, ShapeSolver, BETA_MAX,
    BETA_MIN, MIN_GGD_SAMPLES,
};
