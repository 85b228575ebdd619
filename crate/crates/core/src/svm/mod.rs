//! Binary support vector machine trained with sequential minimal optimization.

mod kernel;
mod model;
mod smo;
mod standardize;

pub use kernel::{kernel_eval, GammaSetting, KernelKind, KernelSpec};
pub use model::{predict, train_smo, train_smo_with_report, Prediction, SvmModel, TrainParams, MODEL_FORMAT_VERSION};
pub use smo::{dual_objective, kkt_violation, solve, Gram, SmoSolution};
pub use standardize::Standardizer;
