//! Detection of spliced (composited) grayscale images.
//!
//! The pipeline fits a Gaussian to the DC coefficients and generalized
//! Gaussians to the AC coefficients of an 8×8 block DCT, adds first and
//! second absolute moments of Haar wavelet detail subbands, and classifies
//! the resulting fixed-order feature vector with a support vector machine
//! trained by sequential minimal optimization.
//!
//! ```no_run
//! use splicestat_core::{extract_features, read_pgm, FeatureConfig};
//!
//! let img = read_pgm("block.pgm")?;
//! let extraction = extract_features(&img, &FeatureConfig::standard())?;
//! assert_eq!(extraction.features.values.len(), 40);
//! # Ok::<(), splicestat_core::Error>(())
//! ```

pub mod dataset;
pub mod error;
pub mod eval;
pub mod features;
pub mod pipeline;
pub mod stats;
pub mod svm;
pub mod synth;
pub mod transforms;

pub use dataset::{Category, Label};
pub use error::{Error, Result};
pub use features::{extract_features, Extraction, FeatureConfig, FeatureSchema, FeatureVector};
pub use pipeline::pnm::{read_pgm, write_pgm};
pub use pipeline::{GrayImage, PreprocessConfig};
pub use stats::{GaussianParams, GgdFit, GgdParams, SubbandEnergy};
pub use svm::{KernelSpec, Prediction, SvmModel, TrainParams};
pub use transforms::{BlockGrid, BlockSpectrum, HaarPyramid, Orientation, SubbandCoefficients};
