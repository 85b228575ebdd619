//! Block DCT and multi-level Haar wavelet analysis.

mod dct;
mod haar;

pub use dct::{block_dct, zigzag_order, BlockGrid, BlockSpectrum, DctPlan};
pub use haar::{dwt_haar, haar_pair, HaarPyramid, Orientation, SubbandCoefficients};
