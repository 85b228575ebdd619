//! Fixed-order feature vectors built from block-DCT model fits and Haar
//! subband moments.
//!
//! Layout for block size `B` and `L` wavelet levels (40 values for the
//! default `B = 8`, `L = 3`):
//!
//! | index      | content                                                  |
//! |------------|----------------------------------------------------------|
//! | 0, 1       | Gaussian μ, σ of the DC coefficients                     |
//! | 2, 3       | GGD α, β of all AC coefficients pooled                   |
//! | 4 .. 22    | GGD α, β of each of the first 9 zigzag AC positions      |
//! | 22 ..      | E1, E2 of each detail subband, by level then h/v/d       |

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pipeline::{GrayImage, PreprocessConfig};
use crate::stats::{fit_gaussian, fit_ggd, subband_energy, GgdFit, GgdParams, BETA_MAX, MIN_GGD_SAMPLES};
use crate::transforms::{block_dct, dwt_haar, zigzag_order, Orientation};

pub const SCHEMA_PREFIX: &str = "splicestat-v1";
pub const PER_FREQUENCY_POSITIONS: usize = 9;
/// Stand-in for a per-frequency fit whose coefficients are all zero.
pub const DEGENERATE_GGD: GgdParams = GgdParams { alpha: 1e-6, beta: BETA_MAX };

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FeatureSchema {
    pub block_size: usize,
    pub dwt_levels: usize,
}

impl Default for FeatureSchema {
    fn default() -> Self {
        Self { block_size: 8, dwt_levels: 3 }
    }
}

impl FeatureSchema {
    pub fn len(&self) -> usize {
        4 + 2 * PER_FREQUENCY_POSITIONS + 6 * self.dwt_levels
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn version(&self) -> String {
        format!("{SCHEMA_PREFIX}-b{}-l{}", self.block_size, self.dwt_levels)
    }

    pub fn parse_version(version: &str) -> Result<Self> {
        let bad = || Error::Schema { expected: format!("{SCHEMA_PREFIX}-b<B>-l<L>"), found: version.to_owned() };
        let rest = version.strip_prefix(SCHEMA_PREFIX).and_then(|r| r.strip_prefix("-b")).ok_or_else(bad)?;
        let (b, l) = rest.split_once("-l").ok_or_else(bad)?;
        let schema = Self { block_size: b.parse().map_err(|_| bad())?, dwt_levels: l.parse().map_err(|_| bad())? };
        schema.validate().map_err(|_| bad())?;
        Ok(schema)
    }

    pub fn validate(&self) -> Result<()> {
        if self.block_size < 4 {
            return Err(Error::invalid(format!(
                "block size {} has fewer than {PER_FREQUENCY_POSITIONS} AC positions",
                self.block_size
            )));
        }
        if self.dwt_levels == 0 {
            return Err(Error::invalid("wavelet levels must be at least 1"));
        }
        Ok(())
    }

    /// `(row, column)` of the AC positions with their own fit.
    pub fn frequency_positions(&self) -> Vec<(usize, usize)> {
        zigzag_order(self.block_size).into_iter().skip(1).take(PER_FREQUENCY_POSITIONS).collect()
    }

    pub fn names(&self) -> Vec<String> {
        let mut names: Vec<String> = ["dc_mu", "dc_sigma", "ac_alpha", "ac_beta"].map(String::from).into();
        for (u, v) in self.frequency_positions() {
            names.push(format!("ac_{u}_{v}_alpha"));
            names.push(format!("ac_{u}_{v}_beta"));
        }
        for level in 1..=self.dwt_levels {
            for o in Orientation::ALL {
                names.push(format!("dwt_l{level}_{}_e1", o.short_name()));
                names.push(format!("dwt_l{level}_{}_e2", o.short_name()));
            }
        }
        names
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub schema_version: String,
    pub values: Vec<f64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FeatureConfig {
    pub preprocess: PreprocessConfig,
    pub block_size: usize,
    pub dwt_levels: usize,
}

impl FeatureConfig {
    pub fn new(preprocess: PreprocessConfig, block_size: usize, dwt_levels: usize) -> Self {
        Self { preprocess, block_size, dwt_levels }
    }

    pub fn schema(&self) -> FeatureSchema {
        FeatureSchema { block_size: self.block_size, dwt_levels: self.dwt_levels }
    }
}

impl FeatureConfig {
    pub fn standard() -> Self {
        let s = FeatureSchema::default();
        Self::new(PreprocessConfig::default(), s.block_size, s.dwt_levels)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtractionDiagnostics {
    pub n_blocks: usize,
    pub dc_samples: usize,
    pub pooled_ac_samples: usize,
    pub per_frequency_samples: usize,
    pub pooled_fit: GgdFit,
    /// `None` where the coefficients at that position were all zero.
    pub frequency_fits: Vec<Option<GgdFit>>,
    /// Feature indices that hold [`DEGENERATE_GGD`].
    pub degenerate_features: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Extraction {
    pub features: FeatureVector,
    pub diagnostics: ExtractionDiagnostics,
}

pub fn extract_features(img: &GrayImage, cfg: &FeatureConfig) -> Result<Extraction> {
    let schema = cfg.schema();
    schema.validate()?;
    let img = cfg.preprocess.apply(img)?;
    let names = schema.names();
    let wrap = |index: usize| {
        let name = names[index].clone();
        move |e: Error| Error::Feature { index, name, source: Box::new(e) }
    };

    let grid = block_dct(&img, schema.block_size)?;
    if grid.n_blocks() < MIN_GGD_SAMPLES {
        return Err(Error::InsufficientData { needed: MIN_GGD_SAMPLES, got: grid.n_blocks() });
    }
    let mut values = Vec::with_capacity(schema.len());

    let dc = grid.dc_values();
    let dc_fit = fit_gaussian(&dc).map_err(wrap(0))?;
    values.extend([dc_fit.mu, dc_fit.sigma]);

    let ac = snap_rounding(grid.ac_values());
    let pooled_fit = fit_ggd(&ac).map_err(wrap(2))?;
    values.extend([pooled_fit.params.alpha, pooled_fit.params.beta]);

    let positions = schema.frequency_positions();
    let frequency_fits: Vec<Result<Option<GgdFit>>> = positions
        .par_iter()
        .enumerate()
        .map(|(k, &(u, v))| match fit_ggd(&snap_rounding(grid.frequency_values(u, v))) {
            Ok(fit) => Ok(Some(fit)),
            Err(Error::DegenerateDistribution(_)) => Ok(None),
            Err(e) => Err(wrap(4 + 2 * k)(e)),
        })
        .collect();
    let mut degenerate_features = Vec::new();
    let mut fits = Vec::with_capacity(positions.len());
    for (k, fit) in frequency_fits.into_iter().enumerate() {
        let fit = fit?;
        let p = match &fit {
            Some(f) => f.params,
            None => {
                degenerate_features.extend([4 + 2 * k, 5 + 2 * k]);
                DEGENERATE_GGD
            }
        };
        values.extend([p.alpha, p.beta]);
        fits.push(fit);
    }

    let pyramid = dwt_haar(&img, schema.dwt_levels)?;
    for band in &pyramid.details {
        let e = subband_energy(band)?;
        values.extend([e.e1, e.e2]);
    }
    debug_assert_eq!(values.len(), schema.len());

    Ok(Extraction {
        features: FeatureVector { schema_version: schema.version(), values },
        diagnostics: ExtractionDiagnostics {
            n_blocks: grid.n_blocks(),
            dc_samples: dc.len(),
            pooled_ac_samples: ac.len(),
            per_frequency_samples: grid.n_blocks(),
            pooled_fit,
            frequency_fits: fits,
            degenerate_features,
        },
    })
}

/// AC coefficients below this magnitude are floating-point residue of an
/// exactly-zero frequency and are treated as zero.
const AC_ZERO_FLOOR: f64 = 1e-9;

fn snap_rounding(mut values: Vec<f64>) -> Vec<f64> {
    for v in &mut values {
        if v.abs() <= AC_ZERO_FLOOR {
            *v = 0.0;
        }
    }
    values
}
