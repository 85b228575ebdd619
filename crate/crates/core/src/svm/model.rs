use std::path::Path;

use serde::{Deserialize, Serialize};

use super::kernel::{KernelKind, KernelSpec};
use super::smo::{solve, Gram, SmoSolution};
use super::standardize::Standardizer;
use crate::dataset::Label;
use crate::error::{Error, Result};

pub const MODEL_FORMAT_VERSION: u32 = 1;
/// Dual variables at or below this are not kept as support vectors.
const SUPPORT_THRESHOLD: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrainParams {
    pub kernel: KernelSpec,
    pub c: f64,
    pub tol: f64,
    pub max_passes: usize,
    pub seed: u64,
    /// Z-score features before training (stored in the model either way).
    pub standardize: bool,
}

impl TrainParams {
    pub fn new(kernel: KernelSpec, c: f64) -> Self {
        Self { kernel, c, tol: 1e-3, max_passes: 10_000, seed: 0, standardize: true }
    }
}

/// Self-contained classifier: standardization, support vectors in the
/// standardized space, and `f(x) = Σ coefᵢ K(svᵢ, z(x)) + b`.
#[derive(Clone, Debug, PartialEq)]
pub struct SvmModel {
    pub kernel: KernelSpec,
    pub c: f64,
    pub bias: f64,
    pub standardizer: Standardizer,
    pub support_vectors: Vec<Vec<f64>>,
    /// `αᵢ yᵢ` for each support vector.
    pub dual_coefs: Vec<f64>,
    pub schema_version: String,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Prediction {
    pub label: Label,
    pub decision_value: f64,
}

impl SvmModel {
    pub fn dim(&self) -> usize {
        self.standardizer.dim()
    }

    pub fn decision_value(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::invalid(format!(
                "feature vector has {} values, model expects {}",
                x.len(),
                self.dim()
            )));
        }
        let z = self.standardizer.transform(x);
        Ok(self
            .support_vectors
            .iter()
            .zip(&self.dual_coefs)
            .map(|(sv, coef)| coef * self.kernel.eval(sv, &z))
            .sum::<f64>()
            + self.bias)
    }

    /// Dual objective at the stored solution.
    pub fn dual_objective(&self) -> f64 {
        let mut quad = 0.0;
        for (si, ci) in self.support_vectors.iter().zip(&self.dual_coefs) {
            for (sj, cj) in self.support_vectors.iter().zip(&self.dual_coefs) {
                quad += ci * cj * self.kernel.eval(si, sj);
            }
        }
        self.dual_coefs.iter().map(|c| c.abs()).sum::<f64>() - 0.5 * quad
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&ModelFile::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str::<ModelFile>(text)?.try_into()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = self.to_json()?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

pub fn predict(model: &SvmModel, x: &[f64]) -> Result<Prediction> {
    let decision_value = model.decision_value(x)?;
    Ok(Prediction { label: Label::from_decision(decision_value), decision_value })
}

pub fn train_smo(features: &[Vec<f64>], labels: &[Label], params: &TrainParams) -> Result<SvmModel> {
    train_smo_with_report(features, labels, params).map(|(m, _)| m)
}

/// Trains and also returns the full dual solution over the training rows.
pub fn train_smo_with_report(
    features: &[Vec<f64>],
    labels: &[Label],
    params: &TrainParams,
) -> Result<(SvmModel, SmoSolution)> {
    if features.len() != labels.len() {
        return Err(Error::invalid(format!("{} feature rows but {} labels", features.len(), labels.len())));
    }
    if features.len() < 2 {
        return Err(Error::InsufficientData { needed: 2, got: features.len() });
    }
    let dim = features[0].len();
    if dim == 0 || features.iter().any(|r| r.len() != dim) {
        return Err(Error::invalid("feature rows must share a non-zero length"));
    }
    if features.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::invalid("non-finite feature value"));
    }
    params.kernel.validate()?;

    let standardizer = if params.standardize { Standardizer::fit(features)? } else { Standardizer::identity(dim) };
    let z: Vec<Vec<f64>> = features.iter().map(|r| standardizer.transform(r)).collect();
    let y: Vec<f64> = labels.iter().map(|l| l.sign()).collect();
    let gram = Gram::new(&params.kernel, &z);
    let solution = solve(&gram, &y, params.c, params.tol, params.max_passes, params.seed)?;

    let mut support_vectors = Vec::new();
    let mut dual_coefs = Vec::new();
    for ((row, a), yi) in z.into_iter().zip(&solution.alphas).zip(&y) {
        if *a > SUPPORT_THRESHOLD {
            support_vectors.push(row);
            dual_coefs.push(a * yi);
        }
    }
    let model = SvmModel {
        kernel: params.kernel,
        c: params.c,
        bias: solution.bias,
        standardizer,
        support_vectors,
        dual_coefs,
        schema_version: String::new(),
    };
    Ok((model, solution))
}

#[derive(Serialize, Deserialize)]
struct KernelFile {
    kind: KernelKind,
    gamma: Option<f64>,
    degree: Option<u32>,
    coef0: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct StandardizerFile {
    means: Vec<f64>,
    stds: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    schema_version: String,
    kernel: KernelFile,
    #[serde(rename = "C")]
    c: f64,
    bias: f64,
    standardizer: StandardizerFile,
    support_vectors: Vec<Vec<f64>>,
    dual_coefs: Vec<f64>,
}

impl From<&SvmModel> for ModelFile {
    fn from(m: &SvmModel) -> Self {
        Self {
            format_version: MODEL_FORMAT_VERSION,
            schema_version: m.schema_version.clone(),
            kernel: KernelFile {
                kind: m.kernel.kind(),
                gamma: m.kernel.gamma(),
                degree: m.kernel.degree(),
                coef0: m.kernel.coef0(),
            },
            c: m.c,
            bias: m.bias,
            standardizer: StandardizerFile { means: m.standardizer.means.clone(), stds: m.standardizer.stds.clone() },
            support_vectors: m.support_vectors.clone(),
            dual_coefs: m.dual_coefs.clone(),
        }
    }
}

impl TryFrom<ModelFile> for SvmModel {
    type Error = Error;

    fn try_from(f: ModelFile) -> Result<Self> {
        if f.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::Schema {
                expected: format!("model format_version {MODEL_FORMAT_VERSION}"),
                found: f.format_version.to_string(),
            });
        }
        let kernel = KernelSpec::from_parts(f.kernel.kind, f.kernel.gamma, f.kernel.degree, f.kernel.coef0)?;
        let dim = f.standardizer.means.len();
        if f.standardizer.stds.len() != dim || f.standardizer.stds.iter().any(|s| s.is_nan() || *s <= 0.0) {
            return Err(Error::invalid("model standardizer is malformed"));
        }
        if f.support_vectors.len() != f.dual_coefs.len() || f.support_vectors.iter().any(|sv| sv.len() != dim) {
            return Err(Error::invalid("model support vectors do not match the standardizer"));
        }
        if f.c.is_nan() || f.c <= 0.0 || f.dual_coefs.iter().any(|a| a.abs() > f.c * (1.0 + 1e-12)) {
            return Err(Error::invalid("model dual coefficients exceed the box constraint"));
        }
        Ok(Self {
            kernel,
            c: f.c,
            bias: f.bias,
            standardizer: Standardizer {
                degenerate: vec![false; dim],
                means: f.standardizer.means,
                stds: f.standardizer.stds,
            },
            support_vectors: f.support_vectors,
            dual_coefs: f.dual_coefs,
            schema_version: f.schema_version,
        })
    }
}
