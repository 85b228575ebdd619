use std::path::{Path, PathBuf};

use clap::Args;
use rayon::prelude::*;
use splicestat_core::dataset::{write_predictions, PredictionRow};
use splicestat_core::pipeline::pnm::read_image;
use splicestat_core::svm::predict;
use splicestat_core::{extract_features, FeatureConfig, FeatureSchema, SvmModel};

use super::{emit, load_manifest};
use crate::config::{ConfigFile, PipelineArgs};
use crate::error::{CliError, CliResult, Outcome};

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["manifest", "image"]))]
pub struct PredictArgs {
    /// Model JSON written by `train`.
    #[arg(long)]
    pub model: PathBuf,
    /// Classify every image in a manifest.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Classify one image and print its label and decision value.
    #[arg(long)]
    pub image: Option<PathBuf>,
    /// Predictions CSV; standard output if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

/// Feature settings for a model: block size and levels come from the model's
/// schema; preprocessing from flags and config, which must match training.
fn feature_config(model: &SvmModel, args: &PredictArgs, cfg: &ConfigFile) -> CliResult<FeatureConfig> {
    let schema = FeatureSchema::parse_version(&model.schema_version).map_err(|e| {
        CliError::usage(format!("model {} has no usable schema_version: {e}", args.model.display()))
    })?;
    let requested = args.pipeline.feature_config(cfg)?;
    let explicit_b = cfg.pick(args.pipeline.block_size, "block_size")?;
    let explicit_l = cfg.pick(args.pipeline.dwt_levels, "dwt_levels")?;
    if explicit_b.is_some_and(|b| b != schema.block_size) || explicit_l.is_some_and(|l| l != schema.dwt_levels) {
        return Err(CliError::usage(format!(
            "requested block size/levels differ from the model schema {}",
            model.schema_version
        )));
    }
    if model.dim() != schema.len() {
        return Err(CliError::usage(format!(
            "model has {} inputs but schema {} has {}",
            model.dim(),
            model.schema_version,
            schema.len()
        )));
    }
    Ok(FeatureConfig::new(requested.preprocess, schema.block_size, schema.dwt_levels))
}

fn classify(path: &Path, model: &SvmModel, fc: &FeatureConfig) -> splicestat_core::Result<(String, f64)> {
    let img = read_image(path)?;
    let values = extract_features(&img, fc)?.features.values;
    let p = predict(model, &values)?;
    Ok((p.label.to_string(), p.decision_value))
}

pub fn run(args: &PredictArgs, cfg: &ConfigFile) -> CliResult {
    let model = SvmModel::load(&args.model).map_err(|e| CliError::usage(format!("{}: {e}", args.model.display())))?;
    let fc = feature_config(&model, args, cfg)?;

    if let Some(image) = &args.image {
        let (label, decision) = classify(image, &model, &fc).map_err(|e| match CliError::from(e) {
            CliError::Usage(m) => CliError::Usage(format!("{}: {m}", image.display())),
            CliError::Numeric(m) => CliError::Numeric(format!("{}: {m}", image.display())),
        })?;
        let line = format!("{label} {decision}\n");
        emit(args.out.as_deref(), line.as_bytes())?;
        return Ok(Outcome::Success);
    }

    let manifest_path = args.manifest.as_deref().expect("clap enforces one input");
    let (manifest, rejected) = load_manifest(manifest_path)?;
    let results: Vec<_> = manifest
        .rows
        .par_iter()
        .map(|row| {
            let path = manifest.resolve(row);
            let img = read_image(&path).map_err(|e| (path.clone(), e))?;
            let values = extract_features(&img, &fc).map_err(|e| (path.clone(), e))?.features.values;
            predict(&model, &values).map_err(|e| (path, e))
        })
        .collect();

    let mut rows = Vec::with_capacity(results.len());
    let mut failed = rejected.len();
    for (row, res) in manifest.rows.iter().zip(results) {
        match res {
            Ok(p) => rows.push(PredictionRow {
                path: row.path.clone(),
                true_label: Some(row.label),
                predicted_label: p.label,
                decision_value: p.decision_value,
                category: row.category,
            }),
            Err((path, e)) => {
                log::error!("{}: {e}", path.display());
                failed += 1;
            }
        }
    }
    let mut buf = Vec::new();
    write_predictions(&rows, &mut buf)?;
    emit(args.out.as_deref(), &buf)?;
    log::info!("predicted {} of {} rows", rows.len(), rows.len() + failed);
    Ok(if failed == 0 { Outcome::Success } else { Outcome::Partial })
}
