use std::collections::HashMap;
use std::path::PathBuf;

use clap::Args;
use splicestat_core::dataset::read_predictions;
use splicestat_core::eval::category_report;

use super::{emit, load_manifest};
use crate::config::ConfigFile;
use crate::error::{CliError, CliResult, Outcome};

#[derive(Args, Debug)]
pub struct EvaluateArgs {
    /// Predictions CSV written by `predict` or `cv`.
    #[arg(long)]
    pub predictions: PathBuf,
    /// Manifest holding the true labels and categories.
    #[arg(long)]
    pub manifest: PathBuf,
    /// Report as CSV; the text table always goes to standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &EvaluateArgs, _cfg: &ConfigFile) -> CliResult {
    let file = std::fs::File::open(&args.predictions)
        .map_err(|e| CliError::usage(format!("{}: {e}", args.predictions.display())))?;
    let predictions =
        read_predictions(file).map_err(|e| CliError::usage(format!("{}: {e}", args.predictions.display())))?;
    let (manifest, rejected) = load_manifest(&args.manifest)?;
    if !rejected.is_empty() {
        return Err(CliError::usage(format!("{} has malformed rows", args.manifest.display())));
    }
    let by_path: HashMap<&str, _> = manifest.rows.iter().map(|r| (r.path.as_str(), r)).collect();

    let mut predicted = Vec::with_capacity(predictions.len());
    let mut truth = Vec::with_capacity(predictions.len());
    let mut categories = Vec::with_capacity(predictions.len());
    for p in &predictions {
        let row = by_path
            .get(p.path.as_str())
            .ok_or_else(|| CliError::usage(format!("prediction for `{}` has no manifest row", p.path)))?;
        if p.true_label.is_some_and(|l| l != row.label) {
            log::warn!("{}: predictions file and manifest disagree on the label; using the manifest", p.path);
        }
        predicted.push(p.predicted_label);
        truth.push(row.label);
        categories.push(row.category);
    }
    let report = category_report(&predicted, &truth, &categories)?;
    emit(None, report.render_text().as_bytes())?;
    if let Some(out) = &args.out {
        emit(Some(out), report.render_csv().as_bytes())?;
    }
    Ok(Outcome::Success)
}
