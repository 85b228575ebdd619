use std::path::PathBuf;

use clap::Args;
use rayon::prelude::*;
use splicestat_core::dataset::{FeatureRow, FeatureTable};
use splicestat_core::extract_features;
use splicestat_core::pipeline::pnm::read_image;

use super::{emit, load_manifest};
use crate::config::{ConfigFile, PipelineArgs};
use crate::error::{CliResult, Outcome};

#[derive(Args, Debug)]
pub struct ExtractArgs {
    /// CSV with header path,label,category.
    #[arg(long)]
    pub manifest: PathBuf,
    /// Feature CSV; standard output if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

pub fn run(args: &ExtractArgs, cfg: &ConfigFile) -> CliResult {
    let fc = args.pipeline.feature_config(cfg)?;
    let (manifest, rejected) = load_manifest(&args.manifest)?;

    let results: Vec<_> = manifest
        .rows
        .par_iter()
        .map(|row| {
            let path = manifest.resolve(row);
            read_image(&path).and_then(|img| extract_features(&img, &fc)).map_err(|e| (path, e))
        })
        .collect();

    let mut table = FeatureTable::new(fc.schema());
    let mut failed = rejected.len();
    for (row, res) in manifest.rows.iter().zip(results) {
        match res {
            Ok(ex) => {
                if !ex.diagnostics.degenerate_features.is_empty() {
                    log::warn!("{}: degenerate features {:?}", row.path, ex.diagnostics.degenerate_features);
                }
                table.rows.push(FeatureRow {
                    path: row.path.clone(),
                    label: row.label,
                    category: row.category,
                    values: ex.features.values,
                });
            }
            Err((path, e)) => {
                log::error!("{}: {e}", path.display());
                failed += 1;
            }
        }
    }

    let mut buf = Vec::new();
    table.write(&mut buf)?;
    emit(args.out.as_deref(), &buf)?;
    log::info!("extracted {} of {} rows", table.rows.len(), table.rows.len() + failed);
    Ok(if failed == 0 { Outcome::Success } else { Outcome::Partial })
}
