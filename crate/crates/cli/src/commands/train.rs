use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use splicestat_core::dataset::FeatureTable;
use splicestat_core::eval::{cross_validate, CvConfig};
use splicestat_core::svm::{predict, train_smo_with_report, KernelKind, TrainParams};

use super::cv::grid_for;
use super::emit;
use crate::config::{ConfigFile, SvmArgs};
use crate::error::{CliError, CliResult, Outcome};

#[derive(Args, Debug)]
pub struct TrainArgs {
    /// Feature CSV written by `extract`.
    #[arg(long)]
    pub features: PathBuf,
    /// Model JSON to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Pick C and kernel parameters by k-fold CV over the default grid first.
    /// Parameters given explicitly stay fixed.
    #[arg(long, value_name = "K")]
    pub cv: Option<usize>,
    #[command(flatten)]
    pub svm: SvmArgs,
}

pub fn load_table(path: &std::path::Path) -> CliResult<FeatureTable> {
    let table = FeatureTable::load(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    if table.rows.is_empty() {
        return Err(CliError::usage(format!("{} has no feature rows", path.display())));
    }
    Ok(table)
}

pub fn run(args: &TrainArgs, cfg: &ConfigFile) -> CliResult {
    let settings = args.svm.resolve(cfg)?;
    let table = load_table(&args.features)?;
    let x = table.matrix();
    let y = table.labels();
    let dim = table.schema.len();

    let (kernel, c) = match args.cv {
        None => (settings.kernel_spec(dim)?, settings.c.unwrap_or(1.0)),
        Some(k) => {
            let kind = settings.kernel.unwrap_or(KernelKind::Rbf);
            settings.kernel_spec(dim)?;
            let grid = grid_for(kind, &settings)?;
            let cv_cfg = CvConfig { k, seed: settings.seed, tol: settings.tol, max_passes: settings.max_passes };
            let result = cross_validate(&x, &y, &grid, &cv_cfg)?;
            let best = result.best().ok_or_else(|| {
                CliError::Numeric(format!("every {kind} grid point failed during cross-validation"))
            })?;
            log::info!(
                "selected {} (mean CV accuracy {:.4})",
                best.point.describe(),
                best.summary.map_or(0.0, |s| s.accuracy.mean)
            );
            (best.point.kernel, best.point.c)
        }
    };

    let params =
        TrainParams { kernel, c, tol: settings.tol, max_passes: settings.max_passes, seed: settings.seed, standardize: true };
    let (mut model, solution) = train_smo_with_report(&x, &y, &params)?;
    model.schema_version = table.schema.version();
    model.save(&args.out).map_err(|e| CliError::usage(format!("{}: {e}", args.out.display())))?;

    let mut correct = 0;
    for (row, label) in x.iter().zip(&y) {
        if predict(&model, row)?.label == *label {
            correct += 1;
        }
    }
    let mut summary = String::new();
    writeln!(summary, "kernel: {kernel}").ok();
    writeln!(summary, "C: {c}").ok();
    writeln!(summary, "training rows: {}", x.len()).ok();
    writeln!(summary, "support vectors: {}", model.support_vectors.len()).ok();
    writeln!(summary, "training accuracy: {:.4}", correct as f64 / x.len() as f64).ok();
    writeln!(summary, "dual objective: {:.6}", solution.objective).ok();
    writeln!(summary, "max KKT violation: {:.3e}", solution.max_kkt_violation).ok();
    writeln!(summary, "SMO passes: {}", solution.passes).ok();
    for (i, _) in model.standardizer.degenerate.iter().enumerate().filter(|(_, d)| **d) {
        log::warn!("feature {i} is constant over the training set");
    }
    emit(None, summary.as_bytes())?;
    Ok(Outcome::Success)
}
