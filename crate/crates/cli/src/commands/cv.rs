use std::path::PathBuf;

use clap::Args;
use splicestat_core::dataset::{write_predictions, PredictionRow};
use splicestat_core::eval::{compare_kernels, CvConfig, KernelGrid};
use splicestat_core::svm::KernelKind;
use splicestat_core::Label;

use super::emit;
use super::train::load_table;
use crate::config::{ConfigFile, SvmSettings};
use crate::config::SvmArgs;
use crate::error::{CliError, CliResult, Outcome};

#[derive(Args, Debug)]
pub struct CvArgs {
    /// Feature CSV written by `extract`.
    #[arg(long)]
    pub features: PathBuf,
    /// Number of folds.
    #[arg(long)]
    pub k: Option<usize>,
    /// Kernel comparison as CSV; the text table always goes to standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Out-of-fold predictions of the top-ranked kernel, for `evaluate`.
    #[arg(long)]
    pub predictions: Option<PathBuf>,
    /// Restrict to one kernel; all four are compared by default.
    #[command(flatten)]
    pub svm: SvmArgs,
}

/// Default grid for `kind` with every explicitly given parameter pinned.
pub fn grid_for(kind: KernelKind, s: &SvmSettings) -> CliResult<KernelGrid> {
    let mut grid = KernelGrid::default_for(kind);
    if let Some(c) = s.c {
        grid.c_values = vec![c];
    }
    if let Some(g) = s.gamma {
        grid.gammas = vec![g];
    }
    if let Some(d) = s.degree {
        if d == 0 {
            return Err(CliError::usage("degree must be at least 1"));
        }
        grid.degrees = vec![d];
    }
    if let Some(c0) = s.coef0 {
        grid.coef0s = vec![c0];
    }
    Ok(grid)
}

pub fn run(args: &CvArgs, cfg: &ConfigFile) -> CliResult {
    let settings = args.svm.resolve(cfg)?;
    let k = cfg.pick(args.k, "k")?.unwrap_or(10);
    let table = load_table(&args.features)?;
    let x = table.matrix();
    let y = table.labels();
    let kinds: Vec<KernelKind> = match settings.kernel {
        Some(kind) => vec![kind],
        None => KernelKind::ALL.to_vec(),
    };
    let grids = kinds.iter().map(|&kind| grid_for(kind, &settings)).collect::<CliResult<Vec<_>>>()?;
    let cv_cfg = CvConfig { k, seed: settings.seed, tol: settings.tol, max_passes: settings.max_passes };
    let (comparison, results) = compare_kernels(&x, &y, &grids, &cv_cfg)?;

    for r in &results {
        for g in r.grid.iter().filter(|g| g.failure.is_some()) {
            log::warn!("{} {}: {}", r.kind, g.point.describe(), g.failure.as_deref().unwrap_or_default());
        }
    }
    let top = comparison.rows.first().filter(|r| r.summary.is_some()).ok_or_else(|| {
        CliError::Numeric("every grid point of every kernel failed during cross-validation".into())
    })?;

    emit(None, comparison.render_text().as_bytes())?;
    if let Some(out) = &args.out {
        emit(Some(out), comparison.render_csv().as_bytes())?;
    }
    if let Some(path) = &args.predictions {
        let result = results.iter().find(|r| r.kind == top.kind).expect("row comes from a result");
        let decisions = result.out_of_fold_decisions().expect("top row has a selected point");
        let rows: Vec<PredictionRow> = table
            .rows
            .iter()
            .zip(decisions)
            .map(|(row, d)| PredictionRow {
                path: row.path.clone(),
                true_label: Some(row.label),
                predicted_label: Label::from_decision(d),
                decision_value: d,
                category: row.category,
            })
            .collect();
        let mut buf = Vec::new();
        write_predictions(&rows, &mut buf)?;
        emit(Some(path), &buf)?;
    }
    Ok(Outcome::Success)
}
