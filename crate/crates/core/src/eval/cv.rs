use std::cmp::Ordering;
use std::fmt::Write as _;

use rayon::prelude::*;

use super::folds::{make_folds, FoldPlan};
use super::metrics::{compute_metrics, ConfusionCounts, Metrics};
use crate::dataset::Label;
use crate::error::{Error, Result};
use crate::svm::{predict, train_smo, GammaSetting, KernelKind, KernelSpec, TrainParams};

/// Hyperparameter grid for one kernel family.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelGrid {
    pub kind: KernelKind,
    pub c_values: Vec<f64>,
    pub gammas: Vec<GammaSetting>,
    pub degrees: Vec<u32>,
    pub coef0s: Vec<f64>,
}

impl KernelGrid {
    /// C ∈ {0.1, 1, 10, 100}, γ ∈ {auto, 0.01, 0.1, 1}, degree ∈ {2, 3},
    /// coef0 ∈ {0, 1}; each kernel uses only the axes it needs.
    pub fn default_for(kind: KernelKind) -> Self {
        Self {
            kind,
            c_values: vec![0.1, 1.0, 10.0, 100.0],
            gammas: vec![
                GammaSetting::Auto,
                GammaSetting::Value(0.01),
                GammaSetting::Value(0.1),
                GammaSetting::Value(1.0),
            ],
            degrees: vec![2, 3],
            coef0s: vec![0.0, 1.0],
        }
    }

    pub fn single(kernel: KernelSpec, c: f64) -> Self {
        Self {
            kind: kernel.kind(),
            c_values: vec![c],
            gammas: kernel.gamma().map(GammaSetting::Value).into_iter().collect(),
            degrees: kernel.degree().into_iter().collect(),
            coef0s: kernel.coef0().into_iter().collect(),
        }
    }

    /// Expands the grid for `n_features`-dimensional inputs.
    pub fn points(&self, n_features: usize) -> Result<Vec<GridPoint>> {
        let one = |v: &[f64]| if v.is_empty() { vec![0.0] } else { v.to_vec() };
        let gammas: Vec<GammaSetting> =
            if self.gammas.is_empty() { vec![GammaSetting::Auto] } else { self.gammas.clone() };
        let degrees: Vec<u32> = if self.degrees.is_empty() { vec![3] } else { self.degrees.clone() };
        let mut points = Vec::new();
        for &c in &self.c_values {
            if !c.is_finite() || c <= 0.0 {
                return Err(Error::invalid(format!("grid C = {c} must be positive")));
            }
            match self.kind {
                KernelKind::Linear => points.push(GridPoint { kernel: KernelSpec::Linear, c, gamma: None }),
                KernelKind::Rbf => {
                    for &g in &gammas {
                        let kernel = KernelSpec::Rbf { gamma: g.resolve(n_features) };
                        points.push(GridPoint { kernel, c, gamma: Some(g) });
                    }
                }
                KernelKind::Polynomial => {
                    for &g in &gammas {
                        for &degree in &degrees {
                            for coef0 in one(&self.coef0s) {
                                let kernel = KernelSpec::Polynomial { gamma: g.resolve(n_features), degree, coef0 };
                                points.push(GridPoint { kernel, c, gamma: Some(g) });
                            }
                        }
                    }
                }
                KernelKind::Sigmoid => {
                    for &g in &gammas {
                        for coef0 in one(&self.coef0s) {
                            let kernel = KernelSpec::Sigmoid { gamma: g.resolve(n_features), coef0 };
                            points.push(GridPoint { kernel, c, gamma: Some(g) });
                        }
                    }
                }
            }
        }
        for p in &points {
            p.kernel.validate()?;
        }
        if points.is_empty() {
            return Err(Error::invalid(format!("empty {} grid", self.kind)));
        }
        Ok(points)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridPoint {
    pub kernel: KernelSpec,
    pub c: f64,
    /// Gamma as configured, before resolving `auto`.
    pub gamma: Option<GammaSetting>,
}

impl GridPoint {
    /// Tie-break order: smaller C, then smaller γ, degree and coef0.
    fn tie_key(&self) -> [f64; 4] {
        [
            self.c,
            self.kernel.gamma().unwrap_or(0.0),
            f64::from(self.kernel.degree().unwrap_or(0)),
            self.kernel.coef0().unwrap_or(0.0),
        ]
    }

    pub fn describe(&self) -> String {
        let mut s = format!("C={}", self.c);
        if let Some(g) = self.gamma {
            match g {
                GammaSetting::Auto => write!(s, " gamma=auto({})", self.kernel.gamma().unwrap_or_default()),
                GammaSetting::Value(v) => write!(s, " gamma={v}"),
            }
            .ok();
        }
        if let Some(d) = self.kernel.degree() {
            write!(s, " degree={d}").ok();
        }
        if let Some(c0) = self.kernel.coef0() {
            write!(s, " coef0={c0}").ok();
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CvConfig {
    pub k: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_passes: usize,
}

impl Default for CvConfig {
    fn default() -> Self {
        Self { k: 10, seed: 0, tol: 1e-3, max_passes: 10_000 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FoldOutcome {
    pub fold: usize,
    /// Caller-order indices of the rows trained on and scored.
    pub train_indices: Vec<usize>,
    pub test_indices: Vec<usize>,
    /// Decision value for each entry of `test_indices`.
    pub decisions: Vec<f64>,
    pub confusion: ConfusionCounts,
    pub metrics: Metrics,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Stat {
    pub mean: f64,
    /// Sample standard deviation across folds.
    pub std: f64,
}

impl Stat {
    fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() > 1 {
            (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Self { mean, std }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MetricSummary {
    pub accuracy: Stat,
    pub recall: Stat,
    pub precision: Stat,
    pub f1: Stat,
}

impl MetricSummary {
    fn of(folds: &[FoldOutcome]) -> Self {
        let col = |f: fn(&Metrics) -> f64| Stat::of(&folds.iter().map(|o| f(&o.metrics)).collect::<Vec<_>>());
        Self {
            accuracy: col(|m| m.accuracy),
            recall: col(|m| m.recall),
            precision: col(|m| m.precision),
            f1: col(|m| m.f1),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridResult {
    pub point: GridPoint,
    pub folds: Vec<FoldOutcome>,
    pub summary: Option<MetricSummary>,
    /// First fold failure; a failed point is never selected.
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CvResult {
    pub kind: KernelKind,
    pub grid: Vec<GridResult>,
    pub best: Option<usize>,
    pub plan: FoldPlan,
}

impl CvResult {
    pub fn best(&self) -> Option<&GridResult> {
        self.best.map(|i| &self.grid[i])
    }

    /// Out-of-fold decision values of the selected grid point, in caller order.
    pub fn out_of_fold_decisions(&self) -> Option<Vec<f64>> {
        let best = self.best()?;
        let n = best.folds.iter().map(|f| f.test_indices.len()).sum();
        let mut out = vec![0.0; n];
        for f in &best.folds {
            for (&i, &d) in f.test_indices.iter().zip(&f.decisions) {
                out[i] = d;
            }
        }
        Some(out)
    }
}

/// Sample order that depends only on sample content: by label, then by the
/// feature values. Folds are built over this order so that results do not
/// depend on how the caller happened to order the rows.
fn canonical_order(features: &[Vec<f64>], labels: &[Label]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..labels.len()).collect();
    idx.sort_by(|&a, &b| {
        labels[a].cmp(&labels[b]).then_with(|| {
            features[a]
                .iter()
                .zip(&features[b])
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| *o != Ordering::Equal)
                .unwrap_or(Ordering::Equal)
        })
    });
    idx
}

fn run_fold(
    features: &[Vec<f64>],
    labels: &[Label],
    order: &[usize],
    plan: &FoldPlan,
    fold: usize,
    params: &TrainParams,
) -> Result<FoldOutcome> {
    let train_indices: Vec<usize> = plan.train_indices(fold).into_iter().map(|i| order[i]).collect();
    let test_indices: Vec<usize> = plan.test_indices(fold).into_iter().map(|i| order[i]).collect();
    let x: Vec<Vec<f64>> = train_indices.iter().map(|&i| features[i].clone()).collect();
    let y: Vec<Label> = train_indices.iter().map(|&i| labels[i]).collect();
    let model = train_smo(&x, &y, params)?;
    let mut confusion = ConfusionCounts::default();
    let mut decisions = Vec::with_capacity(test_indices.len());
    for &i in &test_indices {
        let p = predict(&model, &features[i])?;
        confusion.add(p.label, labels[i]);
        decisions.push(p.decision_value);
    }
    let metrics = compute_metrics(&confusion)?;
    Ok(FoldOutcome { fold, train_indices, test_indices, decisions, confusion, metrics })
}

/// k-fold grid search for one kernel family. Every grid point is scored on
/// the same folds; the winner has the highest mean accuracy.
pub fn cross_validate(features: &[Vec<f64>], labels: &[Label], grid: &KernelGrid, cfg: &CvConfig) -> Result<CvResult> {
    if features.len() != labels.len() {
        return Err(Error::invalid(format!("{} feature rows but {} labels", features.len(), labels.len())));
    }
    let dim = features.first().map_or(0, Vec::len);
    if dim == 0 || features.iter().any(|r| r.len() != dim) {
        return Err(Error::invalid("feature rows must share a non-zero length"));
    }
    let order = canonical_order(features, labels);
    let sorted_labels: Vec<Label> = order.iter().map(|&i| labels[i]).collect();
    let plan = make_folds(&sorted_labels, cfg.k, cfg.seed)?;
    let points = grid.points(dim)?;

    let jobs: Vec<(usize, usize)> = (0..points.len()).flat_map(|p| (0..cfg.k).map(move |f| (p, f))).collect();
    let outcomes: Vec<Result<FoldOutcome>> = jobs
        .par_iter()
        .map(|&(p, f)| {
            let params = TrainParams {
                kernel: points[p].kernel,
                c: points[p].c,
                tol: cfg.tol,
                max_passes: cfg.max_passes,
                seed: cfg.seed,
                standardize: true,
            };
            run_fold(features, labels, &order, &plan, f, &params)
        })
        .collect();

    let mut results = Vec::with_capacity(points.len());
    let mut outcomes = outcomes.into_iter();
    for point in points {
        let mut folds = Vec::with_capacity(cfg.k);
        let mut failure = None;
        for (f, o) in outcomes.by_ref().take(cfg.k).enumerate() {
            match o {
                Ok(o) => folds.push(o),
                Err(e) => {
                    failure.get_or_insert_with(|| format!("fold {f}: {e}"));
                }
            }
        }
        let summary = failure.is_none().then(|| MetricSummary::of(&folds));
        results.push(GridResult { point, folds, summary, failure });
    }

    let best = results
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.summary.map(|s| (i, s.accuracy.mean, r.point.tie_key())))
        .min_by(|a, b| {
            b.1.total_cmp(&a.1).then_with(|| {
                a.2.iter().zip(&b.2).map(|(x, y)| x.total_cmp(y)).find(|o| *o != Ordering::Equal).unwrap_or(Ordering::Equal)
            })
        })
        .map(|(i, _, _)| i);

    Ok(CvResult { kind: grid.kind, grid: results, best, plan })
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelRow {
    pub kind: KernelKind,
    pub best: Option<GridPoint>,
    pub summary: Option<MetricSummary>,
    pub failed_points: usize,
    pub total_points: usize,
}

/// One row per kernel family, best mean accuracy first.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelComparison {
    pub k: usize,
    pub seed: u64,
    pub rows: Vec<KernelRow>,
}

pub fn compare_kernels(
    features: &[Vec<f64>],
    labels: &[Label],
    grids: &[KernelGrid],
    cfg: &CvConfig,
) -> Result<(KernelComparison, Vec<CvResult>)> {
    let mut results = Vec::with_capacity(grids.len());
    for grid in grids {
        results.push(cross_validate(features, labels, grid, cfg)?);
    }
    let mut rows: Vec<KernelRow> = results
        .iter()
        .map(|r| KernelRow {
            kind: r.kind,
            best: r.best().map(|b| b.point),
            summary: r.best().and_then(|b| b.summary),
            failed_points: r.grid.iter().filter(|g| g.failure.is_some()).count(),
            total_points: r.grid.len(),
        })
        .collect();
    // Stable: equal accuracies keep the input kernel order.
    rows.sort_by(|a, b| match (&a.summary, &b.summary) {
        (Some(x), Some(y)) => y.accuracy.mean.total_cmp(&x.accuracy.mean),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    });
    Ok((KernelComparison { k: cfg.k, seed: cfg.seed, rows }, results))
}

impl KernelComparison {
    pub fn render_text(&self) -> String {
        let mut out = format!("Kernel comparison ({}-fold cross-validation, seed {})\n", self.k, self.seed);
        writeln!(
            out,
            "{:<4} {:<11} {:>14} {:>14} {:>14} {:>14}  Best parameters",
            "Rank", "Kernel", "Accuracy (%)", "Recall (%)", "Precision (%)", "F1 Score (%)"
        )
        .ok();
        for (rank, row) in self.rows.iter().enumerate() {
            match (&row.summary, &row.best) {
                (Some(s), Some(b)) => {
                    let cell = |st: &Stat| format!("{:.1} ± {:.1}", 100.0 * st.mean, 100.0 * st.std);
                    writeln!(
                        out,
                        "{:<4} {:<11} {:>14} {:>14} {:>14} {:>14}  {}",
                        rank + 1,
                        row.kind.as_str(),
                        cell(&s.accuracy),
                        cell(&s.recall),
                        cell(&s.precision),
                        cell(&s.f1),
                        b.describe()
                    )
                    .ok();
                }
                _ => {
                    writeln!(
                        out,
                        "{:<4} {:<11} {:>14} {:>14} {:>14} {:>14}  all {} grid points failed",
                        rank + 1,
                        row.kind.as_str(),
                        "n/a",
                        "n/a",
                        "n/a",
                        "n/a",
                        row.total_points
                    )
                    .ok();
                }
            }
        }
        out
    }

    pub fn render_csv(&self) -> String {
        let mut out = String::from(
            "rank,kernel,accuracy,accuracy_std,recall,recall_std,precision,precision_std,f1,f1_std,C,gamma,degree,coef0,failed_points,total_points\n",
        );
        for (rank, row) in self.rows.iter().enumerate() {
            let opt = |v: Option<String>| v.unwrap_or_default();
            let stats = row.summary.map(|s| {
                [s.accuracy, s.recall, s.precision, s.f1]
                    .iter()
                    .map(|st| format!("{:.1},{:.1}", 100.0 * st.mean, 100.0 * st.std))
                    .collect::<Vec<_>>()
                    .join(",")
            });
            let b = row.best;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                rank + 1,
                row.kind,
                stats.unwrap_or_else(|| ",,,,,,,".into()),
                opt(b.map(|p| p.c.to_string())),
                opt(b.and_then(|p| p.kernel.gamma()).map(|g| g.to_string())),
                opt(b.and_then(|p| p.kernel.degree()).map(|d| d.to_string())),
                opt(b.and_then(|p| p.kernel.coef0()).map(|c| c.to_string())),
                row.failed_points,
                row.total_points
            )
            .ok();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Class is the sign of feature 0, with a gap of 1 around zero.
    fn separable(n: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<Label>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in 0..n {
            let label = if i % 2 == 0 { Label::Spliced } else { Label::Authentic };
            let f0 = label.sign() * rng.random_range(0.5..3.0);
            x.push(vec![f0, rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]);
            y.push(label);
        }
        (x, y)
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(KernelGrid::default_for(KernelKind::Linear).points(40).unwrap().len(), 4);
        assert_eq!(KernelGrid::default_for(KernelKind::Rbf).points(40).unwrap().len(), 16);
        assert_eq!(KernelGrid::default_for(KernelKind::Polynomial).points(40).unwrap().len(), 64);
        assert_eq!(KernelGrid::default_for(KernelKind::Sigmoid).points(40).unwrap().len(), 32);
        let rbf = KernelGrid::default_for(KernelKind::Rbf).points(40).unwrap();
        assert_eq!(rbf[0].kernel, KernelSpec::Rbf { gamma: 0.025 });
    }

    #[test]
    fn separable_linear_is_perfect() {
        let (x, y) = separable(60, 1);
        let grid = KernelGrid::single(KernelSpec::Linear, 1.0);
        let cv = cross_validate(&x, &y, &grid, &CvConfig { k: 5, ..Default::default() }).unwrap();
        let best = cv.best().unwrap();
        assert_eq!(best.summary.unwrap().accuracy.mean, 1.0);
    }

    #[test]
    fn five_runs_per_point_and_no_leakage() {
        let (x, y) = separable(100, 2);
        let grid = KernelGrid { c_values: vec![0.1, 1.0], ..KernelGrid::default_for(KernelKind::Linear) };
        let cv = cross_validate(&x, &y, &grid, &CvConfig { k: 5, ..Default::default() }).unwrap();
        assert_eq!(cv.grid.len(), 2);
        for g in &cv.grid {
            assert_eq!(g.folds.len(), 5);
            let mut seen = vec![0; 100];
            for f in &g.folds {
                assert!(f.test_indices.iter().all(|i| !f.train_indices.contains(i)));
                assert_eq!(f.train_indices.len() + f.test_indices.len(), 100);
                f.test_indices.iter().for_each(|&i| seen[i] += 1);
            }
            assert!(seen.iter().all(|&c| c == 1));
        }
    }

    #[test]
    fn row_order_does_not_matter() {
        let (x, y) = separable(40, 3);
        let mut noisy = x.clone();
        // Flip a few points so accuracy is not trivially 1.
        for row in noisy.iter_mut().step_by(7) {
            row[0] = -row[0];
        }
        let grid = KernelGrid::default_for(KernelKind::Rbf);
        let cfg = CvConfig { k: 4, seed: 5, ..Default::default() };
        let a = cross_validate(&noisy, &y, &grid, &cfg).unwrap();
        let perm: Vec<usize> = (0..40).rev().collect();
        let px: Vec<Vec<f64>> = perm.iter().map(|&i| noisy[i].clone()).collect();
        let py: Vec<Label> = perm.iter().map(|&i| y[i]).collect();
        let b = cross_validate(&px, &py, &grid, &cfg).unwrap();
        for (ga, gb) in a.grid.iter().zip(&b.grid) {
            assert_eq!(ga.summary, gb.summary);
        }
        assert_eq!(a.best, b.best);
    }

    #[test]
    fn ties_prefer_smaller_c() {
        let (x, y) = separable(40, 4);
        let grid = KernelGrid { c_values: vec![100.0, 10.0, 1.0], ..KernelGrid::default_for(KernelKind::Linear) };
        let cv = cross_validate(&x, &y, &grid, &CvConfig { k: 4, ..Default::default() }).unwrap();
        assert_eq!(cv.best().unwrap().point.c, 1.0);
    }

    #[test]
    fn comparison_has_four_rows_and_is_repeatable() {
        let (x, y) = separable(40, 6);
        let grids: Vec<KernelGrid> = KernelKind::ALL
            .iter()
            .map(|&k| KernelGrid { c_values: vec![1.0], ..KernelGrid::default_for(k) })
            .collect();
        let cfg = CvConfig { k: 4, seed: 1, ..Default::default() };
        let (table, _) = compare_kernels(&x, &y, &grids, &cfg).unwrap();
        assert_eq!(table.rows.len(), 4);
        let linear = table.rows.iter().find(|r| r.kind == KernelKind::Linear).unwrap();
        assert_eq!(linear.summary.unwrap().accuracy.mean, 1.0);
        let (again, _) = compare_kernels(&x, &y, &grids, &cfg).unwrap();
        assert_eq!(table.render_text(), again.render_text());
        assert_eq!(table.render_csv(), again.render_csv());
        assert_eq!(table.render_csv().lines().count(), 5);
    }
}
