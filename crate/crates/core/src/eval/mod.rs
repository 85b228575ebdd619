//! Classification metrics, stratified k-fold cross-validation with grid
//! search, kernel comparison and per-category reporting.

mod cv;
mod folds;
mod metrics;
mod report;

pub use cv::{
    compare_kernels, cross_validate, CvConfig, CvResult, FoldOutcome, GridPoint, GridResult, KernelComparison,
    KernelGrid, KernelRow, MetricSummary, Stat,
};
pub use folds::{make_folds, FoldPlan};
pub use metrics::{compute_metrics, ConfusionCounts, MetricFlags, Metrics};
pub use report::{average_rows, category_report, CategoryReport, CategoryRow, PercentRow};
