use std::fmt::Write as _;

use super::metrics::{compute_metrics, ConfusionCounts, Metrics};
use crate::dataset::{Category, Label};
use crate::error::{Error, Result};

/// Accuracy, recall, precision and F1 in percent, rounded to one decimal.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PercentRow {
    pub accuracy: f64,
    pub recall: f64,
    pub precision: f64,
    pub f1: f64,
}

fn round1(v: f64) -> f64 {
    (v * 10.0).round() / 10.0
}

impl PercentRow {
    pub fn from_metrics(m: &Metrics) -> Self {
        Self::from_array(m.as_array().map(|v| 100.0 * v))
    }

    pub fn from_array(v: [f64; 4]) -> Self {
        Self { accuracy: round1(v[0]), recall: round1(v[1]), precision: round1(v[2]), f1: round1(v[3]) }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.accuracy, self.recall, self.precision, self.f1]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CategoryRow {
    pub category: Category,
    pub n: usize,
    pub confusion: ConfusionCounts,
    /// `None` when the category has no samples.
    pub metrics: Option<PercentRow>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CategoryReport {
    /// The five named categories, always in the same order.
    pub rows: Vec<CategoryRow>,
    /// Unweighted mean of the non-empty category rows, as displayed.
    pub average: Option<PercentRow>,
    /// Pooled over every sample, uncategorized ones included.
    pub total: CategoryRow,
}

/// Unweighted mean of displayed rows, itself rounded to one decimal.
pub fn average_rows(rows: &[PercentRow]) -> Option<PercentRow> {
    if rows.is_empty() {
        return None;
    }
    let n = rows.len() as f64;
    let mut sum = [0.0; 4];
    for r in rows {
        for (s, v) in sum.iter_mut().zip(r.as_array()) {
            *s += v;
        }
    }
    Some(PercentRow::from_array(sum.map(|s| s / n)))
}

fn build_row(category: Category, confusion: ConfusionCounts) -> Result<CategoryRow> {
    let n = confusion.total();
    let metrics = if n == 0 { None } else { Some(PercentRow::from_metrics(&compute_metrics(&confusion)?)) };
    Ok(CategoryRow { category, n, confusion, metrics })
}

pub fn category_report(predictions: &[Label], labels: &[Label], categories: &[Category]) -> Result<CategoryReport> {
    if predictions.len() != labels.len() || labels.len() != categories.len() {
        return Err(Error::invalid(format!(
            "length mismatch: {} predictions, {} labels, {} categories",
            predictions.len(),
            labels.len(),
            categories.len()
        )));
    }
    if labels.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let mut per = [ConfusionCounts::default(); 5];
    let mut total = ConfusionCounts::default();
    for ((&p, &t), &c) in predictions.iter().zip(labels).zip(categories) {
        total.add(p, t);
        if let Some(i) = Category::NAMED.iter().position(|&n| n == c) {
            per[i].add(p, t);
        }
    }
    let rows = Category::NAMED
        .iter()
        .zip(per)
        .map(|(&c, counts)| build_row(c, counts))
        .collect::<Result<Vec<_>>>()?;
    let shown: Vec<PercentRow> = rows.iter().filter_map(|r| r.metrics).collect();
    let average = average_rows(&shown);
    let total = build_row(Category::Uncategorized, total)?;
    Ok(CategoryReport { rows, average, total })
}

fn cells(m: Option<PercentRow>) -> [String; 4] {
    match m {
        Some(m) => m.as_array().map(|v| format!("{v:.1}")),
        None => std::array::from_fn(|_| "n/a".to_string()),
    }
}

impl CategoryReport {
    fn lines(&self) -> Vec<(String, usize, [String; 4])> {
        let mut out: Vec<_> = self.rows.iter().map(|r| (r.category.title().to_string(), r.n, cells(r.metrics))).collect();
        let n_named: usize = self.rows.iter().map(|r| r.n).sum();
        out.push(("Average".into(), n_named, cells(self.average)));
        out.push(("Total".into(), self.total.n, cells(self.total.metrics)));
        out
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "{:<20} {:>6} {:>13} {:>11} {:>14} {:>13}",
            "Content Category", "N", "Accuracy (%)", "Recall (%)", "Precision (%)", "F1 Score (%)"
        )
        .ok();
        for (name, n, c) in self.lines() {
            writeln!(out, "{:<20} {:>6} {:>13} {:>11} {:>14} {:>13}", name, n, c[0], c[1], c[2], c[3]).ok();
        }
        out
    }

    pub fn render_csv(&self) -> String {
        let mut out = String::from("category,n,accuracy,recall,precision,f1\n");
        for (name, n, c) in self.lines() {
            writeln!(out, "{name},{n},{},{},{},{}", c[0], c[1], c[2], c[3]).ok();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(tp: usize, fp: usize, tn: usize, fn_: usize) -> (Vec<Label>, Vec<Label>) {
        let mut p = Vec::new();
        let mut t = Vec::new();
        for (n, pred, truth) in [
            (tp, Label::Spliced, Label::Spliced),
            (fp, Label::Spliced, Label::Authentic),
            (tn, Label::Authentic, Label::Authentic),
            (fn_, Label::Authentic, Label::Spliced),
        ] {
            p.extend(std::iter::repeat_n(pred, n));
            t.extend(std::iter::repeat_n(truth, n));
        }
        (p, t)
    }

    #[test]
    fn single_category_ninety() {
        let (p, t) = counts(9, 1, 9, 1);
        let cats = vec![Category::SmoothSmooth; p.len()];
        let r = category_report(&p, &t, &cats).unwrap();
        let row = r.rows.iter().find(|r| r.category == Category::SmoothSmooth).unwrap();
        assert_eq!(row.metrics.unwrap().as_array(), [90.0; 4]);
        assert_eq!(r.average.unwrap().as_array(), [90.0; 4]);
        assert_eq!(r.rows.iter().filter(|r| r.metrics.is_none()).count(), 4);
        assert!(r.render_text().contains("n/a"));
    }

    #[test]
    fn average_is_unweighted() {
        // 49/50 correct and 9/10 correct: 98.0 and 90.0 regardless of size.
        let (mut p, mut t) = counts(25, 1, 24, 0);
        let mut cats = vec![Category::UniformTexture; p.len()];
        let (p2, t2) = counts(5, 1, 4, 0);
        cats.extend(vec![Category::TextureTexture; p2.len()]);
        p.extend(p2);
        t.extend(t2);
        let r = category_report(&p, &t, &cats).unwrap();
        assert_eq!(r.average.unwrap().accuracy, 94.0);
        assert_eq!(r.total.metrics.unwrap().accuracy, 96.7);
    }

    #[test]
    fn published_table_average() {
        let rows = [
            [98.5, 97.0, 99.2, 98.1],
            [97.8, 96.5, 98.9, 97.7],
            [89.4, 90.2, 88.7, 89.4],
            [99.1, 98.6, 99.3, 99.0],
            [95.0, 94.5, 95.5, 95.0],
        ]
        .map(PercentRow::from_array);
        assert_eq!(average_rows(&rows).unwrap().as_array(), [96.0, 95.4, 96.3, 95.8]);
    }

    #[test]
    fn uncategorized_only_in_total() {
        let (p, t) = counts(3, 0, 3, 0);
        let mut cats = vec![Category::Uncategorized; p.len()];
        cats[0] = Category::UniformSmooth;
        let r = category_report(&p, &t, &cats).unwrap();
        assert_eq!(r.rows.iter().map(|r| r.n).sum::<usize>(), 1);
        assert_eq!(r.total.n, 6);
        let csv = r.render_csv();
        assert_eq!(csv.lines().count(), 8);
        assert!(csv.lines().last().unwrap().starts_with("Total,6,"));
    }

    #[test]
    fn rejects_mismatched_lengths() {
        assert!(category_report(&[Label::Spliced], &[], &[]).is_err());
        assert!(category_report(&[], &[], &[]).is_err());
    }
}
