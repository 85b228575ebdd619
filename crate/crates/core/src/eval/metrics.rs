use serde::Serialize;

use crate::dataset::Label;
use crate::error::{Error, Result};

/// Binary confusion counts with spliced as the positive class.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

impl ConfusionCounts {
    pub fn from_labels(predicted: &[Label], truth: &[Label]) -> Result<Self> {
        if predicted.len() != truth.len() {
            return Err(Error::invalid(format!(
                "{} predictions for {} labels",
                predicted.len(),
                truth.len()
            )));
        }
        let mut c = Self::default();
        for (p, t) in predicted.iter().zip(truth) {
            c.add(*p, *t);
        }
        Ok(c)
    }

    pub fn add(&mut self, predicted: Label, truth: Label) {
        match (predicted, truth) {
            (Label::Spliced, Label::Spliced) => self.tp += 1,
            (Label::Spliced, Label::Authentic) => self.fp += 1,
            (Label::Authentic, Label::Authentic) => self.tn += 1,
            (Label::Authentic, Label::Spliced) => self.fn_ += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }
}

impl std::ops::AddAssign for ConfusionCounts {
    fn add_assign(&mut self, o: Self) {
        self.tp += o.tp;
        self.fp += o.fp;
        self.tn += o.tn;
        self.fn_ += o.fn_;
    }
}

/// Set when a ratio had a zero denominator and was reported as 0.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MetricFlags {
    pub recall_undefined: bool,
    pub precision_undefined: bool,
    pub f1_undefined: bool,
}

/// Fractions in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Metrics {
    pub accuracy: f64,
    pub recall: f64,
    pub precision: f64,
    pub f1: f64,
    pub flags: MetricFlags,
}

impl Metrics {
    pub fn as_array(&self) -> [f64; 4] {
        [self.accuracy, self.recall, self.precision, self.f1]
    }
}

pub fn compute_metrics(c: &ConfusionCounts) -> Result<Metrics> {
    let total = c.total();
    if total == 0 {
        return Err(Error::invalid("no samples to score"));
    }
    let ratio = |num: usize, den: usize| if den == 0 { (0.0, true) } else { (num as f64 / den as f64, false) };
    let accuracy = (c.tp + c.tn) as f64 / total as f64;
    let (recall, recall_undefined) = ratio(c.tp, c.tp + c.fn_);
    let (precision, precision_undefined) = ratio(c.tp, c.tp + c.fp);
    let (f1, f1_undefined) = if precision + recall > 0.0 {
        (2.0 * precision * recall / (precision + recall), false)
    } else {
        (0.0, true)
    };
    Ok(Metrics {
        accuracy,
        recall,
        precision,
        f1,
        flags: MetricFlags { recall_undefined, precision_undefined, f1_undefined },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn symmetric_counts() {
        let m = compute_metrics(&ConfusionCounts { tp: 9, fp: 1, tn: 9, fn_: 1 }).unwrap();
        for v in m.as_array() {
            assert!((v - 0.9).abs() < 1e-12);
        }
        assert_eq!(m.flags, MetricFlags::default());
    }

    #[test]
    fn no_positives() {
        let m = compute_metrics(&ConfusionCounts { tp: 0, fp: 0, tn: 10, fn_: 0 }).unwrap();
        assert_eq!((m.accuracy, m.recall, m.precision, m.f1), (1.0, 0.0, 0.0, 0.0));
        assert!(m.flags.recall_undefined && m.flags.precision_undefined && m.flags.f1_undefined);
    }

    #[test]
    fn f1_from_precision_and_recall() {
        // precision 6/10, recall 6/15
        let m = compute_metrics(&ConfusionCounts { tp: 6, fp: 4, tn: 0, fn_: 9 }).unwrap();
        assert!((m.precision - 0.6).abs() < 1e-15);
        assert!((m.recall - 0.4).abs() < 1e-15);
        assert!((m.f1 - 0.48).abs() < 1e-12);
    }

    #[test]
    fn empty_is_error() {
        assert!(compute_metrics(&ConfusionCounts::default()).is_err());
    }

    #[test]
    fn counts_from_labels() {
        use Label::*;
        let c = ConfusionCounts::from_labels(&[Spliced, Spliced, Authentic, Authentic], &[Spliced, Authentic, Authentic, Spliced])
            .unwrap();
        assert_eq!(c, ConfusionCounts { tp: 1, fp: 1, tn: 1, fn_: 1 });
        assert!(ConfusionCounts::from_labels(&[Spliced], &[]).is_err());
    }

    proptest! {
        #[test]
        fn harmonic_mean_identity(tp in 1usize..500, fp in 0usize..500, tn in 0usize..500, fn_ in 0usize..500) {
            let m = compute_metrics(&ConfusionCounts { tp, fp, tn, fn_ }).unwrap();
            let h = 2.0 / (1.0 / m.precision + 1.0 / m.recall);
            prop_assert!((m.f1 - h).abs() < 1e-12);
        }
    }
}
