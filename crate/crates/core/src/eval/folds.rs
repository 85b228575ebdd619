use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::Label;
use crate::error::{Error, Result};

/// Assignment of every sample to one of `k` folds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldPlan {
    pub k: usize,
    pub assignments: Vec<usize>,
    pub seed: u64,
}

impl FoldPlan {
    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &f in &self.assignments {
            sizes[f] += 1;
        }
        sizes
    }

    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignments.len()).filter(|&i| self.assignments[i] == fold).collect()
    }

    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignments.len()).filter(|&i| self.assignments[i] != fold).collect()
    }
}

/// Stratified assignment: indices are grouped by label (stable), each group
/// is shuffled with a seeded generator, and the concatenation is dealt to
/// folds round-robin. Fold sizes differ by at most one, as do the per-class
/// counts of any two folds.
pub fn make_folds(labels: &[Label], k: usize, seed: u64) -> Result<FoldPlan> {
    if k < 2 {
        return Err(Error::invalid(format!("k = {k} must be at least 2")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignments = vec![0; labels.len()];
    let mut next = 0;
    for class in [Label::Authentic, Label::Spliced] {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        if members.len() < k {
            return Err(Error::invalid(format!(
                "class {class} has {} samples, fewer than k = {k}",
                members.len()
            )));
        }
        members.shuffle(&mut rng);
        for i in members {
            assignments[i] = next % k;
            next += 1;
        }
    }
    Ok(FoldPlan { k, assignments, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn balanced(n_each: usize) -> Vec<Label> {
        let mut v = vec![Label::Authentic; n_each];
        v.extend(vec![Label::Spliced; n_each]);
        v
    }

    #[test]
    fn ten_samples_three_folds() {
        let plan = make_folds(&balanced(5), 3, 1).unwrap();
        let mut sizes = plan.fold_sizes();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(sizes, vec![4, 3, 3]);
    }

    #[test]
    fn one_of_each_class_per_fold() {
        let labels = balanced(5);
        let plan = make_folds(&labels, 5, 42).unwrap();
        for f in 0..5 {
            let test = plan.test_indices(f);
            assert_eq!(test.len(), 2);
            assert_eq!(test.iter().filter(|&&i| labels[i] == Label::Spliced).count(), 1);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let labels = balanced(20);
        assert_eq!(make_folds(&labels, 4, 9).unwrap(), make_folds(&labels, 4, 9).unwrap());
        assert_ne!(make_folds(&labels, 4, 9).unwrap(), make_folds(&labels, 4, 10).unwrap());
    }

    #[test]
    fn errors() {
        assert!(make_folds(&balanced(5), 1, 0).is_err());
        let mut labels = balanced(5);
        labels.truncate(7); // only two spliced
        assert!(matches!(make_folds(&labels, 3, 0), Err(Error::InvalidInput(_))));
    }

    proptest! {
        #[test]
        fn partition_and_balance(n_a in 5usize..60, n_s in 5usize..60, k in 2usize..6, seed: u64) {
            let mut labels = vec![Label::Authentic; n_a];
            labels.extend(vec![Label::Spliced; n_s]);
            let plan = make_folds(&labels, k, seed).unwrap();
            let sizes = plan.fold_sizes();
            prop_assert_eq!(sizes.iter().sum::<usize>(), labels.len());
            prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
            for f in 0..k {
                let test = plan.test_indices(f);
                let train = plan.train_indices(f);
                prop_assert!(test.iter().all(|i| !train.contains(i)));
                prop_assert_eq!(test.len() + train.len(), labels.len());
                let spliced = test.iter().filter(|&&i| labels[i] == Label::Spliced).count() as f64;
                let expected = n_s as f64 / k as f64;
                prop_assert!((spliced - expected).abs() < 1.0 + 1e-9);
            }
        }
    }
}
