#[path = "support/qp_oracle.rs"]
mod qp_oracle;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use splicestat_core::svm::{
    kkt_violation, predict, solve, train_smo, train_smo_with_report, Gram, KernelSpec, TrainParams,
};
use splicestat_core::Label;

fn random_problem(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    loop {
        let x: Vec<Vec<f64>> = (0..n).map(|_| (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect()).collect();
        let y: Vec<f64> = (0..n).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
        if y.contains(&1.0) && y.contains(&-1.0) {
            return (x, y);
        }
    }
}

fn margins(gram: &Gram, y: &[f64], alphas: &[f64], bias: f64) -> Vec<f64> {
    (0..y.len())
        .map(|i| y[i] * ((0..y.len()).map(|j| alphas[j] * y[j] * gram.get(i, j)).sum::<f64>() + bias))
        .collect()
}

#[test]
fn smo_matches_exhaustive_dual() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..20 {
        // Half RBF in 2-D, half linear in 10-D: both keep the 8×8 Gram matrix non-singular.
        let (kernel, dim) = if case % 2 == 0 { (KernelSpec::Rbf { gamma: 0.5 }, 2) } else { (KernelSpec::Linear, 10) };
        let (x, y) = random_problem(&mut rng, 8, dim);
        let c = [0.5, 1.0, 10.0][case % 3];
        let gram = Gram::new(&kernel, &x);
        let k: Vec<Vec<f64>> = (0..8).map(|i| (0..8).map(|j| gram.get(i, j)).collect()).collect();

        let oracle = qp_oracle::solve_dual(&k, &y, c);
        let smo = solve(&gram, &y, c, 1e-3, 10_000, case as u64).unwrap();
        assert!(
            (smo.objective - oracle.objective).abs() < 1e-3,
            "case {case}: smo {} vs oracle {}",
            smo.objective,
            oracle.objective
        );
        let viol = kkt_violation(&smo.alphas, &margins(&gram, &y, &smo.alphas, smo.bias), c);
        assert!(viol <= 1e-3, "case {case}: KKT violation {viol}");
        let balance: f64 = smo.alphas.iter().zip(&y).map(|(a, y)| a * y).sum();
        assert!(balance.abs() < 1e-9);
        assert!(smo.alphas.iter().all(|&a| (0.0..=c).contains(&a)));
    }
}

#[test]
fn two_point_closed_form() {
    let x = vec![vec![1.0], vec![-1.0]];
    let labels = vec![Label::Spliced, Label::Authentic];
    let params = TrainParams { standardize: false, ..TrainParams::new(KernelSpec::Linear, 10.0) };
    let (model, sol) = train_smo_with_report(&x, &labels, &params).unwrap();
    assert!(model.bias.abs() < 1e-6);
    for a in &sol.alphas {
        assert!((a - 0.5).abs() < 1e-6);
    }
    for t in [-3.0, -0.25, 0.0, 0.7, 2.0] {
        assert!((model.decision_value(&[t]).unwrap() - t).abs() < 1e-9);
    }
}

fn blobs(seed: u64, n: usize) -> (Vec<Vec<f64>>, Vec<Label>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = Vec::new();
    let mut y = Vec::new();
    for i in 0..n {
        let label = if i % 2 == 0 { Label::Spliced } else { Label::Authentic };
        let centre = 2.0 * label.sign();
        x.push(vec![centre + rng.random_range(-1.0..1.0), centre + rng.random_range(-1.0..1.0)]);
        y.push(label);
    }
    (x, y)
}

#[test]
fn separable_training_set_is_fit_exactly() {
    let (x, y) = blobs(7, 60);
    for kernel in [KernelSpec::Linear, KernelSpec::Rbf { gamma: 0.5 }] {
        let params = TrainParams::new(kernel, 100.0);
        let (model, sol) = train_smo_with_report(&x, &y, &params).unwrap();
        assert!(sol.max_kkt_violation <= 1e-3);
        let coef_sum: f64 = model.dual_coefs.iter().sum();
        assert!(coef_sum.abs() < 1e-6, "Σ αᵢyᵢ = {coef_sum}");
        for (row, label) in x.iter().zip(&y) {
            assert_eq!(predict(&model, row).unwrap().label, *label);
        }
    }
}

#[test]
fn retraining_is_bit_identical() {
    let (mut x, y) = blobs(9, 80);
    // Overlap the classes so the solver has real work to do.
    for row in x.iter_mut().step_by(5) {
        row[0] = -row[0];
    }
    let params = TrainParams { seed: 42, ..TrainParams::new(KernelSpec::Rbf { gamma: 0.3 }, 1.0) };
    let a = train_smo(&x, &y, &params).unwrap();
    let b = train_smo(&x, &y, &params).unwrap();
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
}
