use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use splicestat_core::stats::{fit_ggd, ggd_log_likelihood, GgdParams};
use splicestat_core::synth::sample_ggd;
use statrs::function::gamma::ln_gamma;

/// Maximises the profile log-likelihood `ℓ(β, α̂(β))` directly: a grid scan
/// followed by golden-section refinement. Shares nothing with the solver.
fn profile_mle(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let alpha_hat = |b: f64| (b / n * xs.iter().map(|x| x.abs().powf(b)).sum::<f64>()).powf(1.0 / b);
    let profile = |b: f64| n * (b.ln() - (2.0 * alpha_hat(b)).ln() - ln_gamma(1.0 / b)) - n / b;
    let grid: Vec<f64> = (0..=400).map(|i| 0.05 + i as f64 * (4.95 / 400.0)).collect();
    let i = (0..grid.len()).max_by(|&a, &b| profile(grid[a]).total_cmp(&profile(grid[b]))).unwrap();
    let (mut lo, mut hi) = (grid[i.saturating_sub(1)], grid[(i + 1).min(grid.len() - 1)]);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    while hi - lo > 1e-10 {
        let (m1, m2) = (hi - g * (hi - lo), lo + g * (hi - lo));
        if profile(m1) < profile(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    let b = 0.5 * (lo + hi);
    (alpha_hat(b), b)
}

#[test]
fn matches_profile_likelihood_oracle() {
    for beta in [0.8, 1.5, 2.0] {
        for seed in 0..5 {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
            let xs = sample_ggd(&mut rng, GgdParams::new(1.0, beta).unwrap(), 50_000);
            let start = Instant::now();
            let fit = fit_ggd(&xs).unwrap();
            assert!(start.elapsed().as_secs_f64() < 5.0);
            let (alpha, b) = profile_mle(&xs);
            assert!((fit.params.beta - b).abs() < 1e-6, "β={beta} seed={seed}: {} vs {b}", fit.params.beta);
            assert!((fit.params.alpha - alpha).abs() < 1e-6, "β={beta} seed={seed}: {} vs {alpha}", fit.params.alpha);
            assert!(fit.clamped.is_none());
            // Loose sanity band; the sampling spread of α̂ at β = 0.8 is about 0.017.
            assert!((fit.params.beta - beta).abs() < 0.1 && (fit.params.alpha - 1.0).abs() < 0.1);
        }
    }
}

#[test]
fn normal_samples_fit_as_beta_two() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let xs: Vec<f64> = (0..50_000).map(|_| StandardNormal.sample(&mut rng)).collect();
    let fit = fit_ggd(&xs).unwrap();
    let s2 = std::f64::consts::SQRT_2;
    assert!((1.9..=2.1).contains(&fit.params.beta), "{:?}", fit.params);
    assert!((0.97 * s2..=1.03 * s2).contains(&fit.params.alpha), "{:?}", fit.params);
}

#[test]
fn fit_is_a_local_likelihood_maximum() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let xs = sample_ggd(&mut rng, GgdParams::new(2.5, 1.2).unwrap(), 20_000);
    let fit = fit_ggd(&xs).unwrap();
    let ll = ggd_log_likelihood(&xs, &fit.params).unwrap();
    for (da, db) in [(0.0, 0.01), (0.0, -0.01), (0.01, 0.0), (-0.01, 0.0)] {
        let p = GgdParams::new(fit.params.alpha * (1.0 + da), fit.params.beta + db).unwrap();
        assert!(ggd_log_likelihood(&xs, &p).unwrap() < ll);
    }
}

#[test]
fn scale_equivariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let xs = sample_ggd(&mut rng, GgdParams::new(1.0, 0.9).unwrap(), 10_000);
    let base = fit_ggd(&xs).unwrap();
    for c in [1e-3, 0.5, 7.0, 250.0] {
        let scaled: Vec<f64> = xs.iter().map(|x| c * x).collect();
        let fit = fit_ggd(&scaled).unwrap();
        assert!((fit.params.beta - base.params.beta).abs() < 1e-6);
        assert!((fit.params.alpha / c - base.params.alpha).abs() < 1e-6 * base.params.alpha);
    }
}

#[test]
fn error_shrinks_with_sample_size() {
    let beta = 1.5;
    let mean_err = |n: usize| {
        (0..8)
            .map(|seed| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let xs = sample_ggd(&mut rng, GgdParams::new(1.0, beta).unwrap(), n);
                (fit_ggd(&xs).unwrap().params.beta - beta).abs()
            })
            .sum::<f64>()
            / 8.0
    };
    let errs: Vec<f64> = [500, 5_000, 50_000].into_iter().map(mean_err).collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
}
