//! Fixed inputs shared by the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use splicestat_core::stats::GgdParams;
use splicestat_core::synth::{sample_ggd, NoiseImageConfig};
use splicestat_core::{extract_features, FeatureConfig, GrayImage, Label};

pub fn noise_image(seed: u64) -> GrayImage {
    NoiseImageConfig::default().authentic(&mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn ggd_samples(n: usize, beta: f64) -> Vec<f64> {
    sample_ggd(&mut ChaCha8Rng::seed_from_u64(1), GgdParams::new(1.0, beta).expect("valid shape"), n)
}

/// Feature vectors and labels for `n_each` synthetic images per class.
pub fn feature_set(n_each: usize) -> (Vec<Vec<f64>>, Vec<Label>) {
    let cfg = FeatureConfig::standard();
    NoiseImageConfig::default()
        .dataset(&mut ChaCha8Rng::seed_from_u64(2), n_each)
        .into_iter()
        .map(|(img, label)| (extract_features(&img, &cfg).expect("synthetic image extracts").features.values, label))
        .unzip()
}
