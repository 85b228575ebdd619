//! Synthetic benchmark: 200 authentic and 200 spliced 128×128 noise images,
//! 5-fold RBF cross-validation over the default grid.
//!
//! cargo run --release -p splicestat-core --example synthetic_pilot [seed]

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use splicestat_core::eval::{cross_validate, CvConfig, KernelGrid};
use splicestat_core::svm::KernelKind;
use splicestat_core::synth::NoiseImageConfig;
use splicestat_core::{extract_features, FeatureConfig, Label};

fn main() {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let images = NoiseImageConfig::default().dataset(&mut rng, 200);
    let cfg = FeatureConfig::standard();
    let features: Vec<Vec<f64>> = images
        .par_iter()
        .map(|(img, _)| extract_features(img, &cfg).expect("extraction").features.values)
        .collect();
    let labels: Vec<Label> = images.iter().map(|(_, l)| *l).collect();
    let extracted = start.elapsed();

    let cv = cross_validate(
        &features,
        &labels,
        &KernelGrid::default_for(KernelKind::Rbf),
        &CvConfig { k: 5, seed, ..Default::default() },
    )
    .expect("cross-validation");
    for g in &cv.grid {
        match (&g.summary, &g.failure) {
            (Some(s), _) => println!("{:<40} acc {:.4} ± {:.4}", g.point.describe(), s.accuracy.mean, s.accuracy.std),
            (None, Some(f)) => println!("{:<40} failed: {f}", g.point.describe()),
            _ => {}
        }
    }
    let best = cv.best().expect("a grid point succeeded");
    println!(
        "best {} mean accuracy {:.4}; extraction {:.1?}, total {:.1?}",
        best.point.describe(),
        best.summary.unwrap().accuracy.mean,
        extracted,
        start.elapsed()
    );
}
