//! Synthetic data: GGD samples and authentic/spliced test images.

use rand::Rng;
use rand_distr::{Distribution, Gamma, Normal};

use crate::dataset::Label;
use crate::pipeline::{gaussian_filter, GrayImage};
use crate::stats::GgdParams;

/// Draws from `GGD(α, β)` as `±α·G^(1/β)` with `G ~ Gamma(1/β, 1)`.
pub fn sample_ggd<R: Rng + ?Sized>(rng: &mut R, params: GgdParams, n: usize) -> Vec<f64> {
    let gamma = Gamma::new(1.0 / params.beta, 1.0).expect("valid shape");
    (0..n)
        .map(|_| {
            let mag = params.alpha * gamma.sample(rng).powf(1.0 / params.beta);
            if rng.random::<bool>() {
                mag
            } else {
                -mag
            }
        })
        .collect()
}

/// Parameters of the blurred-noise image model.
#[derive(Clone, Copy, Debug)]
pub struct NoiseImageConfig {
    pub size: usize,
    pub patch: usize,
    pub mean: f64,
    pub noise_std: f64,
    /// Range the blur σ is drawn from, log-uniformly.
    pub blur_range: (f64, f64),
    /// Minimum ratio between host and patch blur σ in a spliced image.
    pub min_blur_ratio: f64,
}

impl Default for NoiseImageConfig {
    fn default() -> Self {
        Self {
            size: 128,
            patch: 48,
            mean: 128.0,
            noise_std: 40.0,
            blur_range: (0.5, 3.0),
            min_blur_ratio: 1.5,
        }
    }
}

impl NoiseImageConfig {
    fn draw_blur<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let (lo, hi) = self.blur_range;
        (lo.ln() + rng.random::<f64>() * (hi.ln() - lo.ln())).exp()
    }

    /// Gaussian-filtered white noise with blur σ.
    pub fn noise_image<R: Rng + ?Sized>(&self, rng: &mut R, blur: f64) -> GrayImage {
        let normal = Normal::new(self.mean, self.noise_std).expect("valid normal");
        let n = self.size;
        let raw = GrayImage::from_fn(n, n, |_, _| normal.sample(rng)).expect("finite noise");
        gaussian_filter(&raw, blur).expect("positive blur")
    }

    pub fn authentic<R: Rng + ?Sized>(&self, rng: &mut R) -> GrayImage {
        let blur = self.draw_blur(rng);
        self.noise_image(rng, blur)
    }

    /// Host image with a square patch pasted from an independently generated
    /// image whose blur differs by at least `min_blur_ratio`.
    pub fn spliced<R: Rng + ?Sized>(&self, rng: &mut R) -> GrayImage {
        let host_blur = self.draw_blur(rng);
        let donor_blur = loop {
            let b = self.draw_blur(rng);
            let ratio = (b / host_blur).max(host_blur / b);
            if ratio >= self.min_blur_ratio {
                break b;
            }
        };
        let host = self.noise_image(rng, host_blur);
        let donor = self.noise_image(rng, donor_blur);
        let span = self.size - self.patch;
        let (sx, sy) = (rng.random_range(0..=span), rng.random_range(0..=span));
        let (dx, dy) = (rng.random_range(0..=span), rng.random_range(0..=span));
        let mut data = host.into_data();
        for y in 0..self.patch {
            for x in 0..self.patch {
                data[(dy + y) * self.size + dx + x] = donor.get(sx + x, sy + y);
            }
        }
        GrayImage::new(self.size, self.size, data).expect("pasted pixels stay in range")
    }

    /// `n_each` authentic images followed by `n_each` spliced ones.
    pub fn dataset<R: Rng + ?Sized>(&self, rng: &mut R, n_each: usize) -> Vec<(GrayImage, Label)> {
        let mut out = Vec::with_capacity(2 * n_each);
        for _ in 0..n_each {
            out.push((self.authentic(rng), Label::Authentic));
        }
        for _ in 0..n_each {
            out.push((self.spliced(rng), Label::Spliced));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ggd_sampler_moments() {
        // β = 2, α = √2 is the standard normal: E|x| = √(2/π), E x² = 1.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let xs = sample_ggd(&mut rng, GgdParams::new(2f64.sqrt(), 2.0).unwrap(), 200_000);
        let n = xs.len() as f64;
        let m1 = xs.iter().map(|x| x.abs()).sum::<f64>() / n;
        let m2 = xs.iter().map(|x| x * x).sum::<f64>() / n;
        assert!((m1 - (2.0 / std::f64::consts::PI).sqrt()).abs() < 0.01);
        assert!((m2 - 1.0).abs() < 0.01);
    }

    #[test]
    fn images_have_requested_shape() {
        let cfg = NoiseImageConfig { size: 32, patch: 12, ..Default::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let set = cfg.dataset(&mut rng, 2);
        assert_eq!(set.len(), 4);
        assert!(set.iter().all(|(img, _)| img.width() == 32 && img.height() == 32));
        assert_eq!(set[3].1, Label::Spliced);
    }
}
