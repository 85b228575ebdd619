use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use splicestat_core::transforms::{block_dct, dwt_haar, DctPlan};
use splicestat_core::GrayImage;

fn random_image(rng: &mut ChaCha8Rng, w: usize, h: usize) -> GrayImage {
    GrayImage::from_fn(w, h, |_, _| rng.random_range(0.0..=255.0)).unwrap()
}

#[test]
fn block_dct_is_orthonormal_on_random_images() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let plan = DctPlan::new(8).unwrap();
    for _ in 0..100 {
        let img = random_image(&mut rng, 64, 64);
        let grid = block_dct(&img, 8).unwrap();
        for (b, spec) in grid.blocks.iter().enumerate() {
            let (bx, by) = (b % grid.blocks_x, b / grid.blocks_x);
            let pixels: Vec<f64> =
                (0..64).map(|i| img.get(bx * 8 + i % 8, by * 8 + i / 8)).collect();
            let e_pix: f64 = pixels.iter().map(|v| v * v).sum();
            let e_coef: f64 = spec.coeffs.iter().map(|v| v * v).sum();
            assert!((e_pix - e_coef).abs() <= 1e-9 * e_pix.max(1.0));
            let back = plan.inverse(&spec.coeffs);
            for (p, q) in pixels.iter().zip(&back) {
                assert!((p - q).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn haar_three_levels_conserve_energy_and_reconstruct() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let img = random_image(&mut rng, 64, 64);
        let pyr = dwt_haar(&img, 3).unwrap();
        let e_img: f64 = img.data().iter().map(|v| v * v).sum();
        assert!((pyr.energy() - e_img).abs() <= 1e-9 * e_img);
        for (p, q) in img.data().iter().zip(pyr.reconstruct()) {
            assert!((p - q).abs() < 1e-9);
        }
    }
}
