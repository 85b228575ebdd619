use super::GrayImage;
use crate::error::{Error, Result};

/// Bilinear resampling with aligned corners: output pixel `i` samples the
/// source at `i * (in - 1) / (out - 1)`, so the four corner pixels are kept.
pub fn resize_bilinear(img: &GrayImage, out_w: usize, out_h: usize) -> Result<GrayImage> {
    if out_w < 2 || out_h < 2 {
        return Err(Error::invalid(format!("resize target {out_w}x{out_h} must be at least 2x2")));
    }
    let xs = sample_positions(img.width(), out_w);
    let ys = sample_positions(img.height(), out_h);

    let mut data = Vec::with_capacity(out_w * out_h);
    for &(y0, y1, ty) in &ys {
        let (r0, r1) = (img.row(y0), img.row(y1));
        for &(x0, x1, tx) in &xs {
            let top = r0[x0] + (r0[x1] - r0[x0]) * tx;
            let bottom = r1[x0] + (r1[x1] - r1[x0]) * tx;
            data.push((top + (bottom - top) * ty).clamp(0.0, 255.0));
        }
    }
    GrayImage::new(out_w, out_h, data)
}

fn sample_positions(input: usize, output: usize) -> Vec<(usize, usize, f64)> {
    let scale = if input > 1 { (input - 1) as f64 / (output - 1) as f64 } else { 0.0 };
    (0..output)
        .map(|i| {
            let src = i as f64 * scale;
            let i0 = (src.floor() as usize).min(input - 1);
            let i1 = (i0 + 1).min(input - 1);
            (i0, i1, src - i0 as f64)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn two_by_two_to_three_by_three() {
        let img = GrayImage::new(2, 2, vec![0.0, 2.0, 2.0, 4.0]).unwrap();
        let out = resize_bilinear(&img, 3, 3).unwrap();
        assert_eq!(out.data(), &[0.0, 1.0, 2.0, 1.0, 2.0, 3.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn identity_size() {
        let img = GrayImage::from_fn(7, 5, |x, y| (x * 13 + y * 29) as f64 % 255.0).unwrap();
        assert_eq!(resize_bilinear(&img, 7, 5).unwrap(), img);
    }

    #[test]
    fn constant_stays_constant() {
        let img = GrayImage::filled(5, 9, 42.5).unwrap();
        let out = resize_bilinear(&img, 512, 17).unwrap();
        assert!(out.data().iter().all(|&v| (v - 42.5).abs() < 1e-12));
    }

    #[test]
    fn rejects_tiny_target() {
        let img = GrayImage::filled(4, 4, 1.0).unwrap();
        assert!(matches!(resize_bilinear(&img, 1, 4), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn single_pixel_source() {
        let img = GrayImage::filled(1, 1, 3.0).unwrap();
        let out = resize_bilinear(&img, 2, 2).unwrap();
        assert_eq!(out.data(), &[3.0; 4]);
    }

    proptest! {
        #[test]
        fn output_within_input_range(
            w in 1usize..8, h in 1usize..8, ow in 2usize..20, oh in 2usize..20,
            seed in proptest::collection::vec(0.0f64..255.0, 64),
        ) {
            let img = GrayImage::new(w, h, seed[..w * h].to_vec()).unwrap();
            let lo = img.data().iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = img.data().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let out = resize_bilinear(&img, ow, oh).unwrap();
            prop_assert_eq!(out.data().len(), ow * oh);
            for &v in out.data() {
                prop_assert!(v >= lo - 1e-9 && v <= hi + 1e-9);
            }
        }
    }
}
