use super::GrayImage;
use crate::error::{Error, Result};

/// Median over a `(2r+1)²` window with edge replication at the borders.
pub fn median_filter(img: &GrayImage, radius: usize) -> Result<GrayImage> {
    if radius == 0 {
        return Err(Error::invalid("median radius must be at least 1"));
    }
    let side = 2 * radius + 1;
    if img.width() < side || img.height() < side {
        return Err(Error::invalid(format!(
            "{}x{} image is smaller than the {side}x{side} median window",
            img.width(),
            img.height()
        )));
    }
    let r = radius as isize;
    let mut window = Vec::with_capacity(side * side);
    let mut data = Vec::with_capacity(img.data().len());
    for y in 0..img.height() as isize {
        for x in 0..img.width() as isize {
            window.clear();
            for dy in -r..=r {
                for dx in -r..=r {
                    window.push(img.get_clamped(x + dx, y + dy));
                }
            }
            let mid = window.len() / 2;
            let (_, m, _) = window.select_nth_unstable_by(mid, f64::total_cmp);
            data.push(*m);
        }
    }
    GrayImage::new(img.width(), img.height(), data)
}

/// Normalized Gaussian taps over `[-ceil(3σ), ceil(3σ)]`.
pub fn gaussian_kernel(sigma: f64) -> Result<Vec<f64>> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::invalid(format!("gaussian sigma {sigma} must be positive")));
    }
    let half = (3.0 * sigma).ceil() as isize;
    let mut taps: Vec<f64> = (-half..=half)
        .map(|i| (-(i * i) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|t| *t /= sum);
    Ok(taps)
}

/// Separable Gaussian smoothing with edge replication.
pub fn gaussian_filter(img: &GrayImage, sigma: f64) -> Result<GrayImage> {
    let taps = gaussian_kernel(sigma)?;
    let half = (taps.len() / 2) as isize;
    let (w, h) = (img.width(), img.height());

    let mut horiz = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            horiz[y * w + x] = taps
                .iter()
                .enumerate()
                .map(|(k, t)| t * img.get_clamped(x as isize + k as isize - half, y as isize))
                .sum();
        }
    }
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            out[y * w + x] = taps
                .iter()
                .enumerate()
                .map(|(k, t)| {
                    let yy = (y as isize + k as isize - half).clamp(0, h as isize - 1) as usize;
                    t * horiz[yy * w + x]
                })
                .sum::<f64>()
                .clamp(0.0, 255.0);
        }
    }
    GrayImage::new(w, h, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_removes_spike() {
        let mut data = vec![0.0; 25];
        data[12] = 255.0;
        let img = GrayImage::new(5, 5, data).unwrap();
        let out = median_filter(&img, 1).unwrap();
        assert!(out.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn median_of_one_to_nine() {
        let img = GrayImage::new(3, 3, (1..=9).map(f64::from).collect()).unwrap();
        assert_eq!(median_filter(&img, 1).unwrap().get(1, 1), 5.0);
    }

    #[test]
    fn median_constant_and_errors() {
        let img = GrayImage::filled(6, 6, 17.0).unwrap();
        assert_eq!(median_filter(&img, 2).unwrap(), img);
        assert!(matches!(median_filter(&img, 3), Err(Error::InvalidInput(_))));
        assert!(median_filter(&img, 0).is_err());
    }

    #[test]
    fn gaussian_constant_image() {
        let img = GrayImage::filled(9, 4, 200.0).unwrap();
        let out = gaussian_filter(&img, 1.7).unwrap();
        assert!(out.data().iter().all(|&v| (v - 200.0).abs() < 1e-9));
        let twice = gaussian_filter(&out, 1.7).unwrap();
        assert!(twice.data().iter().all(|&v| (v - 200.0).abs() < 1e-9));
    }

    #[test]
    fn gaussian_impulse_reproduces_kernel() {
        let sigma = 1.0;
        let taps = gaussian_kernel(sigma).unwrap();
        assert_eq!(taps.len(), 7);
        let mut data = vec![0.0; 15 * 15];
        data[7 * 15 + 7] = 255.0;
        let img = GrayImage::new(15, 15, data).unwrap();
        let out = gaussian_filter(&img, sigma).unwrap();
        // Centre row of the response is the kernel scaled by the centre tap.
        for (k, t) in taps.iter().enumerate() {
            let v = out.get(4 + k, 7);
            assert!((v - 255.0 * t * taps[3]).abs() < 1e-9);
        }
        // Mass of an interior impulse is preserved.
        let total: f64 = out.data().iter().sum();
        assert!((total - 255.0).abs() < 1e-9);
    }

    #[test]
    fn gaussian_small_sigma_is_near_identity() {
        let img = GrayImage::from_fn(8, 8, |x, y| ((x * 31 + y * 17) % 256) as f64).unwrap();
        let out = gaussian_filter(&img, 0.2).unwrap();
        for (a, b) in img.data().iter().zip(out.data()) {
            // Off-centre taps at σ = 0.2 weigh exp(-12.5) ≈ 3.7e-6.
            assert!((a - b).abs() < 255.0 * 1e-5);
        }
    }

    #[test]
    fn gaussian_rejects_nonpositive_sigma() {
        let img = GrayImage::filled(4, 4, 1.0).unwrap();
        assert!(matches!(gaussian_filter(&img, 0.0), Err(Error::InvalidInput(_))));
        assert!(gaussian_filter(&img, -1.0).is_err());
    }
}
