use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use crate::error::{Error, Result};
use crate::pipeline::GrayImage;

/// Orthonormal Haar step on two samples: `((a+b)/√2, (a-b)/√2)`.
#[inline]
pub fn haar_pair(a: f64, b: f64) -> (f64, f64) {
    ((a + b) * FRAC_1_SQRT_2, (a - b) * FRAC_1_SQRT_2)
}

#[inline]
fn haar_pair_inverse(lo: f64, hi: f64) -> (f64, f64) {
    ((lo + hi) * FRAC_1_SQRT_2, (lo - hi) * FRAC_1_SQRT_2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// Low-pass along rows, high-pass along columns (responds to horizontal edges).
    Horizontal,
    /// High-pass along rows, low-pass along columns.
    Vertical,
    Diagonal,
}

impl Orientation {
    pub const ALL: [Orientation; 3] = [Orientation::Horizontal, Orientation::Vertical, Orientation::Diagonal];

    pub fn short_name(self) -> &'static str {
        match self {
            Orientation::Horizontal => "h",
            Orientation::Vertical => "v",
            Orientation::Diagonal => "d",
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Horizontal => "horizontal",
            Orientation::Vertical => "vertical",
            Orientation::Diagonal => "diagonal",
        })
    }
}

/// One detail subband, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SubbandCoefficients {
    /// Decomposition level, starting at 1 for the finest.
    pub level: usize,
    pub orientation: Orientation,
    pub width: usize,
    pub height: usize,
    pub values: Vec<f64>,
}

impl SubbandCoefficients {
    pub fn count(&self) -> usize {
        self.values.len()
    }
}

/// Result of a multi-level decomposition: `3L` detail subbands ordered by
/// level then orientation, plus the coarsest approximation.
#[derive(Clone, Debug)]
pub struct HaarPyramid {
    pub levels: usize,
    pub details: Vec<SubbandCoefficients>,
    pub approximation: Vec<f64>,
    pub approx_width: usize,
    pub approx_height: usize,
    /// Dimensions after edge-replication padding to a multiple of `2^L`.
    pub padded_width: usize,
    pub padded_height: usize,
}

impl HaarPyramid {
    pub fn subband(&self, level: usize, orientation: Orientation) -> Option<&SubbandCoefficients> {
        self.details.iter().find(|s| s.level == level && s.orientation == orientation)
    }

    /// Sum of squares over every subband and the approximation.
    pub fn energy(&self) -> f64 {
        let sq = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>();
        sq(&self.approximation) + self.details.iter().map(|s| sq(&s.values)).sum::<f64>()
    }

    /// Inverts the decomposition, returning the padded image row-major.
    pub fn reconstruct(&self) -> Vec<f64> {
        let mut approx = self.approximation.clone();
        let (mut w, mut h) = (self.approx_width, self.approx_height);
        for level in (1..=self.levels).rev() {
            let band = |o| &self.subband(level, o).expect("complete pyramid").values;
            approx = synthesize(
                &approx,
                band(Orientation::Horizontal),
                band(Orientation::Vertical),
                band(Orientation::Diagonal),
                w,
                h,
            );
            w *= 2;
            h *= 2;
        }
        approx
    }
}

/// `levels`-deep separable Haar analysis. Dimensions that are not multiples
/// of `2^levels` are first padded by replicating the last row/column.
pub fn dwt_haar(img: &GrayImage, levels: usize) -> Result<HaarPyramid> {
    if levels == 0 {
        return Err(Error::invalid("wavelet levels must be at least 1"));
    }
    let (w, h) = (img.width(), img.height());
    let step = 1usize
        .checked_shl(levels as u32)
        .filter(|s| *s <= w.min(h))
        .ok_or_else(|| {
            Error::invalid(format!("{levels} wavelet levels leave empty subbands for a {w}x{h} image"))
        })?;
    let pw = w.div_ceil(step) * step;
    let ph = h.div_ceil(step) * step;
    let mut approx = Vec::with_capacity(pw * ph);
    for y in 0..ph {
        for x in 0..pw {
            approx.push(img.get(x.min(w - 1), y.min(h - 1)));
        }
    }

    let (mut cw, mut ch) = (pw, ph);
    let mut details = Vec::with_capacity(3 * levels);
    for level in 1..=levels {
        let [ll, lh, hl, hh] = analyze(&approx, cw, ch);
        cw /= 2;
        ch /= 2;
        for (orientation, values) in [
            (Orientation::Horizontal, lh),
            (Orientation::Vertical, hl),
            (Orientation::Diagonal, hh),
        ] {
            details.push(SubbandCoefficients { level, orientation, width: cw, height: ch, values });
        }
        approx = ll;
    }
    Ok(HaarPyramid {
        levels,
        details,
        approximation: approx,
        approx_width: cw,
        approx_height: ch,
        padded_width: pw,
        padded_height: ph,
    })
}

/// One analysis level of a `w×h` plane (both even). Returns `[LL, LH, HL, HH]`
/// where the first letter is the row (x) filter and the second the column (y) filter.
fn analyze(src: &[f64], w: usize, h: usize) -> [Vec<f64>; 4] {
    let (hw, hh) = (w / 2, h / 2);
    let mut lo = vec![0.0; hw * h];
    let mut hi = vec![0.0; hw * h];
    for y in 0..h {
        for x in 0..hw {
            let (l, d) = haar_pair(src[y * w + 2 * x], src[y * w + 2 * x + 1]);
            lo[y * hw + x] = l;
            hi[y * hw + x] = d;
        }
    }
    let columns = |plane: &[f64]| {
        let mut l = vec![0.0; hw * hh];
        let mut d = vec![0.0; hw * hh];
        for y in 0..hh {
            for x in 0..hw {
                let (a, b) = haar_pair(plane[2 * y * hw + x], plane[(2 * y + 1) * hw + x]);
                l[y * hw + x] = a;
                d[y * hw + x] = b;
            }
        }
        (l, d)
    };
    let (ll, lh) = columns(&lo);
    let (hl, hh_band) = columns(&hi);
    [ll, lh, hl, hh_band]
}

fn synthesize(ll: &[f64], lh: &[f64], hl: &[f64], hh: &[f64], hw: usize, hh_rows: usize) -> Vec<f64> {
    let (w, h) = (2 * hw, 2 * hh_rows);
    let uncolumns = |low: &[f64], high: &[f64]| {
        let mut plane = vec![0.0; hw * h];
        for y in 0..hh_rows {
            for x in 0..hw {
                let (a, b) = haar_pair_inverse(low[y * hw + x], high[y * hw + x]);
                plane[2 * y * hw + x] = a;
                plane[(2 * y + 1) * hw + x] = b;
            }
        }
        plane
    };
    let lo = uncolumns(ll, lh);
    let hi = uncolumns(hl, hh);
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..hw {
            let (a, b) = haar_pair_inverse(lo[y * hw + x], hi[y * hw + x]);
            out[y * w + 2 * x] = a;
            out[y * w + 2 * x + 1] = b;
        }
    }
    out
}
