use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pipeline::GrayImage;

/// Orthonormal DCT-II basis for one block size.
///
/// `basis[k * n + i] = c(k) cos((2i + 1) k π / 2n)` with `c(0) = √(1/n)` and
/// `c(k) = √(2/n)` otherwise, so the 2D transform `C X Cᵀ` preserves energy.
#[derive(Clone, Debug)]
pub struct DctPlan {
    size: usize,
    basis: Vec<f64>,
}

impl DctPlan {
    pub fn new(size: usize) -> Result<Self> {
        if size < 2 {
            return Err(Error::invalid(format!("block size {size} must be at least 2")));
        }
        let n = size as f64;
        let mut basis = Vec::with_capacity(size * size);
        for k in 0..size {
            let c = if k == 0 { (1.0 / n).sqrt() } else { (2.0 / n).sqrt() };
            for i in 0..size {
                basis.push(c * ((2 * i + 1) as f64 * k as f64 * PI / (2.0 * n)).cos());
            }
        }
        Ok(Self { size, basis })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Forward 2D transform of a row-major `n×n` block.
    pub fn forward(&self, block: &[f64]) -> Vec<f64> {
        let n = self.size;
        assert_eq!(block.len(), n * n);
        // tmp = C · X
        let mut tmp = vec![0.0; n * n];
        for u in 0..n {
            let cu = &self.basis[u * n..(u + 1) * n];
            for j in 0..n {
                tmp[u * n + j] = (0..n).map(|i| cu[i] * block[i * n + j]).sum();
            }
        }
        // out = tmp · Cᵀ
        let mut out = vec![0.0; n * n];
        for u in 0..n {
            for v in 0..n {
                let cv = &self.basis[v * n..(v + 1) * n];
                out[u * n + v] = (0..n).map(|j| tmp[u * n + j] * cv[j]).sum();
            }
        }
        out
    }

    pub fn inverse(&self, coeffs: &[f64]) -> Vec<f64> {
        let n = self.size;
        assert_eq!(coeffs.len(), n * n);
        // tmp = Cᵀ · Y
        let mut tmp = vec![0.0; n * n];
        for i in 0..n {
            for v in 0..n {
                tmp[i * n + v] = (0..n).map(|u| self.basis[u * n + i] * coeffs[u * n + v]).sum();
            }
        }
        // out = tmp · C
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = (0..n).map(|v| tmp[i * n + v] * self.basis[v * n + j]).sum();
            }
        }
        out
    }
}

/// DCT coefficients of one block; `coeffs[u * B + v]` holds vertical
/// frequency `u` and horizontal frequency `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockSpectrum {
    pub block_size: usize,
    pub coeffs: Vec<f64>,
}

impl BlockSpectrum {
    pub fn dc(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn at(&self, u: usize, v: usize) -> f64 {
        self.coeffs[u * self.block_size + v]
    }

    /// All coefficients except the DC term, in row-major order.
    pub fn ac(&self) -> impl Iterator<Item = f64> + '_ {
        self.coeffs[1..].iter().copied()
    }
}

/// Non-overlapping tiles of an image in row-major order. Pixels beyond the
/// last full tile in either direction are dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockGrid {
    pub block_size: usize,
    pub blocks_x: usize,
    pub blocks_y: usize,
    pub blocks: Vec<BlockSpectrum>,
}

impl BlockGrid {
    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn dc_values(&self) -> Vec<f64> {
        self.blocks.iter().map(BlockSpectrum::dc).collect()
    }

    pub fn ac_values(&self) -> Vec<f64> {
        self.blocks.iter().flat_map(BlockSpectrum::ac).collect()
    }

    /// Coefficient `(u, v)` gathered across every block.
    pub fn frequency_values(&self, u: usize, v: usize) -> Vec<f64> {
        self.blocks.iter().map(|b| b.at(u, v)).collect()
    }
}

pub fn block_dct(img: &GrayImage, block_size: usize) -> Result<BlockGrid> {
    let plan = DctPlan::new(block_size)?;
    let b = block_size;
    if img.width() < b || img.height() < b {
        return Err(Error::invalid(format!(
            "{}x{} image is smaller than one {b}x{b} block",
            img.width(),
            img.height()
        )));
    }
    let blocks_x = img.width() / b;
    let blocks_y = img.height() / b;
    let blocks = (0..blocks_x * blocks_y)
        .into_par_iter()
        .map(|idx| {
            let (bx, by) = (idx % blocks_x, idx / blocks_x);
            let mut tile = Vec::with_capacity(b * b);
            for y in by * b..(by + 1) * b {
                tile.extend_from_slice(&img.row(y)[bx * b..(bx + 1) * b]);
            }
            BlockSpectrum { block_size: b, coeffs: plan.forward(&tile) }
        })
        .collect();
    Ok(BlockGrid { block_size: b, blocks_x, blocks_y, blocks })
}

/// JPEG zigzag scan of an `n×n` grid as `(row, column)` pairs, starting at DC.
pub fn zigzag_order(n: usize) -> Vec<(usize, usize)> {
    let mut order = Vec::with_capacity(n * n);
    for s in 0..(2 * n).saturating_sub(1) {
        let lo = s.saturating_sub(n - 1);
        let hi = s.min(n - 1);
        if s % 2 == 0 {
            // Up-right: row decreasing.
            for r in (lo..=hi).rev() {
                order.push((r, s - r));
            }
        } else {
            for r in lo..=hi {
                order.push((r, s - r));
            }
        }
    }
    order
}
