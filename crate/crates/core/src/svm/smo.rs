//! Platt's sequential minimal optimization for the C-SVM dual
//!
//! ```text
//! max  Σαᵢ − ½ ΣΣ αᵢαⱼ yᵢyⱼ K(xᵢ, xⱼ)   s.t.  0 ≤ αᵢ ≤ C,  Σ αᵢyᵢ = 0
//! ```
//!
//! with decision function `f(x) = Σ αᵢyᵢ K(xᵢ, x) + b`. Outer passes alternate
//! between sweeping every example and sweeping only the unbounded ones.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::kernel::KernelSpec;
use crate::error::{Error, Result};

/// Alphas within this distance of 0 or C are snapped to the bound.
const BOUND_EPS: f64 = 1e-12;
/// Minimum relative change for a pair update to count as progress.
const STEP_EPS: f64 = 1e-12;

/// Dense kernel matrix over the training set.
#[derive(Clone, Debug)]
pub struct Gram {
    n: usize,
    values: Vec<f64>,
}

impl Gram {
    pub fn new(kernel: &KernelSpec, rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let values = (0..n * n)
            .into_par_iter()
            .map(|idx| kernel.eval(&rows[idx / n], &rows[idx % n]))
            .collect();
        Self { n, values }
    }

    pub fn from_values(n: usize, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), n * n);
        Self { n, values }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SmoSolution {
    pub alphas: Vec<f64>,
    pub bias: f64,
    /// Outer passes performed.
    pub passes: usize,
    /// Successful pair updates.
    pub updates: usize,
    pub objective: f64,
    /// Largest KKT violation `max(0, ...)` over the training set.
    pub max_kkt_violation: f64,
}

/// Dual objective `Σα − ½ αᵀQα` with `Qᵢⱼ = yᵢyⱼKᵢⱼ`.
pub fn dual_objective(gram: &Gram, y: &[f64], alphas: &[f64]) -> f64 {
    let n = gram.len();
    let mut quad = 0.0;
    for i in 0..n {
        if alphas[i] == 0.0 {
            continue;
        }
        for j in 0..n {
            quad += alphas[i] * alphas[j] * y[i] * y[j] * gram.get(i, j);
        }
    }
    alphas.iter().sum::<f64>() - 0.5 * quad
}

/// Largest violation of the KKT conditions given margins `mᵢ = yᵢ f(xᵢ)`:
/// `α = 0 ⇒ m ≥ 1`, `0 < α < C ⇒ m = 1`, `α = C ⇒ m ≤ 1`.
pub fn kkt_violation(alphas: &[f64], margins: &[f64], c: f64) -> f64 {
    alphas
        .iter()
        .zip(margins)
        .map(|(&a, &m)| {
            if a <= 0.0 {
                (1.0 - m).max(0.0)
            } else if a >= c {
                (m - 1.0).max(0.0)
            } else {
                (m - 1.0).abs()
            }
        })
        .fold(0.0, f64::max)
}

struct Solver<'a> {
    gram: &'a Gram,
    y: &'a [f64],
    c: f64,
    tol: f64,
    alphas: Vec<f64>,
    /// `f(xᵢ) − yᵢ` for every example.
    errors: Vec<f64>,
    bias: f64,
    rng: ChaCha8Rng,
    updates: usize,
}

impl Solver<'_> {
    fn is_unbound(&self, i: usize) -> bool {
        self.alphas[i] > 0.0 && self.alphas[i] < self.c
    }

    fn examine(&mut self, i2: usize) -> bool {
        let r2 = self.errors[i2] * self.y[i2];
        let a2 = self.alphas[i2];
        if !((r2 < -self.tol && a2 < self.c) || (r2 > self.tol && a2 > 0.0)) {
            return false;
        }
        let n = self.y.len();
        let e2 = self.errors[i2];

        // Second-choice heuristic: largest |E1 − E2| among unbound examples, lowest index on ties.
        let mut best: Option<(usize, f64)> = None;
        let mut unbound = 0;
        for i in 0..n {
            if self.is_unbound(i) {
                unbound += 1;
                let gap = (self.errors[i] - e2).abs();
                if best.is_none_or(|(_, g)| gap > g) {
                    best = Some((i, gap));
                }
            }
        }
        if unbound > 1 {
            if let Some((i1, _)) = best {
                if self.take_step(i1, i2) {
                    return true;
                }
            }
        }

        let start = self.rng.random_range(0..n);
        for k in 0..n {
            let i1 = (start + k) % n;
            if self.is_unbound(i1) && self.take_step(i1, i2) {
                return true;
            }
        }
        let start = self.rng.random_range(0..n);
        for k in 0..n {
            let i1 = (start + k) % n;
            if self.take_step(i1, i2) {
                return true;
            }
        }
        false
    }

    fn take_step(&mut self, i1: usize, i2: usize) -> bool {
        if i1 == i2 {
            return false;
        }
        let (a1, a2) = (self.alphas[i1], self.alphas[i2]);
        let (y1, y2) = (self.y[i1], self.y[i2]);
        let (e1, e2) = (self.errors[i1], self.errors[i2]);
        let s = y1 * y2;
        let c = self.c;
        let (lo, hi) = if s < 0.0 {
            ((a2 - a1).max(0.0), (c + a2 - a1).min(c))
        } else {
            ((a1 + a2 - c).max(0.0), (a1 + a2).min(c))
        };
        if hi - lo <= BOUND_EPS * c {
            return false;
        }
        let k11 = self.gram.get(i1, i1);
        let k12 = self.gram.get(i1, i2);
        let k22 = self.gram.get(i2, i2);
        let eta = k11 + k22 - 2.0 * k12;

        // Along the constraint line the objective changes by y2(E1 − E2)δ − ½ηδ² for δ = a2' − a2.
        let slope = y2 * (e1 - e2);
        let mut new_a2 = if eta > 0.0 {
            (a2 + slope / eta).clamp(lo, hi)
        } else {
            let gain = |target: f64| {
                let d = target - a2;
                slope * d - 0.5 * eta * d * d
            };
            let (g_lo, g_hi) = (gain(lo), gain(hi));
            if g_lo > g_hi + STEP_EPS {
                lo
            } else if g_hi > g_lo + STEP_EPS {
                hi
            } else {
                a2
            }
        };
        if new_a2 < BOUND_EPS * c {
            new_a2 = 0.0;
        } else if new_a2 > c - BOUND_EPS * c {
            new_a2 = c;
        }
        if (new_a2 - a2).abs() < STEP_EPS * (new_a2 + a2 + STEP_EPS) {
            return false;
        }
        let mut new_a1 = a1 + s * (a2 - new_a2);
        if new_a1 < BOUND_EPS * c {
            new_a1 = 0.0;
        } else if new_a1 > c - BOUND_EPS * c {
            new_a1 = c;
        }

        let (d1, d2) = (y1 * (new_a1 - a1), y2 * (new_a2 - a2));
        let b1 = self.bias - e1 - d1 * k11 - d2 * k12;
        let b2 = self.bias - e2 - d1 * k12 - d2 * k22;
        let new_bias = if new_a1 > 0.0 && new_a1 < c {
            b1
        } else if new_a2 > 0.0 && new_a2 < c {
            b2
        } else {
            0.5 * (b1 + b2)
        };
        let db = new_bias - self.bias;
        for (i, e) in self.errors.iter_mut().enumerate() {
            *e += d1 * self.gram.get(i1, i) + d2 * self.gram.get(i2, i) + db;
        }
        self.alphas[i1] = new_a1;
        self.alphas[i2] = new_a2;
        self.bias = new_bias;
        self.updates += 1;
        true
    }

    /// Bias re-derived from the final multipliers. The incremental update can
    /// leave it outside the range the multipliers allow (always so when none
    /// is free). Each KKT term is a unit-slope hinge in b, so the midpoint of
    /// the lower and upper edges minimises the worst violation.
    fn final_bias(&self) -> f64 {
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for i in 0..self.y.len() {
            // y − g with g = f(x) − b
            let edge = self.y[i] - (self.errors[i] + self.y[i] - self.bias);
            let up = self.y[i] > 0.0;
            if self.is_unbound(i) {
                lo = lo.max(edge);
                hi = hi.min(edge);
            } else if (self.alphas[i] <= 0.0) == up {
                lo = lo.max(edge);
            } else {
                hi = hi.min(edge);
            }
        }
        match (lo.is_finite(), hi.is_finite()) {
            (true, true) => 0.5 * (lo + hi),
            (true, false) => lo,
            (false, true) => hi,
            (false, false) => self.bias,
        }
    }

    fn margins(&self) -> Vec<f64> {
        self.errors.iter().zip(self.y).map(|(e, y)| y * (e + y)).collect()
    }
}

/// Solves the dual for labels `y ∈ {−1, +1}`.
pub fn solve(gram: &Gram, y: &[f64], c: f64, tol: f64, max_passes: usize, seed: u64) -> Result<SmoSolution> {
    let n = y.len();
    if gram.len() != n {
        return Err(Error::invalid("kernel matrix and label count differ"));
    }
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    if y.iter().any(|&v| v != 1.0 && v != -1.0) {
        return Err(Error::invalid("labels must be ±1"));
    }
    if !y.contains(&1.0) || !y.contains(&-1.0) {
        return Err(Error::invalid("training labels contain a single class"));
    }
    if !c.is_finite() || c <= 0.0 {
        return Err(Error::invalid(format!("box constraint C = {c} must be positive")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::invalid(format!("tolerance {tol} must be positive")));
    }

    let mut s = Solver {
        gram,
        y,
        c,
        tol,
        alphas: vec![0.0; n],
        errors: y.iter().map(|v| -v).collect(),
        bias: 0.0,
        rng: ChaCha8Rng::seed_from_u64(seed),
        updates: 0,
    };

    let mut examine_all = true;
    let mut passes = 0;
    loop {
        if passes >= max_passes {
            let worst = kkt_violation(&s.alphas, &s.margins(), c);
            return Err(Error::ConvergenceFailure(format!(
                "SMO stopped after {passes} passes with KKT violation {worst:.3e} (tol {tol}); {} unbound, {} updates",
                (0..n).filter(|&i| s.is_unbound(i)).count(),
                s.updates
            )));
        }
        passes += 1;
        let mut changed = 0;
        for i in 0..n {
            if (examine_all || s.is_unbound(i)) && s.examine(i) {
                changed += 1;
            }
        }
        if examine_all {
            if changed == 0 {
                break;
            }
            examine_all = false;
        } else if changed == 0 {
            examine_all = true;
        }
    }

    let bias = s.final_bias();
    let db = bias - s.bias;
    s.errors.iter_mut().for_each(|e| *e += db);
    let objective = dual_objective(gram, y, &s.alphas);
    let max_kkt_violation = kkt_violation(&s.alphas, &s.margins(), c);
    Ok(SmoSolution { alphas: s.alphas, bias, passes, updates: s.updates, objective, max_kkt_violation })
}
