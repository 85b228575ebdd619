//! Exhaustive solver for tiny SVM duals.
//!
//! Maximises `Σα − ½ αᵀQα` with `Qᵢⱼ = yᵢyⱼKᵢⱼ`, `0 ≤ α ≤ C`, `yᵀα = 0`
//! by visiting every assignment of each αᵢ to {0, C, free}. On a face the
//! free block solves the equality-constrained stationarity system; the best
//! feasible stationary point over all faces is the global optimum because
//! the objective is concave. Needs a non-singular kernel matrix.

use nalgebra::{DMatrix, DVector};

#[allow(dead_code)]
pub struct OracleSolution {
    pub alphas: Vec<f64>,
    pub objective: f64,
}

pub fn objective(k: &[Vec<f64>], y: &[f64], a: &[f64]) -> f64 {
    let n = y.len();
    let mut quad = 0.0;
    for i in 0..n {
        for j in 0..n {
            quad += a[i] * a[j] * y[i] * y[j] * k[i][j];
        }
    }
    a.iter().sum::<f64>() - 0.5 * quad
}

pub fn solve_dual(k: &[Vec<f64>], y: &[f64], c: f64) -> OracleSolution {
    let n = y.len();
    assert!(n <= 10, "3^n faces");
    let mut best: Option<OracleSolution> = None;
    let faces = 3usize.pow(n as u32);
    for code in 0..faces {
        let mut state = vec![0u8; n];
        let mut rest = code;
        for s in state.iter_mut() {
            *s = (rest % 3) as u8;
            rest /= 3;
        }
        let free: Vec<usize> = (0..n).filter(|&i| state[i] == 2).collect();
        let mut alpha: Vec<f64> = state.iter().map(|&s| if s == 1 { c } else { 0.0 }).collect();

        if free.is_empty() {
            let balance: f64 = alpha.iter().zip(y).map(|(a, y)| a * y).sum();
            if balance.abs() > 1e-12 {
                continue;
            }
        } else {
            // [Q_FF  y_F] [α_F]   [1 − Q_FB α_B]
            // [y_Fᵀ  0  ] [ ν ] = [  −y_Bᵀ α_B ]
            let m = free.len();
            let mut a = DMatrix::<f64>::zeros(m + 1, m + 1);
            let mut b = DVector::<f64>::zeros(m + 1);
            for (r, &i) in free.iter().enumerate() {
                for (s, &j) in free.iter().enumerate() {
                    a[(r, s)] = y[i] * y[j] * k[i][j];
                }
                a[(r, m)] = y[i];
                a[(m, r)] = y[i];
                let fixed: f64 = (0..n).filter(|&j| state[j] == 1).map(|j| y[i] * y[j] * k[i][j] * c).sum();
                b[r] = 1.0 - fixed;
            }
            b[m] = -(0..n).filter(|&j| state[j] == 1).map(|j| y[j] * c).sum::<f64>();
            let Some(x) = a.lu().solve(&b) else { continue };
            let feasible = (0..m).all(|r| x[r] >= -1e-12 && x[r] <= c + 1e-12);
            if !feasible {
                continue;
            }
            for (r, &i) in free.iter().enumerate() {
                alpha[i] = x[r].clamp(0.0, c);
            }
        }
        let obj = objective(k, y, &alpha);
        if best.as_ref().is_none_or(|b| obj > b.objective) {
            best = Some(OracleSolution { alphas: alpha, objective: obj });
        }
    }
    best.expect("α = 0 is always feasible")
}
