//! Small unconstrained minimizer: BFGS with central finite-difference
//! gradients and Armijo backtracking.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
// float math without std
#[allow(unused_imports)]
use num_traits::Float;

const FD_STEP: f64 = 1e-6;
const ARMIJO_C1: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 60;
const GRAD_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
pub(crate) struct SearchConfig {
    /// Minimum improvement that counts as progress.
    pub tol: f64,
    /// Iterations allowed without progress before stopping.
    pub patience: usize,
    pub max_iters: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct SearchOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

fn gradient<F: FnMut(&[f64]) -> f64>(f: &mut F, x: &DVector<f64>) -> DVector<f64> {
    let mut probe = x.clone();
    DVector::from_fn(x.len(), |i, _| {
        let xi = probe[i];
        probe[i] = xi + FD_STEP;
        let up = f(probe.as_slice());
        probe[i] = xi - FD_STEP;
        let down = f(probe.as_slice());
        probe[i] = xi;
        (up - down) / (2.0 * FD_STEP)
    })
}

pub(crate) fn minimize<F: FnMut(&[f64]) -> f64>(mut f: F, x0: Vec<f64>, cfg: &SearchConfig) -> SearchOutcome {
    let n = x0.len();
    let mut x = DVector::from_vec(x0);
    let mut fx = f(x.as_slice());
    if n == 0 {
        return SearchOutcome {
            x: x.as_slice().to_vec(),
            iterations: 0,
            converged: true,
        };
    }
    let mut g = gradient(&mut f, &x);
    let mut h = DMatrix::<f64>::identity(n, n);
    let mut fresh_h = true;
    let mut mark_value = fx;
    let mut mark_iter = 0;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < cfg.max_iters {
        iterations += 1;
        if g.norm() < GRAD_TOL {
            converged = true;
            break;
        }
        let mut d = -(&h * &g);
        let mut slope = g.dot(&d);
        if slope >= 0.0 {
            h = DMatrix::identity(n, n);
            fresh_h = true;
            d = -g.clone();
            slope = -g.norm_squared();
        }

        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let trial = &x + &d * alpha;
            let ft = f(trial.as_slice());
            if ft.is_finite() && ft <= fx + ARMIJO_C1 * alpha * slope {
                accepted = Some((trial, ft));
                break;
            }
            alpha *= 0.5;
        }
        let Some((x_new, f_new)) = accepted else {
            if fresh_h {
                // no descent even along -g: stationary up to gradient noise
                converged = true;
                break;
            }
            h = DMatrix::identity(n, n);
            fresh_h = true;
            continue;
        };

        let g_new = gradient(&mut f, &x_new);
        let s = &x_new - &x;
        let y = &g_new - &g;
        let sy = s.dot(&y);
        if sy > 1e-12 * s.norm() * y.norm() {
            if fresh_h {
                h *= sy / y.norm_squared();
            }
            let rho = 1.0 / sy;
            let hy = &h * &y;
            let yhy = y.dot(&hy);
            // H += ρ²(yᵀHy + 1/ρ) ssᵀ - ρ(Hy sᵀ + s yᵀH)
            h += (&s * s.transpose()) * (rho * rho * yhy + rho);
            h -= (&hy * s.transpose() + &s * hy.transpose()) * rho;
            fresh_h = false;
        }
        x = x_new;
        fx = f_new;
        g = g_new;

        if mark_value - fx >= cfg.tol {
            mark_value = fx;
            mark_iter = iterations;
        } else if iterations - mark_iter >= cfg.patience {
            converged = true;
            break;
        }
    }

    SearchOutcome {
        x: x.as_slice().to_vec(),
        iterations,
        converged,
    }
}
