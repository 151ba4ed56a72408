//! Qutrit Schmidt spectra sharing the purity of `(1/2, 1/3, 1/6)`.
//!
//! `β1² + β2² + β3² = 7/18` with `β1 + β2 + β3 = 1` is a circle of radius
//! `√(1/18)` about `(1/3, 1/3, 1/3)`, drawn as an ellipse in the
//! `(β1, β2)` plane. It lies inside the simplex, so every point is a valid
//! rank-3 spectrum.

use alloc::vec::Vec;

use core::f64::consts::{PI, TAU};
// float math without std
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::measures::{icem_pure, CoefficientScheme};
use crate::state::SchmidtSpectrum;

/// `Tr ρ_A²` of the reference spectrum `(1/2, 1/3, 1/6)`.
pub const REFERENCE_PURITY: f64 = 7.0 / 18.0;
pub const REFERENCE_SPECTRUM: [f64; 3] = [0.5, 1.0 / 3.0, 1.0 / 6.0];
/// Curves closer than this are flagged equal.
pub const EQUALITY_TOL: f64 = 1e-9;

fn radius() -> f64 {
    (1.0f64 / 18.0).sqrt()
}

/// `(β1, β2, β3)` at angle `t`.
pub fn ellipse_point(t: f64) -> [f64; 3] {
    let (s, c) = t.sin_cos();
    let r = radius();
    let u = c / 2f64.sqrt();
    let v = s / 6f64.sqrt();
    let third = 1.0 / 3.0;
    [third + r * (u + v), third + r * (v - u), third - r * 2.0 * v]
}

/// Whether `(β1, β2, 1 - β1 - β2)` has the reference purity within `tol`.
pub fn on_ellipse(beta1: f64, beta2: f64, tol: f64) -> bool {
    let beta3 = 1.0 - beta1 - beta2;
    (beta1 * beta1 + beta2 * beta2 + beta3 * beta3 - REFERENCE_PURITY).abs() <= tol
}

/// `samples` points at `t = 2πk / samples`, as `(β1, β2)`.
pub fn figure1_points(samples: usize) -> Vec<(f64, f64)> {
    (0..samples)
        .map(|k| {
            let b = ellipse_point(TAU * k as f64 / samples as f64);
            (b[0], b[1])
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub t: f64,
    pub beta1: f64,
    pub beta2: f64,
    /// Measure of the state on the ellipse.
    pub curve: f64,
    /// Measure of the reference state.
    pub reference: f64,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EqualityPoint {
    pub t: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    /// Uniform samples plus one row per refined equality point, sorted by `t`.
    pub rows: Vec<SweepRow>,
    pub equality_points: Vec<EqualityPoint>,
}

fn measure_at(t: f64, scheme: CoefficientScheme, eps_rank: f64) -> Result<f64> {
    let spec = SchmidtSpectrum::new(&ellipse_point(t), eps_rank)?;
    Ok(icem_pure(&spec, scheme)?.value)
}

/// Sweeps the ellipse, comparing each state with the reference spectrum.
///
/// Crossings between samples are located by bisection on `t` and inserted
/// as extra flagged rows.
pub fn figure2_sweep(samples: usize, scheme: CoefficientScheme, eps_rank: f64) -> Result<Sweep> {
    if samples < 3 {
        return Err(Error::InvalidParameter("sweep needs at least 3 samples"));
    }
    let reference = icem_pure(&SchmidtSpectrum::new(&REFERENCE_SPECTRUM, eps_rank)?, scheme)?.value;
    let gap = |t: f64| measure_at(t, scheme, eps_rank).map(|v| v - reference);

    let ts: Vec<f64> = (0..samples).map(|k| TAU * k as f64 / samples as f64).collect();
    let gaps = ts.iter().map(|&t| gap(t)).collect::<Result<Vec<f64>>>()?;

    let mut roots = Vec::new();
    for k in 0..samples {
        let (t0, g0) = (ts[k], gaps[k]);
        let (t1, g1) = if k + 1 < samples {
            (ts[k + 1], gaps[k + 1])
        } else {
            (TAU, gaps[0])
        };
        if g0 == 0.0 {
            roots.push(t0);
        } else if g0 * g1 < 0.0 {
            roots.push(bisect(&gap, t0, t1, g0)?);
        }
    }

    let mut rows: Vec<SweepRow> = ts
        .iter()
        .zip(&gaps)
        .map(|(&t, &g)| {
            let b = ellipse_point(t);
            SweepRow {
                t,
                beta1: b[0],
                beta2: b[1],
                curve: reference + g,
                reference,
                equal: g.abs() <= EQUALITY_TOL,
            }
        })
        .collect();
    let mut equality_points = Vec::with_capacity(roots.len());
    for &t in &roots {
        let b = ellipse_point(t);
        equality_points.push(EqualityPoint {
            t,
            beta1: b[0],
            beta2: b[1],
            beta3: b[2],
        });
        if !ts.iter().any(|&s| (s - t).abs() < 1e-12) {
            rows.push(SweepRow {
                t,
                beta1: b[0],
                beta2: b[1],
                curve: reference + gap(t)?,
                reference,
                equal: true,
            });
        }
    }
    rows.sort_by(|a, b| a.t.total_cmp(&b.t));
    Ok(Sweep { rows, equality_points })
}

fn bisect<F: Fn(f64) -> Result<f64>>(f: &F, mut lo: f64, mut hi: f64, mut f_lo: f64) -> Result<f64> {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Angle of `(β1, β2)` on the ellipse, in `[0, 2π)`.
pub fn angle_of(beta1: f64, beta2: f64) -> f64 {
    let third = 1.0 / 3.0;
    let (d1, d2) = (beta1 - third, beta2 - third);
    let r = radius();
    // β1 - β2 = r √2 cos t,  β1 + β2 - 2/3 = r (2/√6) sin t
    let c = (d1 - d2) / (r * 2f64.sqrt());
    let s = (d1 + d2) * 6f64.sqrt() / (2.0 * r);
    let t = s.atan2(c);
    if t < 0.0 {
        t + 2.0 * PI
    } else {
        t
    }
}
