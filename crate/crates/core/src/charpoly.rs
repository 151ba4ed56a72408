//! Characteristic-polynomial coefficients of a reduced state and their
//! one-to-one correspondence with the power traces `Tr ρ^k`.
//!
//! For a spectrum `λ_1..λ_d` the characteristic polynomial is
//!
//! ```text
//! F(λ) = Π (λ - λ_i) = λ^d - a_1 λ^{d-1} + a_2 λ^{d-2} - … + (-1)^d a_d
//! ```
//!
//! where `a_k` is the k-th elementary symmetric polynomial of the spectrum.
//! The coefficients follow from the moments `m_k = Tr ρ^k` through
//!
//! ```text
//! a_{k+1} = 1/(k+1) Σ_{l=0}^{k} (-1)^l a_{k-l} m_{l+1},   a_0 = 1
//! ```
//!
//! and the same recursion solved for `m_{k+1}` goes the other way.

use alloc::vec::Vec;

use nalgebra::DMatrix;
// float math without std
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::state::{MomentVector, SchmidtSpectrum};

const MOMENT_DOMAIN_TOL: f64 = 1e-9;
const IMAG_TOL: f64 = 1e-7;
/// Complex roots closer than this are treated as one perturbed real cluster.
const CLUSTER_RADIUS: f64 = 1e-3;

/// `[a_1, …, a_d]`; `a_0 = 1` is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct CharCoeffs {
    coeffs: Vec<f64>,
}

impl CharCoeffs {
    pub fn new(coeffs: Vec<f64>) -> Self {
        CharCoeffs { coeffs }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `a_k`, with `a_0 = 1`.
    pub fn get(&self, k: usize) -> Option<f64> {
        if k == 0 {
            Some(1.0)
        } else {
            self.coeffs.get(k - 1).copied()
        }
    }
}

/// Newton's identities: moments `[m_1..m_d]` to coefficients `[a_1..a_d]`.
pub fn coeffs_from_moments(m: &MomentVector) -> Result<CharCoeffs> {
    let m = m.as_slice();
    if m.is_empty() {
        return Err(Error::EmptyInput);
    }
    let d = m.len();
    // a[0] = a_0
    let mut a = Vec::with_capacity(d + 1);
    a.push(1.0);
    for k in 0..d {
        let mut acc = 0.0;
        for l in 0..=k {
            let term = a[k - l] * m[l];
            if l % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        a.push(acc / (k + 1) as f64);
    }
    a.remove(0);
    Ok(CharCoeffs { coeffs: a })
}

/// Inverse of [`coeffs_from_moments`].
///
/// Fails with [`Error::CoefficientDomain`] when a reconstructed moment leaves
/// `[0, 1]` (beyond 1e-9), which no genuine spectrum can produce.
pub fn moments_from_coeffs(a: &CharCoeffs) -> Result<MomentVector> {
    let coeffs = a.as_slice();
    if coeffs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let d = coeffs.len();
    let coef = |k: usize| if k == 0 { 1.0 } else { coeffs[k - 1] };
    let mut m: Vec<f64> = Vec::with_capacity(d);
    for k in 0..d {
        // (k+1) a_{k+1} = Σ_{l<k} (-1)^l a_{k-l} m_{l+1} + (-1)^k m_{k+1}
        let mut rest = 0.0;
        for (l, &ml) in m.iter().enumerate() {
            let term = coef(k - l) * ml;
            if l % 2 == 0 {
                rest += term;
            } else {
                rest -= term;
            }
        }
        let signed = (k + 1) as f64 * coef(k + 1) - rest;
        let value = if k % 2 == 0 { signed } else { -signed };
        if !(-MOMENT_DOMAIN_TOL..=1.0 + MOMENT_DOMAIN_TOL).contains(&value) {
            return Err(Error::CoefficientDomain { index: k + 1, value });
        }
        m.push(value);
    }
    Ok(MomentVector::new(m))
}

/// Diagonal similarity scaling by powers of two so that row and column norms
/// are comparable (Parlett–Reinsch). Eigenvalues are unchanged.
fn balance(a: &mut DMatrix<f64>) {
    const RADIX: f64 = 2.0;
    let n = a.nrows();
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut g = r / RADIX;
            let mut f = 1.0;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= inv;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

/// Roots of the characteristic polynomial, i.e. the spectrum the
/// coefficients came from.
///
/// Roots are eigenvalues of the companion matrix. Complex roots that sit in a
/// tight cluster whose mean is real are read as a numerically split
/// degenerate eigenvalue; any other root with imaginary part above 1e-7 is
/// rejected. Nearly degenerate roots are accepted as returned by the solver.
pub fn spectrum_from_coeffs(a: &CharCoeffs, eps_rank: f64) -> Result<SchmidtSpectrum> {
    let coeffs = a.as_slice();
    let d = coeffs.len();
    if d == 0 {
        return Err(Error::EmptyInput);
    }
    // λ^d + c_1 λ^{d-1} + … + c_d with c_k = (-1)^k a_k
    let monic: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .map(|(k, &ak)| if (k + 1) % 2 == 0 { ak } else { -ak })
        .collect();

    let roots: Vec<(f64, f64)> = if d == 1 {
        alloc::vec![(coeffs[0], 0.0)]
    } else {
        let mut companion = DMatrix::from_fn(d, d, |i, j| {
            if i == 0 {
                -monic[j]
            } else if i == j + 1 {
                1.0
            } else {
                0.0
            }
        });
        balance(&mut companion);
        companion.complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect()
    };

    // link roots closer than the cluster radius, transitively
    let mut cluster_of: Vec<usize> = (0..d).collect();
    for i in 0..d {
        for j in (i + 1)..d {
            let dist = ((roots[i].0 - roots[j].0).powi(2) + (roots[i].1 - roots[j].1).powi(2)).sqrt();
            if dist <= CLUSTER_RADIUS {
                let (ci, cj) = (cluster_of[i], cluster_of[j]);
                for c in cluster_of.iter_mut() {
                    if *c == cj {
                        *c = ci;
                    }
                }
            }
        }
    }

    let mut real = Vec::with_capacity(d);
    for i in 0..d {
        let members: Vec<usize> = (0..d).filter(|&j| cluster_of[j] == cluster_of[i]).collect();
        let split = members.iter().any(|&j| roots[j].1.abs() > IMAG_TOL);
        if !split {
            real.push(roots[i].0);
            continue;
        }
        let count = members.len() as f64;
        let mean_im = members.iter().map(|&j| roots[j].1).sum::<f64>() / count;
        if members.len() < 2 || mean_im.abs() > IMAG_TOL {
            return Err(Error::ComplexRoot { imag: roots[i].1 });
        }
        real.push(members.iter().map(|&j| roots[j].0).sum::<f64>() / count);
    }
    SchmidtSpectrum::new(&real, eps_rank)
}
