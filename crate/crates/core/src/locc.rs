//! Deterministic pure-state LOCC conversion: majorization of Schmidt spectra
//! and the necessary condition that every component `C_i` is non-increasing.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::measures::{icem_pure_with_rank, CoefficientScheme};
use crate::state::SchmidtSpectrum;

const TIE_TOL: f64 = 1e-12;

/// `true` iff `x ≺ y`: every partial sum of `x` (sorted descending) is at
/// most the matching partial sum of `y`. Shorter spectra are zero-padded.
///
/// By Nielsen's theorem `ψ → φ` under LOCC exactly when `λ(ψ) ≺ λ(φ)`.
pub fn is_majorized_by(x: &SchmidtSpectrum, y: &SchmidtSpectrum) -> bool {
    let len = x.len().max(y.len());
    let (x, y) = (x.padded(len), y.padded(len));
    let mut sx = 0.0;
    let mut sy = 0.0;
    for (a, b) in x.values().iter().zip(y.values()) {
        sx += a;
        sy += b;
        if sx > sy + TIE_TOL {
            return false;
        }
    }
    true
}

/// One row of the component comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentComparison {
    pub index: usize,
    pub x: f64,
    pub y: f64,
    /// `C_i(x) >= C_i(y)` up to 1e-12.
    pub holds: bool,
}

/// Compares `C_i(x)` with `C_i(y)` for `i = 1..=r`, where both spectra are
/// zero-padded to a common length and `r + 1` is the larger of the two ranks.
pub fn prop1_compare(
    x: &SchmidtSpectrum,
    y: &SchmidtSpectrum,
    scheme: CoefficientScheme,
) -> Result<Vec<ComponentComparison>> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptyInput);
    }
    let len = x.len().max(y.len());
    let (xp, yp) = (x.padded(len), y.padded(len));
    let rank = x.rank().max(y.rank());
    let cx = icem_pure_with_rank(&xp, scheme, rank)?.components;
    let cy = icem_pure_with_rank(&yp, scheme, rank)?.components;
    if cx.len() != cy.len() {
        return Err(Error::LengthMismatch {
            expected: cx.len(),
            found: cy.len(),
        });
    }
    Ok((1..cx.len())
        .map(|i| ComponentComparison {
            index: i,
            x: cx[i],
            y: cy[i],
            holds: cx[i] >= cy[i] - TIE_TOL,
        })
        .collect())
}

/// Outcome of comparing two pure states for LOCC convertibility.
#[derive(Debug, Clone, PartialEq)]
pub struct LoccVerdict {
    /// `ψ → φ` is possible.
    pub forward: bool,
    /// `φ → ψ` is possible.
    pub backward: bool,
    /// Every `C_i(ψ) >= C_i(φ)`.
    pub prop1_forward_consistent: bool,
    /// Every `C_i(φ) >= C_i(ψ)`.
    pub prop1_backward_consistent: bool,
    pub components: Vec<ComponentComparison>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Equivalent,
    ForwardOnly,
    BackwardOnly,
    Incomparable,
}

impl Relation {
    pub fn name(self) -> &'static str {
        match self {
            Relation::Equivalent => "equivalent",
            Relation::ForwardOnly => "forward only",
            Relation::BackwardOnly => "backward only",
            Relation::Incomparable => "incomparable",
        }
    }
}

impl LoccVerdict {
    pub fn relation(&self) -> Relation {
        match (self.forward, self.backward) {
            (true, true) => Relation::Equivalent,
            (true, false) => Relation::ForwardOnly,
            (false, true) => Relation::BackwardOnly,
            (false, false) => Relation::Incomparable,
        }
    }
}

pub fn locc_verdict(x: &SchmidtSpectrum, y: &SchmidtSpectrum, scheme: CoefficientScheme) -> Result<LoccVerdict> {
    let components = prop1_compare(x, y, scheme)?;
    let forward = is_majorized_by(x, y);
    let backward = is_majorized_by(y, x);
    let prop1_forward_consistent = components.iter().all(|c| c.holds);
    let prop1_backward_consistent = components.iter().all(|c| c.y >= c.x - TIE_TOL);
    if forward && !prop1_forward_consistent {
        return Err(Error::LoccInvariant("forward conversion with an increasing component"));
    }
    if backward && !prop1_backward_consistent {
        return Err(Error::LoccInvariant("backward conversion with an increasing component"));
    }
    Ok(LoccVerdict {
        forward,
        backward,
        prop1_forward_consistent,
        prop1_backward_consistent,
        components,
    })
}
