//! Entanglement measures built from the spectrum of a reduced state.
//!
//! The central quantity is the informationally complete measure of a pure
//! bipartite state with Schmidt rank `r + 1`:
//!
//! ```text
//! C(ψ) = 1 - 2^{-r} Σ_{i=0}^{r} w(r, i) Tr ρ_A^{i+1}
//! ```
//!
//! whose weights `w(r, i)` come from a [`CoefficientScheme`]. It splits into
//! components `C_i = w(r, i) 2^{-r} (1 - Tr ρ_A^{i+1})`. Under the binomial
//! scheme the weights sum to `2^r`, so the components add up to the total;
//! under the permutation scheme they do not (see [`MeasureReport`]).

use alloc::vec::Vec;

// float math without std
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::state::{check_cut, partial_trace_pure, schmidt_decompose, Bipartition, PureState, SchmidtSpectrum};

/// Zero threshold for measure values in separability verdicts.
pub const EPS_MEASURE: f64 = 1e-9;

/// Weights `w(r, i)` of the moments in the measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoefficientScheme {
    /// `r! / (i! (r - i)!)`.
    #[default]
    Binomial,
    /// `r! / (r - i)!`.
    Permutation,
}

impl CoefficientScheme {
    pub fn weight(self, r: usize, i: usize) -> f64 {
        if i > r {
            return 0.0;
        }
        match self {
            CoefficientScheme::Binomial => {
                let k = i.min(r - i);
                (0..k).fold(1.0, |acc, j| acc * (r - j) as f64 / (j + 1) as f64)
            }
            CoefficientScheme::Permutation => (0..i).fold(1.0, |acc, j| acc * (r - j) as f64),
        }
    }

    pub fn weights(self, r: usize) -> Vec<f64> {
        (0..=r).map(|i| self.weight(r, i)).collect()
    }

    pub fn name(self) -> &'static str {
        match self {
            CoefficientScheme::Binomial => "binomial",
            CoefficientScheme::Permutation => "printed",
        }
    }
}

/// Value of the measure together with its per-moment components.
///
/// `components[i]` is `C_i`; `components[0]` is always 0. Under
/// [`CoefficientScheme::Binomial`] `value` equals the sum of the components.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureReport {
    pub value: f64,
    pub scheme: CoefficientScheme,
    /// Schmidt rank `r + 1` used to pick the weights.
    pub rank_used: usize,
    pub components: Vec<f64>,
}

/// Generalized concurrence `sqrt(d/(d-1) (1 - Tr ρ_A²))`.
pub fn concurrence_pure(spec: &SchmidtSpectrum, d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    if spec.rank() > d {
        return Err(Error::InvalidSpectrum(alloc::format!(
            "rank {} exceeds local dimension {d}",
            spec.rank()
        )));
    }
    let purity = spec.moments(2).as_slice()[1];
    let linear_entropy = (1.0 - purity).max(0.0);
    Ok((d as f64 / (d - 1) as f64 * linear_entropy).sqrt())
}

/// The measure, with `r + 1` taken from the spectrum's numerical rank.
pub fn icem_pure(spec: &SchmidtSpectrum, scheme: CoefficientScheme) -> Result<MeasureReport> {
    icem_pure_with_rank(spec, scheme, spec.rank())
}

/// The measure with the Schmidt rank pinned to `rank` (= `r + 1`).
pub fn icem_pure_with_rank(spec: &SchmidtSpectrum, scheme: CoefficientScheme, rank: usize) -> Result<MeasureReport> {
    if spec.is_empty() || rank == 0 {
        return Err(Error::EmptyInput);
    }
    let r = rank - 1;
    let moments = spec.moments(rank);
    let m = moments.as_slice();
    let scale = 0.5f64.powi(r as i32);
    let weights = scheme.weights(r);

    // Tr ρ = 1 by construction; the i = 0 term is taken as exactly 1.
    let mut weighted = weights[0];
    let mut components = Vec::with_capacity(rank);
    components.push(0.0);
    for i in 1..=r {
        weighted += weights[i] * m[i];
        components.push(weights[i] * scale * (1.0 - m[i]));
    }
    let value = match scheme {
        CoefficientScheme::Binomial => components.iter().sum(),
        CoefficientScheme::Permutation => 1.0 - scale * weighted,
    };
    Ok(MeasureReport {
        value,
        scheme,
        rank_used: rank,
        components,
    })
}

/// Single component `C_i` for `0 <= i <= r`.
pub fn icem_component(spec: &SchmidtSpectrum, i: usize, scheme: CoefficientScheme) -> Result<f64> {
    let report = icem_pure(spec, scheme)?;
    report.components.get(i).copied().ok_or(Error::IndexOutOfRange {
        index: i,
        max: report.rank_used - 1,
    })
}

fn purity(state: &PureState, keep: &[usize]) -> Result<f64> {
    let rho = partial_trace_pure(state, keep)?;
    Ok(rho.matrix().iter().map(|z| z.norm_sqr()).sum())
}

/// Concentratable entanglement of the two-party view `{A, B}` given by `cut`:
/// `1 - (1/4) Σ_{X ⊆ {A,B}} Tr ρ_X²`, with the empty-set purity equal to 1.
pub fn concentratable_pure(state: &PureState, cut: &Bipartition) -> Result<f64> {
    let norm_sq: f64 = state.amplitudes().iter().map(|a| a.norm_sqr()).sum();
    if (norm_sq - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm_sq });
    }
    check_cut(cut, state.num_subsystems())?;
    let empty = 1.0;
    let a = purity(state, cut.subset())?;
    let b = purity(state, cut.complement())?;
    let whole = norm_sq * norm_sq;
    Ok(1.0 - 0.25 * (empty + a + b + whole))
}

/// Measure of every nonempty proper subset `A` (as the cut `A | Ā`), in
/// increasing bitmask order.
pub fn icem_per_cut(state: &PureState, scheme: CoefficientScheme, eps_rank: f64) -> Result<Vec<(Bipartition, f64)>> {
    let cuts = Bipartition::enumerate(state.num_subsystems())?;
    cuts.into_iter()
        .map(|cut| {
            let spec = schmidt_decompose(state, &cut, eps_rank)?;
            let value = icem_pure(&spec, scheme)?.value;
            Ok((cut, value))
        })
        .collect()
}

/// Arithmetic mean over all `2^n - 2` nonempty proper subsets.
pub fn icem_mean_arithmetic(state: &PureState, scheme: CoefficientScheme, eps_rank: f64) -> Result<f64> {
    Ok(arithmetic_mean(&icem_per_cut(state, scheme, eps_rank)?))
}

/// Geometric mean over all `2^n - 2` nonempty proper subsets.
pub fn icem_mean_geometric(state: &PureState, scheme: CoefficientScheme, eps_rank: f64) -> Result<f64> {
    Ok(geometric_mean(&icem_per_cut(state, scheme, eps_rank)?))
}

pub(crate) fn arithmetic_mean(per_cut: &[(Bipartition, f64)]) -> f64 {
    per_cut.iter().map(|(_, v)| v).sum::<f64>() / per_cut.len() as f64
}

pub(crate) fn geometric_mean(per_cut: &[(Bipartition, f64)]) -> f64 {
    if per_cut.iter().any(|(_, v)| *v <= 0.0) {
        return 0.0;
    }
    // log domain: the plain product underflows for many subsystems
    let mean_log = per_cut.iter().map(|(_, v)| v.ln()).sum::<f64>() / per_cut.len() as f64;
    mean_log.exp()
}

/// Separability class of a multipartite pure state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    FullySeparable,
    EntangledNotGenuine,
    GenuinelyEntangled,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::FullySeparable => "fully-separable",
            Verdict::EntangledNotGenuine => "entangled-not-genuine",
            Verdict::GenuinelyEntangled => "genuinely-entangled",
        }
    }

    fn from_means(arithmetic: f64, geometric: f64) -> Self {
        if arithmetic < EPS_MEASURE {
            Verdict::FullySeparable
        } else if geometric >= EPS_MEASURE {
            Verdict::GenuinelyEntangled
        } else {
            Verdict::EntangledNotGenuine
        }
    }
}

/// Both means, the verdict, and the per-cut values they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct MultipartiteReport {
    pub arithmetic: f64,
    pub geometric: f64,
    pub verdict: Verdict,
    pub per_cut: Vec<(Bipartition, f64)>,
}

pub fn multipartite_report(state: &PureState, scheme: CoefficientScheme, eps_rank: f64) -> Result<MultipartiteReport> {
    let per_cut = icem_per_cut(state, scheme, eps_rank)?;
    let arithmetic = arithmetic_mean(&per_cut);
    let geometric = geometric_mean(&per_cut);
    Ok(MultipartiteReport {
        arithmetic,
        geometric,
        verdict: Verdict::from_means(arithmetic, geometric),
        per_cut,
    })
}

pub fn classify_pure(state: &PureState, scheme: CoefficientScheme, eps_rank: f64) -> Result<Verdict> {
    Ok(multipartite_report(state, scheme, eps_rank)?.verdict)
}
