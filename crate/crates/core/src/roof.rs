//! Convex-roof extension of the measure to mixed states.
//!
//! Every size-`m` pure-state decomposition of `ρ = Σ_i μ_i |e_i><e_i|` is
//! `w_j = Σ_i U_{ji} √μ_i |e_i>` for an `m × k` isometry `U` (`k = rank ρ`),
//! with `p_j = <w_j|w_j>` and `|ψ_j> = w_j / √p_j`. The search runs over
//! unconstrained complex `Z` orthonormalized column by column. Restarts are
//! independent; the value found is an upper bound on the roof.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
// float math without std
#[allow(unused_imports)]
use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::measures::{icem_pure, CoefficientScheme};
use crate::optim::{minimize, SearchConfig};
use crate::state::{
    check_cut, hermitian_eigenvalues, schmidt_decompose, Bipartition, DensityMatrix, IndexSplit, PureState,
    SchmidtSpectrum, EPS_RANK,
};

const WEIGHT_SUM_TOL: f64 = 1e-10;
/// Members lighter than this are dropped from returned ensembles.
const NEGLIGIBLE_WEIGHT: f64 = 1e-15;
const MAX_DEFAULT_ENSEMBLE: usize = 16;

/// Pure-state decomposition `{p_j, |ψ_j>}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    weights: Vec<f64>,
    states: Vec<PureState>,
}

impl Ensemble {
    pub fn new(weights: Vec<f64>, states: Vec<PureState>) -> Result<Self> {
        if weights.len() != states.len() {
            return Err(Error::EnsembleMismatch {
                weights: weights.len(),
                states: states.len(),
            });
        }
        let first = states.first().ok_or(Error::EmptyInput)?;
        if states.iter().any(|s| s.dims() != first.dims()) {
            return Err(Error::InvalidEnsemble("members have different dimensions".into()));
        }
        if weights.iter().any(|&p| p.is_nan() || p < 0.0) {
            return Err(Error::InvalidEnsemble("weights must be nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidEnsemble(alloc::format!("weights sum to {total}")));
        }
        Ok(Ensemble { weights, states })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `Σ_j p_j |ψ_j><ψ_j|`.
    pub fn density(&self) -> Result<DensityMatrix> {
        DensityMatrix::mixture(&self.weights, &self.states)
    }

    /// Frobenius distance between the rebuilt state and `rho`.
    pub fn reconstruction_error(&self, rho: &DensityMatrix) -> Result<f64> {
        let rebuilt = self.density()?;
        if rebuilt.dim() != rho.dim() {
            return Err(Error::LengthMismatch {
                expected: rho.dim(),
                found: rebuilt.dim(),
            });
        }
        Ok((rebuilt.matrix() - rho.matrix()).norm())
    }
}

/// `Σ_j p_j C(ψ_j)` across `cut`.
pub fn ensemble_average(e: &Ensemble, cut: &Bipartition, scheme: CoefficientScheme, eps_rank: f64) -> Result<f64> {
    let mut total = 0.0;
    for (&p, s) in e.weights.iter().zip(&e.states) {
        let spec = schmidt_decompose(s, cut, eps_rank)?;
        total += p * icem_pure(&spec, scheme)?.value;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoofConfig {
    pub restarts: usize,
    /// Improvement below this over `patience` iterations ends a restart.
    pub tol: f64,
    pub patience: usize,
    /// Decomposition size `m`; `None` means `rank²` capped at 16 (never below the rank).
    pub ensemble_size: Option<usize>,
    pub seed: u64,
    pub max_iters: usize,
    pub eps_rank: f64,
}

impl Default for RoofConfig {
    fn default() -> Self {
        RoofConfig {
            restarts: 32,
            tol: 1e-7,
            patience: 50,
            ensemble_size: None,
            seed: 0,
            max_iters: 2000,
            eps_rank: EPS_RANK,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestartOutcome {
    pub index: usize,
    pub value: f64,
    pub ensemble: Ensemble,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoofResult {
    /// Upper bound on the roof: the best ensemble average found.
    pub value: f64,
    pub best_ensemble: Ensemble,
    pub restarts_used: usize,
    /// Whether the restart that produced `value` met the stopping rule.
    pub converged: bool,
}

/// A density matrix prepared for decomposition search.
#[derive(Debug, Clone)]
pub struct RoofProblem {
    dims: Vec<usize>,
    /// Positional cut, as used by the member pure states.
    cut: Bipartition,
    split: IndexSplit,
    /// `√μ_i |e_i>` as columns.
    weighted: DMatrix<Complex64>,
    ensemble_size: usize,
    scheme: CoefficientScheme,
    config: RoofConfig,
}

impl RoofProblem {
    /// `cut` is given in the labels of `rho`.
    pub fn new(rho: &DensityMatrix, cut: &Bipartition, scheme: CoefficientScheme, config: RoofConfig) -> Result<Self> {
        let n = rho.dims().len();
        let mut keep = rho.positions_of(cut.subset())?;
        keep.sort_unstable();
        let cut = Bipartition::of(n, &keep)?;
        check_cut(&cut, n)?;

        let eigen = rho.matrix().clone().symmetric_eigen();
        let min_eigenvalue = eigen.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if min_eigenvalue < -1e-9 {
            return Err(Error::NotPsd { min_eigenvalue });
        }
        let mut order: Vec<usize> = (0..eigen.eigenvalues.len())
            .filter(|&i| eigen.eigenvalues[i] > config.eps_rank)
            .collect();
        order.sort_by(|&a, &b| eigen.eigenvalues[b].total_cmp(&eigen.eigenvalues[a]));
        let rank = order.len();
        if rank == 0 {
            return Err(Error::BadTrace { trace: 0.0 });
        }
        let kept: f64 = order.iter().map(|&i| eigen.eigenvalues[i]).sum();
        let weighted = DMatrix::from_fn(rho.dim(), rank, |row, col| {
            let i = order[col];
            eigen.eigenvectors[(row, i)] * (eigen.eigenvalues[i] / kept).sqrt()
        });

        let ensemble_size = config
            .ensemble_size
            .unwrap_or_else(|| (rank * rank).min(MAX_DEFAULT_ENSEMBLE).max(rank));
        if ensemble_size < rank {
            return Err(Error::EnsembleTooSmall {
                size: ensemble_size,
                rank,
            });
        }
        if config.restarts == 0 {
            return Err(Error::InvalidParameter("at least one restart is required"));
        }
        Ok(RoofProblem {
            dims: rho.dims().to_vec(),
            split: IndexSplit::new(rho.dims(), cut.subset()),
            cut,
            weighted,
            ensemble_size,
            scheme,
            config,
        })
    }

    pub fn rank(&self) -> usize {
        self.weighted.ncols()
    }

    pub fn ensemble_size(&self) -> usize {
        self.ensemble_size
    }

    pub fn restarts(&self) -> usize {
        self.config.restarts
    }

    /// The cut in subsystem positions, as applied to ensemble members.
    pub fn cut(&self) -> &Bipartition {
        &self.cut
    }

    fn param_len(&self) -> usize {
        2 * self.ensemble_size * self.rank()
    }

    /// Column-wise Gram–Schmidt of `Z` (`m × k`, row-major `re, im` pairs).
    fn isometry(&self, params: &[f64]) -> Option<DMatrix<Complex64>> {
        let (m, k) = (self.ensemble_size, self.rank());
        let mut u = DMatrix::from_fn(m, k, |j, i| {
            let at = 2 * (j * k + i);
            Complex64::new(params[at], params[at + 1])
        });
        for i in 0..k {
            for prev in 0..i {
                let overlap: Complex64 = (0..m).map(|j| u[(j, prev)].conj() * u[(j, i)]).sum();
                for j in 0..m {
                    let shift = u[(j, prev)] * overlap;
                    u[(j, i)] -= shift;
                }
            }
            let norm = (0..m).map(|j| u[(j, i)].norm_sqr()).sum::<f64>().sqrt();
            if norm.is_nan() || norm <= 1e-150 {
                return None;
            }
            for j in 0..m {
                u[(j, i)] /= norm;
            }
        }
        Some(u)
    }

    /// Unnormalized members `w_j` as columns.
    fn members(&self, params: &[f64]) -> Option<DMatrix<Complex64>> {
        let u = self.isometry(params)?;
        Some(&self.weighted * u.transpose())
    }

    fn objective(&self, params: &[f64]) -> f64 {
        let Some(w) = self.members(params) else {
            return f64::INFINITY;
        };
        let mut total = 0.0;
        for col in w.column_iter() {
            let p = col.norm_squared();
            if p < NEGLIGIBLE_WEIGHT {
                continue;
            }
            let m = self.split.reshape(col.as_slice());
            let gram = if m.nrows() <= m.ncols() {
                &m * m.adjoint()
            } else {
                m.adjoint() * &m
            };
            let values: Vec<f64> = hermitian_eigenvalues(&gram).into_iter().map(|x| x / p).collect();
            let value = SchmidtSpectrum::new(&values, self.config.eps_rank)
                .and_then(|s| icem_pure(&s, self.scheme))
                .map(|r| r.value);
            match value {
                Ok(v) => total += p * v,
                Err(_) => return f64::INFINITY,
            }
        }
        total
    }

    /// Builds the decomposition encoded by `params`.
    fn ensemble(&self, params: &[f64]) -> Result<Ensemble> {
        let w = self
            .members(params)
            .ok_or(Error::InvalidEnsemble("degenerate isometry".into()))?;
        let mut weights = Vec::new();
        let mut states = Vec::new();
        for col in w.column_iter() {
            let p = col.norm_squared();
            if p < NEGLIGIBLE_WEIGHT {
                continue;
            }
            let amps: Vec<Complex64> = col.iter().map(|a| a / p.sqrt()).collect();
            states.push(PureState::normalized(self.dims.clone(), amps)?);
            weights.push(p);
        }
        let total: f64 = weights.iter().sum();
        for p in weights.iter_mut() {
            *p /= total;
        }
        Ensemble::new(weights, states)
    }

    /// Initial `Z`: the eigen-decomposition for restart 0, Gaussian otherwise.
    fn start(&self, index: usize) -> Vec<f64> {
        let (m, k) = (self.ensemble_size, self.rank());
        if index == 0 {
            let mut x = vec![0.0; self.param_len()];
            for i in 0..k {
                x[2 * (i * k + i)] = 1.0;
            }
            return x;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        rng.set_stream(index as u64);
        (0..2 * m * k).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    /// Runs restart `index` (deterministic in the seed and index).
    pub fn run_restart(&self, index: usize) -> Result<RestartOutcome> {
        let cfg = SearchConfig {
            tol: self.config.tol,
            patience: self.config.patience,
            max_iters: self.config.max_iters,
        };
        let out = minimize(|x| self.objective(x), self.start(index), &cfg);
        let ensemble = self.ensemble(&out.x)?;
        let value = ensemble_average(&ensemble, &self.cut, self.scheme, self.config.eps_rank)?;
        Ok(RestartOutcome {
            index,
            value,
            ensemble,
            iterations: out.iterations,
            converged: out.converged,
        })
    }
}

/// Minimum over restart outcomes; ties go to the lower restart index.
pub fn best_of(outcomes: Vec<RestartOutcome>) -> Result<RoofResult> {
    let restarts_used = outcomes.len();
    let best = outcomes
        .into_iter()
        .min_by(|a, b| a.value.total_cmp(&b.value).then(a.index.cmp(&b.index)))
        .ok_or(Error::EmptyInput)?;
    Ok(RoofResult {
        value: best.value,
        best_ensemble: best.ensemble,
        restarts_used,
        converged: best.converged,
    })
}

/// Sequential multi-restart search for the roof across `cut`.
pub fn roof_minimize(
    rho: &DensityMatrix,
    cut: &Bipartition,
    scheme: CoefficientScheme,
    config: RoofConfig,
) -> Result<RoofResult> {
    let problem = RoofProblem::new(rho, cut, scheme, config)?;
    let outcomes = (0..problem.restarts())
        .map(|i| problem.run_restart(i))
        .collect::<Result<Vec<_>>>()?;
    best_of(outcomes)
}

/// Weighted column matrix `√p_j |ψ_j>`; exposed for reconstruction checks.
pub fn ensemble_columns(e: &Ensemble) -> DMatrix<Complex64> {
    let d = e.states[0].dim();
    let mut m = DMatrix::zeros(d, e.len());
    for (j, (p, s)) in e.weights.iter().zip(&e.states).enumerate() {
        m.set_column(
            j,
            &(DVector::from_column_slice(s.amplitudes()) * Complex64::new(p.sqrt(), 0.0)),
        );
    }
    m
}
