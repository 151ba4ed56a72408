//! Pure and mixed multi-qudit states, partial traces, Schmidt spectra and
//! power traces.
//!
//! Amplitudes are stored densely in row-major order: the last subsystem index
//! runs fastest. Subsystems of a [`PureState`] are labeled `0..n` by position;
//! a [`DensityMatrix`] carries the labels of the subsystems it describes, so a
//! reduced state remembers where it came from.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
// float math without std
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{Error, Result};

/// Default zero threshold for eigenvalues when counting the Schmidt rank.
pub const EPS_RANK: f64 = 1e-10;

/// Default cap on the number of stored amplitudes.
pub const DEFAULT_MAX_AMPLITUDES: usize = 1 << 20;

const NORM_TOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-9;
const SPECTRUM_SUM_TOL: f64 = 1e-9;
const RENORM_DRIFT: f64 = 1e-12;

fn checked_product(dims: &[usize], cap: usize) -> Result<usize> {
    let mut total: usize = 1;
    for (position, &dim) in dims.iter().enumerate() {
        if dim < 2 {
            return Err(Error::InvalidDimension { position, dim });
        }
        total = total
            .checked_mul(dim)
            .filter(|&t| t <= cap)
            .ok_or(Error::CapacityExceeded {
                requested: total.saturating_mul(dim),
                cap,
            })?;
    }
    Ok(total)
}

/// Splits a row-major multi-index over `dims` into a "kept" part and a
/// "traced" part, each row-major in ascending position order.
#[derive(Debug, Clone)]
pub(crate) struct IndexSplit {
    keep_dim: usize,
    trace_dim: usize,
    /// full index -> (kept index, traced index)
    parts: Vec<(usize, usize)>,
}

impl IndexSplit {
    pub(crate) fn new(dims: &[usize], keep: &[usize]) -> Self {
        let n = dims.len();
        let mut kept = vec![false; n];
        for &p in keep {
            kept[p] = true;
        }
        let keep_dim: usize = (0..n).filter(|&p| kept[p]).map(|p| dims[p]).product();
        let trace_dim: usize = (0..n).filter(|&p| !kept[p]).map(|p| dims[p]).product();
        let total = keep_dim * trace_dim;

        // strides of each position inside its own part
        let mut stride = vec![0usize; n];
        let (mut ks, mut ts) = (1usize, 1usize);
        for p in (0..n).rev() {
            if kept[p] {
                stride[p] = ks;
                ks *= dims[p];
            } else {
                stride[p] = ts;
                ts *= dims[p];
            }
        }

        let mut parts = Vec::with_capacity(total);
        let mut digits = vec![0usize; n];
        for _ in 0..total {
            let (mut k, mut t) = (0, 0);
            for p in 0..n {
                if kept[p] {
                    k += digits[p] * stride[p];
                } else {
                    t += digits[p] * stride[p];
                }
            }
            parts.push((k, t));
            for p in (0..n).rev() {
                digits[p] += 1;
                if digits[p] < dims[p] {
                    break;
                }
                digits[p] = 0;
            }
        }
        IndexSplit {
            keep_dim,
            trace_dim,
            parts,
        }
    }

    pub(crate) fn keep_dim(&self) -> usize {
        self.keep_dim
    }

    pub(crate) fn trace_dim(&self) -> usize {
        self.trace_dim
    }

    pub(crate) fn parts(&self) -> &[(usize, usize)] {
        &self.parts
    }

    /// Reshapes a full vector into a `keep_dim x trace_dim` matrix.
    pub(crate) fn reshape(&self, amplitudes: &[Complex64]) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.keep_dim, self.trace_dim);
        for (&(k, t), &a) in self.parts.iter().zip(amplitudes) {
            m[(k, t)] = a;
        }
        m
    }
}

/// A normalized pure state over subsystems with the given dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Validates dimensions, length and normalization (within 1e-10).
    pub fn new(dims: Vec<usize>, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::with_cap(dims, amplitudes, DEFAULT_MAX_AMPLITUDES)
    }

    pub fn with_cap(dims: Vec<usize>, amplitudes: Vec<Complex64>, cap: usize) -> Result<Self> {
        let total = checked_product(&dims, cap)?;
        if amplitudes.len() != total {
            return Err(Error::LengthMismatch {
                expected: total,
                found: amplitudes.len(),
            });
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Ok(PureState { dims, amplitudes })
    }

    /// Rescales `amplitudes` to unit norm before validating.
    pub fn normalized(dims: Vec<usize>, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sq.is_finite() || norm_sq <= 0.0 {
            return Err(Error::NotNormalized { norm_sq });
        }
        let scale = 1.0 / norm_sq.sqrt();
        for a in &mut amplitudes {
            *a *= scale;
        }
        Self::new(dims, amplitudes)
    }

    /// Tensor product of single-subsystem basis states, e.g. `|0 1 2>`.
    pub fn basis(dims: Vec<usize>, digits: &[usize]) -> Result<Self> {
        if digits.len() != dims.len() {
            return Err(Error::LengthMismatch {
                expected: dims.len(),
                found: digits.len(),
            });
        }
        let total = checked_product(&dims, DEFAULT_MAX_AMPLITUDES)?;
        let mut index = 0;
        for (&d, &x) in dims.iter().zip(digits) {
            if x >= d {
                return Err(Error::IndexOutOfRange { index: x, max: d - 1 });
            }
            index = index * d + x;
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); total];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self::new(dims, amplitudes)
    }

    /// `Σ_i sqrt(λ_i) |i i>` on two subsystems of dimension `d = λ.len()`.
    pub fn from_schmidt(lambdas: &[f64]) -> Result<Self> {
        let d = lambdas.len();
        if d < 2 {
            return Err(Error::DimensionTooSmall(d));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); d * d];
        for (i, &l) in lambdas.iter().enumerate() {
            if l < 0.0 {
                return Err(Error::InvalidSpectrum("negative Schmidt coefficient".into()));
            }
            amplitudes[i * d + i] = Complex64::new(l.sqrt(), 0.0);
        }
        Self::new(vec![d, d], amplitudes)
    }

    pub fn tensor(&self, other: &PureState) -> Result<Self> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let mut amplitudes = Vec::with_capacity(self.amplitudes.len() * other.amplitudes.len());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Self::new(dims, amplitudes)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Applies `unitary` to the subsystem at `position`.
    pub fn apply_local(&self, position: usize, unitary: &DMatrix<Complex64>) -> Result<Self> {
        let d = *self.dims.get(position).ok_or(Error::UnknownLabel(position))?;
        if unitary.nrows() != d || unitary.ncols() != d {
            return Err(Error::LengthMismatch {
                expected: d,
                found: unitary.nrows(),
            });
        }
        let inner: usize = self.dims[position + 1..].iter().product();
        let outer: usize = self.dims[..position].iter().product();
        let mut out = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        for o in 0..outer {
            for i in 0..inner {
                let base = o * d * inner + i;
                for row in 0..d {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for col in 0..d {
                        acc += unitary[(row, col)] * self.amplitudes[base + col * inner];
                    }
                    out[base + row * inner] = acc;
                }
            }
        }
        Self::normalized(self.dims.clone(), out)
    }
}

/// A Hermitian, positive semidefinite, unit-trace matrix on a labeled set of
/// subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    labels: Vec<usize>,
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates hermiticity (1e-10), trace (1e-10) and positivity (-1e-9).
    pub fn new(dims: Vec<usize>, labels: Vec<usize>, matrix: DMatrix<Complex64>) -> Result<Self> {
        let total = checked_product(&dims, DEFAULT_MAX_AMPLITUDES)?;
        if labels.len() != dims.len() {
            return Err(Error::LengthMismatch {
                expected: dims.len(),
                found: labels.len(),
            });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel(*l));
            }
        }
        if matrix.nrows() != total || matrix.ncols() != total {
            return Err(Error::LengthMismatch {
                expected: total,
                found: matrix.nrows(),
            });
        }
        let deviation = hermitian_deviation(&matrix);
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::BadTrace { trace });
        }
        let min_eigenvalue = hermitian_eigenvalues(&matrix).into_iter().fold(f64::INFINITY, f64::min);
        if min_eigenvalue < -PSD_TOL {
            return Err(Error::NotPsd { min_eigenvalue });
        }
        Ok(DensityMatrix { dims, labels, matrix })
    }

    /// Density matrix with labels `0..n`.
    pub fn unlabeled(dims: Vec<usize>, matrix: DMatrix<Complex64>) -> Result<Self> {
        let labels = (0..dims.len()).collect();
        Self::new(dims, labels, matrix)
    }

    /// `|ψ><ψ|`, labeled `0..n`.
    pub fn from_pure(state: &PureState) -> Self {
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        DensityMatrix {
            dims: state.dims.clone(),
            labels: (0..state.dims.len()).collect(),
            matrix: &v * v.adjoint(),
        }
    }

    /// `Σ p_i |ψ_i><ψ_i|` over states of identical dimensions.
    pub fn mixture(weights: &[f64], states: &[PureState]) -> Result<Self> {
        if weights.len() != states.len() {
            return Err(Error::EnsembleMismatch {
                weights: weights.len(),
                states: states.len(),
            });
        }
        let first = states.first().ok_or(Error::EmptyInput)?;
        let n = first.dim();
        let mut m = DMatrix::zeros(n, n);
        for (&p, s) in weights.iter().zip(states) {
            if s.dims() != first.dims() {
                return Err(Error::InvalidEnsemble("members have different dimensions".into()));
            }
            let v = nalgebra::DVector::from_column_slice(s.amplitudes());
            m += (&v * v.adjoint()) * Complex64::new(p, 0.0);
        }
        Self::unlabeled(first.dims.clone(), m)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Eigenvalues in nonincreasing order, raw (not clamped).
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v = hermitian_eigenvalues(&self.matrix);
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    /// Positions (within `labels`) of the given labels, sorted by position.
    pub(crate) fn positions_of(&self, keep: &[usize]) -> Result<Vec<usize>> {
        if keep.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut positions = Vec::with_capacity(keep.len());
        for (i, l) in keep.iter().enumerate() {
            if keep[..i].contains(l) {
                return Err(Error::DuplicateLabel(*l));
            }
            let p = self.labels.iter().position(|x| x == l).ok_or(Error::UnknownLabel(*l))?;
            positions.push(p);
        }
        positions.sort_unstable();
        Ok(positions)
    }
}

pub(crate) fn hermitian_deviation(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigenvalues of a Hermitian matrix in solver order.
pub(crate) fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    match m.nrows() {
        0 => Vec::new(),
        1 => vec![m[(0, 0)].re],
        2 => {
            let a = m[(0, 0)].re;
            let d = m[(1, 1)].re;
            let b = m[(0, 1)];
            let mean = 0.5 * (a + d);
            let half = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            vec![mean + half, mean - half]
        }
        _ => nalgebra::SymmetricEigen::new(m.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect(),
    }
}

/// A subset of subsystem labels together with its complement.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bipartition {
    subset: Vec<usize>,
    complement: Vec<usize>,
}

impl Bipartition {
    /// Splits `labels` into `subset` and the rest. Both sides must be nonempty.
    pub fn new(subset: &[usize], labels: &[usize]) -> Result<Self> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut sub = Vec::with_capacity(subset.len());
        for &l in subset {
            if !labels.contains(&l) {
                return Err(Error::UnknownLabel(l));
            }
            if sub.contains(&l) {
                return Err(Error::DuplicateLabel(l));
            }
            sub.push(l);
        }
        sub.sort_unstable();
        let mut complement: Vec<usize> = labels.iter().copied().filter(|l| !sub.contains(l)).collect();
        complement.sort_unstable();
        if complement.is_empty() {
            return Err(Error::DegenerateBipartition);
        }
        Ok(Bipartition {
            subset: sub,
            complement,
        })
    }

    /// Bipartition of subsystems `0..n`.
    pub fn of(n: usize, subset: &[usize]) -> Result<Self> {
        let labels: Vec<usize> = (0..n).collect();
        Self::new(subset, &labels)
    }

    /// Bipartition from a bitmask over `0..n` (bit `i` set means label `i` is in the subset).
    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        let subset: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        Self::of(n, &subset)
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    /// The same cut with the two sides exchanged.
    pub fn swapped(&self) -> Self {
        Bipartition {
            subset: self.complement.clone(),
            complement: self.subset.clone(),
        }
    }

    /// Every nonempty proper subset of `0..n`, in increasing bitmask order.
    pub fn enumerate(n: usize) -> Result<Vec<Bipartition>> {
        if n < 2 {
            return Err(Error::TooFewSubsystems(n));
        }
        if n >= 64 {
            return Err(Error::InvalidParameter("too many subsystems to enumerate"));
        }
        (1..(1u64 << n) - 1).map(|mask| Self::from_mask(n, mask)).collect()
    }
}

/// Nonincreasing, nonnegative eigenvalues of a reduced state, with the
/// number of entries above the rank threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSpectrum {
    values: Vec<f64>,
    rank: usize,
}

impl SchmidtSpectrum {
    /// Builds a spectrum from (possibly noisy) eigenvalues. Entries must sum
    /// to 1 within 1e-9; negatives are clamped to zero and the result is
    /// renormalized if the drift exceeds 1e-12.
    pub fn new(values: &[f64], eps_rank: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        if eps_rank.is_nan() || eps_rank < 0.0 {
            return Err(Error::InvalidParameter("rank threshold must be nonnegative"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSpectrum("non-finite entry".into()));
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > SPECTRUM_SUM_TOL {
            return Err(Error::InvalidSpectrum(alloc::format!("entries sum to {sum}")));
        }
        if let Some(v) = values.iter().find(|&&v| v < -PSD_TOL) {
            return Err(Error::InvalidSpectrum(alloc::format!("negative entry {v}")));
        }
        let mut clamped: Vec<f64> = values.iter().map(|v| v.clamp(0.0, 1.0)).collect();
        let total: f64 = clamped.iter().sum();
        if (total - 1.0).abs() > RENORM_DRIFT {
            for v in &mut clamped {
                *v /= total;
            }
        }
        clamped.sort_by(|a, b| b.total_cmp(a));
        let rank = clamped.iter().filter(|&&v| v > eps_rank).count();
        Ok(SchmidtSpectrum { values: clamped, rank })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of values above the rank threshold used at construction.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Power sums `Σ λ^k` for `k = 1..=count`.
    pub fn moments(&self, count: usize) -> MomentVector {
        MomentVector::from_spectrum(&self.values, count)
    }

    /// Copy padded with zeros to length `len` (never truncates).
    pub fn padded(&self, len: usize) -> Self {
        let mut values = self.values.clone();
        if values.len() < len {
            values.resize(len, 0.0);
        }
        SchmidtSpectrum {
            values,
            rank: self.rank,
        }
    }
}

/// Power traces `[Tr ρ, Tr ρ², …, Tr ρ^K]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentVector {
    moments: Vec<f64>,
}

impl MomentVector {
    pub fn new(moments: Vec<f64>) -> Self {
        MomentVector { moments }
    }

    pub fn from_spectrum(values: &[f64], count: usize) -> Self {
        let mut moments = vec![0.0; count];
        for &l in values {
            let mut power = 1.0;
            for m in moments.iter_mut() {
                power *= l;
                *m += power;
            }
        }
        MomentVector { moments }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.moments
    }

    pub fn len(&self) -> usize {
        self.moments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moments.is_empty()
    }

    /// `Tr ρ^k` (1-based order).
    pub fn order(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.moments.get(i)).copied()
    }
}

/// Reduced state of a pure state on the subsystems in `keep`.
pub fn partial_trace_pure(state: &PureState, keep: &[usize]) -> Result<DensityMatrix> {
    let positions = validate_keep(keep, state.num_subsystems())?;
    let split = IndexSplit::new(state.dims(), &positions);
    let m = split.reshape(state.amplitudes());
    let rho = &m * m.adjoint();
    let dims = positions.iter().map(|&p| state.dims[p]).collect();
    Ok(DensityMatrix {
        dims,
        labels: positions,
        matrix: rho,
    })
}

/// Reduced state of a density matrix on the subsystems labeled `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let positions = rho.positions_of(keep)?;
    let split = IndexSplit::new(rho.dims(), &positions);
    let mut out = DMatrix::zeros(split.keep_dim(), split.keep_dim());
    let mut by_trace: Vec<Vec<(usize, usize)>> = vec![Vec::new(); split.trace_dim()];
    for (full, &(k, t)) in split.parts().iter().enumerate() {
        by_trace[t].push((k, full));
    }
    for group in &by_trace {
        for &(ki, fi) in group {
            for &(kj, fj) in group {
                out[(ki, kj)] += rho.matrix[(fi, fj)];
            }
        }
    }
    Ok(DensityMatrix {
        dims: positions.iter().map(|&p| rho.dims[p]).collect(),
        labels: positions.iter().map(|&p| rho.labels[p]).collect(),
        matrix: out,
    })
}

fn validate_keep(keep: &[usize], n: usize) -> Result<Vec<usize>> {
    if keep.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mut positions = Vec::with_capacity(keep.len());
    for &l in keep {
        if l >= n {
            return Err(Error::UnknownLabel(l));
        }
        if positions.contains(&l) {
            return Err(Error::DuplicateLabel(l));
        }
        positions.push(l);
    }
    positions.sort_unstable();
    Ok(positions)
}

/// Schmidt coefficients of `state` across `cut`: the spectrum of the reduced
/// state on `cut.subset()`.
pub fn schmidt_decompose(state: &PureState, cut: &Bipartition, eps_rank: f64) -> Result<SchmidtSpectrum> {
    let norm_sq: f64 = state.amplitudes().iter().map(|a| a.norm_sqr()).sum();
    if (norm_sq - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm_sq });
    }
    check_cut(cut, state.num_subsystems())?;
    let reduced = partial_trace_pure(state, cut.subset())?;
    SchmidtSpectrum::new(&hermitian_eigenvalues(reduced.matrix()), eps_rank)
}

pub(crate) fn check_cut(cut: &Bipartition, n: usize) -> Result<()> {
    if cut.subset.len() + cut.complement.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: cut.subset.len() + cut.complement.len(),
        });
    }
    if let Some(&l) = cut.subset.iter().chain(&cut.complement).find(|&&l| l >= n) {
        return Err(Error::UnknownLabel(l));
    }
    Ok(())
}

/// `[Tr ρ, …, Tr ρ^count]` from the Hermitian eigendecomposition of `rho`.
pub fn trace_powers(rho: &DensityMatrix, count: usize) -> Result<MomentVector> {
    if count == 0 {
        return Err(Error::InvalidParameter("moment count must be positive"));
    }
    let deviation = hermitian_deviation(rho.matrix());
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let values: Vec<f64> = hermitian_eigenvalues(rho.matrix())
        .into_iter()
        .map(|v| v.max(0.0))
        .collect();
    Ok(MomentVector::from_spectrum(&values, count))
}

fn gaussian_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Haar-distributed pure state: normalized vector of i.i.d. complex Gaussians.
pub fn random_pure_state(dims: &[usize], seed: u64) -> Result<PureState> {
    let total = checked_product(dims, DEFAULT_MAX_AMPLITUDES)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amplitudes = (0..total).map(|_| gaussian_complex(&mut rng)).collect();
    PureState::normalized(dims.to_vec(), amplitudes)
}

/// Uniform point on the probability simplex of dimension `d` (normalized
/// i.i.d. exponentials).
pub fn random_probability_vector(d: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = v.iter().sum();
    for x in &mut v {
        *x /= total;
    }
    v
}

/// Nonincreasing spectrum of the reduced state of a Haar-random pure state
/// on `d x d`.
pub fn random_reduced_spectrum(d: usize, seed: u64) -> Result<Vec<f64>> {
    let state = random_pure_state(&[d, d], seed)?;
    let split = IndexSplit::new(state.dims(), &[0]);
    let m = split.reshape(state.amplitudes());
    let mut values: Vec<f64> = hermitian_eigenvalues(&(&m * m.adjoint()))
        .into_iter()
        .map(|v| v.max(0.0))
        .collect();
    let total: f64 = values.iter().sum();
    for v in &mut values {
        *v /= total;
    }
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// Haar-random `d x d` unitary (QR of a complex Ginibre matrix with the
/// diagonal phases of R divided out).
pub fn random_unitary(d: usize, seed: u64) -> DMatrix<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::from_fn(d, d, |_, _| gaussian_complex(&mut rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let diag = r[(j, j)];
        let n = diag.norm();
        if n > 0.0 {
            let phase = diag / n;
            for i in 0..d {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}
