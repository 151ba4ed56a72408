//! Statevector simulation of the chained SWAP test.
//!
//! `r + 1` copies of `|ψ>` sit next to `r` ancilla qubits prepared in `|0>`.
//! Every ancilla gets a Hadamard, ancilla `k` then controls a swap of the
//! `A` subsystems of copies `k` and `k + 1`, and a final Hadamard layer
//! precedes measurement. The `B` parts of the copies are spectators.
//!
//! Writing `P_x` for the copy permutation applied on ancilla branch `x`, the
//! all-zero probability is
//!
//! ```text
//! p(0…0) = 4^{-r} Σ_{x, y} <ψ^{⊗(r+1)}| P_x^† P_y |ψ^{⊗(r+1)}>
//! ```
//!
//! and each expectation is a product of `Tr ρ_A^ℓ` over the cycles of
//! `P_x^{-1} P_y`. That gives an oracle in terms of moments alone
//! ([`p_zero_closed_form`]).

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
// float math without std
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::measures::{icem_pure_with_rank, CoefficientScheme};
use crate::state::{check_cut, schmidt_decompose, Bipartition, IndexSplit, MomentVector, PureState};

/// Default cap on the simulated amplitude count `2^r · D^{r+1}`.
pub const DEFAULT_MAX_SIM_AMPLITUDES: usize = 1 << 22;

/// Largest ancilla count the closed forms enumerate.
const MAX_CLOSED_FORM_R: usize = 12;

/// Exact distribution over ancilla outcomes.
///
/// Index `z` encodes the bitstring `z_1 … z_r` with ancilla 1 as the most
/// significant bit, so formatting `z` in binary with `r` digits reads left to
/// right in ancilla order.
#[derive(Debug, Clone, PartialEq)]
pub struct SwapTestOutcome {
    r: usize,
    probabilities: Vec<f64>,
}

impl SwapTestOutcome {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// `p(z)` for ancilla outcomes `z[0] = z_1, …`.
    pub fn probability(&self, z: &[bool]) -> Option<f64> {
        if z.len() != self.r {
            return None;
        }
        let index = z.iter().fold(0usize, |acc, &bit| acc << 1 | bit as usize);
        self.probabilities.get(index).copied()
    }

    pub fn p_all_zero(&self) -> f64 {
        self.probabilities[0]
    }

    /// Draws `shots` measurement records and estimates `p(0…0)`.
    pub fn sample(&self, shots: usize, seed: u64) -> Result<ShotEstimate> {
        if shots == 0 {
            return Err(Error::InvalidParameter("shot count must be positive"));
        }
        let mut cumulative = Vec::with_capacity(self.probabilities.len());
        let mut acc = 0.0;
        for p in &self.probabilities {
            acc += p.max(0.0);
            cumulative.push(acc);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut zeros = 0usize;
        for _ in 0..shots {
            let u: f64 = rng.gen::<f64>() * acc;
            let outcome = cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1);
            if outcome == 0 {
                zeros += 1;
            }
        }
        let p = zeros as f64 / shots as f64;
        Ok(ShotEstimate {
            shots,
            zeros,
            p_zero: p,
            std_error: (p * (1.0 - p) / shots as f64).sqrt(),
        })
    }
}

/// Monte-Carlo estimate of `p(0…0)` from sampled shots.
#[derive(Debug, Clone, PartialEq)]
pub struct ShotEstimate {
    pub shots: usize,
    pub zeros: usize,
    pub p_zero: f64,
    pub std_error: f64,
}

/// Circuit description: ancilla count, controlled-swap order and size cap.
#[derive(Debug, Clone, PartialEq)]
pub struct SwapTestCircuit {
    r: usize,
    order: Vec<usize>,
    max_amplitudes: usize,
}

impl SwapTestCircuit {
    /// Ancillas `1..=r` applied in increasing order.
    pub fn new(r: usize) -> Self {
        SwapTestCircuit {
            r,
            order: (1..=r).collect(),
            max_amplitudes: DEFAULT_MAX_SIM_AMPLITUDES,
        }
    }

    /// Applies the controlled swaps in the given order (a permutation of `1..=r`).
    pub fn with_order(mut self, order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; self.r];
        if order.len() != self.r {
            return Err(Error::LengthMismatch {
                expected: self.r,
                found: order.len(),
            });
        }
        for &k in &order {
            if k == 0 || k > self.r || seen[k - 1] {
                return Err(Error::InvalidParameter("swap order must be a permutation of 1..=r"));
            }
            seen[k - 1] = true;
        }
        self.order = order;
        Ok(self)
    }

    pub fn with_cap(mut self, max_amplitudes: usize) -> Self {
        self.max_amplitudes = max_amplitudes;
        self
    }

    pub fn run(&self, state: &PureState, cut: &Bipartition) -> Result<SwapTestOutcome> {
        check_cut(cut, state.num_subsystems())?;
        let r = self.r;
        let split = IndexSplit::new(state.dims(), cut.subset());
        let (dim_a, dim_b) = (split.keep_dim(), split.trace_dim());
        let d = dim_a * dim_b;

        let copies = r + 1;
        let mut block: usize = 1;
        for _ in 0..copies {
            block = block.checked_mul(d).ok_or(Error::CapacityExceeded {
                requested: usize::MAX,
                cap: self.max_amplitudes,
            })?;
        }
        let total = block
            .checked_mul(1usize.checked_shl(r as u32).unwrap_or(0))
            .filter(|&t| t > 0 && t <= self.max_amplitudes)
            .ok_or(Error::CapacityExceeded {
                requested: block.saturating_mul(1usize.checked_shl(r as u32).unwrap_or(usize::MAX)),
                cap: self.max_amplitudes,
            })?;

        // copy amplitude in (a, b) order
        let m = split.reshape(state.amplitudes());
        let single: Vec<Complex64> = (0..d).map(|c| m[(c / dim_b, c % dim_b)]).collect();

        let mut amps = vec![Complex64::new(0.0, 0.0); total];
        let mut copy_state = vec![Complex64::new(1.0, 0.0)];
        for _ in 0..copies {
            let mut next = Vec::with_capacity(copy_state.len() * d);
            for &x in &copy_state {
                for &y in &single {
                    next.push(x * y);
                }
            }
            copy_state = next;
        }
        amps[..block].copy_from_slice(&copy_state);

        // stride of copy j (1-based) inside a block
        let strides: Vec<usize> = (1..=copies).map(|j| d.pow((copies - j) as u32)).collect();
        let ancilla_bit = |k: usize| r - k;

        for k in 1..=r {
            hadamard(&mut amps, block, ancilla_bit(k));
        }
        for &k in &self.order {
            let bit = ancilla_bit(k);
            let (sk, sk1) = (strides[k - 1], strides[k]);
            for anc in 0..(1usize << r) {
                if anc >> bit & 1 == 0 {
                    continue;
                }
                let base = anc * block;
                for idx in 0..block {
                    let ck = idx / sk % d;
                    let ck1 = idx / sk1 % d;
                    let (ak, bk) = (ck / dim_b, ck % dim_b);
                    let (ak1, bk1) = (ck1 / dim_b, ck1 % dim_b);
                    if ak < ak1 {
                        let swapped_k = ak1 * dim_b + bk;
                        let swapped_k1 = ak * dim_b + bk1;
                        let partner = idx - ck * sk - ck1 * sk1 + swapped_k * sk + swapped_k1 * sk1;
                        amps.swap(base + idx, base + partner);
                    }
                }
            }
        }
        for k in 1..=r {
            hadamard(&mut amps, block, ancilla_bit(k));
        }

        let probabilities = amps
            .chunks(block)
            .map(|chunk| chunk.iter().map(|a| a.norm_sqr()).sum())
            .collect();
        Ok(SwapTestOutcome { r, probabilities })
    }
}

fn hadamard(amps: &mut [Complex64], block: usize, bit: usize) {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let groups = amps.len() / block;
    for anc in 0..groups {
        if anc >> bit & 1 == 1 {
            continue;
        }
        let partner = anc | 1 << bit;
        for i in 0..block {
            let a = amps[anc * block + i];
            let b = amps[partner * block + i];
            amps[anc * block + i] = (a + b) * h;
            amps[partner * block + i] = (a - b) * h;
        }
    }
}

/// Simulates the chained SWAP test with `r` ancillas on the `A` side of `cut`.
pub fn simulate_swap_test(state: &PureState, cut: &Bipartition, r: usize) -> Result<SwapTestOutcome> {
    SwapTestCircuit::new(r).run(state, cut)
}

/// Copy permutation `P_x`: ancilla `k` (bit `x[k-1]`) swaps copies `k-1, k`
/// (0-based), applied for `k = 1..=r` in order. `perm[i]` is where copy `i` goes.
fn branch_permutation(x: usize, r: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..=r).collect();
    for k in 1..=r {
        if x >> (k - 1) & 1 == 1 {
            // compose the transposition (k-1 k) after perm
            for p in perm.iter_mut() {
                if *p == k - 1 {
                    *p = k;
                } else if *p == k {
                    *p = k - 1;
                }
            }
        }
    }
    perm
}

fn cycle_type(perm: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut lengths = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        lengths.push(len);
    }
    lengths.sort_unstable_by(|a, b| b.cmp(a));
    lengths
}

/// Weight of each cycle type (partition of `r + 1`, descending) in
/// `p(0…0) = Σ weight · Π_ℓ Tr ρ^ℓ`.
pub fn cycle_type_weights(r: usize) -> Result<BTreeMap<Vec<usize>, f64>> {
    if r > MAX_CLOSED_FORM_R {
        return Err(Error::InvalidParameter("closed form limited to r <= 12"));
    }
    let branches: Vec<Vec<usize>> = (0..1usize << r).map(|x| branch_permutation(x, r)).collect();
    let inverses: Vec<Vec<usize>> = branches
        .iter()
        .map(|p| {
            let mut inv = vec![0; p.len()];
            for (i, &j) in p.iter().enumerate() {
                inv[j] = i;
            }
            inv
        })
        .collect();
    let scale = 0.25f64.powi(r as i32);
    let mut weights = BTreeMap::new();
    for inv_x in &inverses {
        for p_y in &branches {
            // P_x^{-1} ∘ P_y
            let composed: Vec<usize> = p_y.iter().map(|&j| inv_x[j]).collect();
            *weights.entry(cycle_type(&composed)).or_insert(0.0) += scale;
        }
    }
    Ok(weights)
}

fn moment_product(m: &MomentVector, lengths: &[usize]) -> f64 {
    lengths
        .iter()
        .map(|&l| if l == 1 { 1.0 } else { m.as_slice()[l - 1] })
        .product()
}

/// Exact all-zero probability of the chained SWAP test from the moments
/// `Tr ρ_A^k`, `k = 1..=r+1`.
pub fn p_zero_closed_form(m: &MomentVector, r: usize) -> Result<f64> {
    if m.len() < r + 1 {
        return Err(Error::InsufficientMoments {
            needed: r + 1,
            found: m.len(),
        });
    }
    let weights = cycle_type_weights(r)?;
    Ok(weights.iter().map(|(lengths, w)| w * moment_product(m, lengths)).sum())
}

/// Single-sum expansion `2^{-r} Σ_{X ⊆ {1..r}} Π_{runs of X} Tr ρ^{|run|+1}`.
///
/// It agrees with the circuit for `r <= 2` only; from `r = 3` on the circuit
/// also picks up interference terms between different branches.
pub fn p_zero_subset_expansion(m: &MomentVector, r: usize) -> Result<f64> {
    if m.len() < r + 1 {
        return Err(Error::InsufficientMoments {
            needed: r + 1,
            found: m.len(),
        });
    }
    if r > MAX_CLOSED_FORM_R {
        return Err(Error::InvalidParameter("closed form limited to r <= 12"));
    }
    let mut total = 0.0;
    for x in 0..1usize << r {
        let lengths = cycle_type(&branch_permutation(x, r));
        total += moment_product(m, &lengths);
    }
    Ok(total * 0.5f64.powi(r as i32))
}

/// Side-by-side check of `C = 1 - p(0…0)` against the moment formula.
#[derive(Debug, Clone, PartialEq)]
pub struct Prop2Report {
    /// Schmidt rank `r + 1` that fixed the copy count.
    pub rank: usize,
    pub r: usize,
    /// `1 - p(0…0)` from the statevector simulation.
    pub simulated: f64,
    /// `1 - p(0…0)` from [`p_zero_closed_form`].
    pub closed_form: f64,
    pub icem_binomial: f64,
    pub icem_permutation: f64,
    pub simulated_vs_closed_form: f64,
    pub simulated_vs_binomial: f64,
    pub simulated_vs_permutation: f64,
    pub closed_form_vs_binomial: f64,
    /// The full outcome distribution behind `simulated`.
    pub outcome: SwapTestOutcome,
}

/// Runs the circuit with `r + 1` copies, `r + 1` being the Schmidt rank
/// across `cut` (or `force_rank`), and compares against both weight schemes.
pub fn check_prop2(
    state: &PureState,
    cut: &Bipartition,
    eps_rank: f64,
    force_rank: Option<usize>,
    max_amplitudes: usize,
) -> Result<Prop2Report> {
    let spec = schmidt_decompose(state, cut, eps_rank)?;
    let rank = force_rank.unwrap_or(spec.rank());
    if rank == 0 {
        return Err(Error::InvalidParameter("rank must be positive"));
    }
    let r = rank - 1;
    let outcome = SwapTestCircuit::new(r).with_cap(max_amplitudes).run(state, cut)?;
    let moments = spec.moments(rank);
    let simulated = 1.0 - outcome.p_all_zero();
    let closed_form = 1.0 - p_zero_closed_form(&moments, r)?;
    let icem_binomial = icem_pure_with_rank(&spec, CoefficientScheme::Binomial, rank)?.value;
    let icem_permutation = icem_pure_with_rank(&spec, CoefficientScheme::Permutation, rank)?.value;
    Ok(Prop2Report {
        rank,
        r,
        simulated,
        closed_form,
        icem_binomial,
        icem_permutation,
        simulated_vs_closed_form: (simulated - closed_form).abs(),
        simulated_vs_binomial: (simulated - icem_binomial).abs(),
        simulated_vs_permutation: (simulated - icem_permutation).abs(),
        closed_form_vs_binomial: (closed_form - icem_binomial).abs(),
        outcome,
    })
}
