use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use icem_core::measures::CoefficientScheme;
use icem_core::roof::RoofConfig;
use icem_core::state::EPS_RANK;
use icem_core::swap::DEFAULT_MAX_SIM_AMPLITUDES;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    /// Weights C(r, i)
    Binomial,
    /// Weights r!/(r-i)!
    Printed,
}

impl From<SchemeArg> for CoefficientScheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Binomial => CoefficientScheme::Binomial,
            SchemeArg::Printed => CoefficientScheme::Permutation,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "icem",
    version,
    about = "Entanglement measures built from all trace powers of a reduced state"
)]
pub struct Cli {
    /// Coefficient weights for the measure
    #[arg(long, global = true, value_enum, default_value_t = SchemeArg::Binomial)]
    pub scheme: SchemeArg,
    /// Eigenvalues at or below this count as zero when finding the Schmidt rank
    #[arg(long = "rank-eps", global = true, default_value_t = EPS_RANK)]
    pub rank_eps: f64,
    /// Pin the Schmidt rank r + 1 instead of detecting it (measure, swaptest)
    #[arg(long = "force-rank", global = true)]
    pub force_rank: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Measure, components, concurrence and concentratable entanglement across one cut
    Measure {
        /// Pure-state JSON file (a rank-1 density matrix is also accepted)
        file: PathBuf,
        /// Subsystem indices on side A, comma separated
        #[arg(long, value_delimiter = ',', default_value = "0")]
        cut: Vec<usize>,
    },
    /// Arithmetic and geometric means over every bipartition
    Multipartite {
        /// Pure-state JSON file
        file: PathBuf,
    },
    /// Separable / entangled / genuinely entangled verdict
    Classify {
        /// Pure-state JSON file
        file: PathBuf,
    },
    /// LOCC convertibility of two Schmidt spectra and the component comparison
    Locc {
        /// Spectrum JSON file of the source state
        x: PathBuf,
        /// Spectrum JSON file of the target state
        y: PathBuf,
    },
    /// Convex-roof upper bound for a mixed state
    Roof {
        /// Pure or density JSON file
        file: PathBuf,
        /// Subsystem indices on side A, comma separated
        #[arg(long, value_delimiter = ',', default_value = "0")]
        cut: Vec<usize>,
        /// Independent optimizer starts; the first is the eigen-ensemble
        #[arg(long, default_value_t = RoofConfig::default().restarts)]
        restarts: usize,
        /// Seed for the random starts
        #[arg(long, default_value_t = RoofConfig::default().seed)]
        seed: u64,
        /// Decomposition size m (default: rank squared, at most 16)
        #[arg(long = "ensemble-size")]
        ensemble_size: Option<usize>,
        /// Improvement below this over `patience` iterations ends a start
        #[arg(long, default_value_t = RoofConfig::default().tol)]
        tol: f64,
        /// Iterations allowed without `tol` improvement
        #[arg(long, default_value_t = RoofConfig::default().patience)]
        patience: usize,
        /// Iteration limit per start
        #[arg(long = "max-iters", default_value_t = RoofConfig::default().max_iters)]
        max_iters: usize,
    },
    /// Simulate the chained SWAP test and compare with the moment formula
    Swaptest {
        /// Pure-state JSON file
        file: PathBuf,
        /// Subsystem indices on side A, comma separated
        #[arg(long, value_delimiter = ',', default_value = "0")]
        cut: Vec<usize>,
        /// Ancilla count (default: Schmidt rank minus one)
        #[arg(long)]
        r: Option<usize>,
        /// Also estimate p(0...0) from this many sampled shots
        #[arg(long)]
        shots: Option<usize>,
        /// Seed for shot sampling
        #[arg(long = "shot-seed", default_value_t = 0)]
        shot_seed: u64,
        /// Cap on simulated amplitudes 2^r * D^(r+1)
        #[arg(long = "max-amplitudes", default_value_t = DEFAULT_MAX_SIM_AMPLITUDES)]
        max_amplitudes: usize,
    },
    /// CSV of points (beta1, beta2) with the purity of (1/2, 1/3, 1/6)
    Figure1 {
        /// Points at evenly spaced angles
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// CSV comparing states on that ellipse with (1/2, 1/3, 1/6)
    Figure2 {
        /// Evenly spaced angles; crossings are added as extra rows
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}
