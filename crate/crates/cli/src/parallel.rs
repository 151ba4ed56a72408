//! Restart-parallel convex-roof search.

use icem_core::measures::CoefficientScheme;
use icem_core::roof::{best_of, RoofConfig, RoofProblem, RoofResult};
use icem_core::state::{Bipartition, DensityMatrix};
use rayon::prelude::*;

use crate::error::{CliError, CliResult};

/// Overrides the worker count when set to a positive integer.
pub const THREADS_ENV: &str = "ICEM_THREADS";

fn pool() -> CliResult<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        let threads: usize = raw
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Semantic(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
        builder = builder.num_threads(threads);
    }
    builder
        .build()
        .map_err(|e| CliError::Semantic(format!("thread pool: {e}")))
}

/// Same result as [`icem_core::roof::roof_minimize`], with restarts spread
/// over a thread pool.
pub fn roof_parallel(
    rho: &DensityMatrix,
    cut: &Bipartition,
    scheme: CoefficientScheme,
    config: RoofConfig,
) -> CliResult<(RoofResult, RoofProblem)> {
    let problem = RoofProblem::new(rho, cut, scheme, config)?;
    let outcomes = pool()?.install(|| {
        (0..problem.restarts())
            .into_par_iter()
            .map(|i| problem.run_restart(i))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok((best_of(outcomes)?, problem))
}
