//! Subcommand implementations. Each returns the text for stdout and stderr
//! so the binary stays a thin shell and tests can call them directly.

use std::fmt::Write as _;
use std::path::Path;

use icem_core::ellipse::{figure1_points, figure2_sweep};
use icem_core::locc::locc_verdict;
use icem_core::measures::{
    concentratable_pure, concurrence_pure, icem_pure, icem_pure_with_rank, multipartite_report, CoefficientScheme,
    EPS_MEASURE,
};
use icem_core::roof::RoofConfig;
use icem_core::state::{schmidt_decompose, Bipartition, PureState};
use icem_core::swap::check_prop2;
use nalgebra::DVector;

use crate::args::{Cli, Command};
use crate::error::{CliError, CliResult};
use crate::format::{indices, list, sig};
use crate::parallel::roof_parallel;
use crate::statefile::{load_spectrum, load_state, LoadedState};

/// Largest ancilla count whose full outcome table is printed.
const MAX_PRINTED_ANCILLAS: usize = 6;

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn stdout(stdout: String) -> Self {
        Output {
            stdout,
            stderr: String::new(),
        }
    }
}

struct Settings {
    scheme: CoefficientScheme,
    eps_rank: f64,
    force_rank: Option<usize>,
}

pub fn run(cli: &Cli) -> CliResult<Output> {
    let settings = Settings {
        scheme: cli.scheme.into(),
        eps_rank: cli.rank_eps,
        force_rank: cli.force_rank,
    };
    if settings.eps_rank.is_nan() || settings.eps_rank < 0.0 {
        return Err(CliError::Semantic("--rank-eps must be nonnegative".into()));
    }
    if settings.force_rank == Some(0) {
        return Err(CliError::Semantic("--force-rank must be at least 1".into()));
    }
    let rank_applies = matches!(cli.command, Command::Measure { .. } | Command::Swaptest { .. });
    if settings.force_rank.is_some() && !rank_applies {
        return Err(CliError::Semantic(
            "--force-rank applies to measure and swaptest only".into(),
        ));
    }
    match &cli.command {
        Command::Measure { file, cut } => measure(&settings, file, cut).map(Output::stdout),
        Command::Multipartite { file } => multipartite(&settings, file, true).map(Output::stdout),
        Command::Classify { file } => multipartite(&settings, file, false).map(Output::stdout),
        Command::Locc { x, y } => locc(&settings, x, y).map(Output::stdout),
        Command::Roof {
            file,
            cut,
            restarts,
            seed,
            ensemble_size,
            tol,
            patience,
            max_iters,
        } => {
            let config = RoofConfig {
                restarts: *restarts,
                tol: *tol,
                patience: *patience,
                ensemble_size: *ensemble_size,
                seed: *seed,
                max_iters: *max_iters,
                eps_rank: settings.eps_rank,
            };
            roof(&settings, file, cut, config).map(Output::stdout)
        }
        Command::Swaptest {
            file,
            cut,
            r,
            shots,
            shot_seed,
            max_amplitudes,
        } => swaptest(&settings, file, cut, *r, *shots, *shot_seed, *max_amplitudes).map(Output::stdout),
        Command::Figure1 { samples } => figure1(*samples).map(Output::stdout),
        Command::Figure2 { samples } => figure2(&settings, *samples),
    }
}

/// A pure state from the file; rank-one density matrices are accepted.
fn load_pure(path: &Path, eps_rank: f64) -> CliResult<PureState> {
    match load_state(path)? {
        LoadedState::Pure(s) => Ok(s),
        LoadedState::Density(rho) => {
            let eigen = rho.matrix().clone().symmetric_eigen();
            let rank = eigen.eigenvalues.iter().filter(|&&x| x > eps_rank).count();
            if rank != 1 {
                return Err(CliError::Semantic(format!(
                    "{}: density matrix has rank {rank}; this command needs a pure state (see `icem roof`)",
                    path.display()
                )));
            }
            let top = eigen.eigenvalues.imax();
            let v: DVector<_> = eigen.eigenvectors.column(top).into_owned();
            Ok(PureState::normalized(rho.dims().to_vec(), v.as_slice().to_vec())?)
        }
    }
}

fn subsystem_dim(dims: &[usize], positions: &[usize]) -> usize {
    positions.iter().map(|&p| dims[p]).product()
}

fn describe_cut(cut: &Bipartition) -> String {
    format!("{} | {}", indices(cut.subset()), indices(cut.complement()))
}

fn measure(s: &Settings, file: &Path, cut: &[usize]) -> CliResult<String> {
    let state = load_pure(file, s.eps_rank)?;
    let cut = Bipartition::of(state.num_subsystems(), cut)?;
    let spec = schmidt_decompose(&state, &cut, s.eps_rank)?;
    let report = match s.force_rank {
        Some(rank) => icem_pure_with_rank(&spec, s.scheme, rank)?,
        None => icem_pure(&spec, s.scheme)?,
    };
    let d = subsystem_dim(state.dims(), cut.subset()).min(subsystem_dim(state.dims(), cut.complement()));
    let concurrence = concurrence_pure(&spec, d)?;
    let concentratable = concentratable_pure(&state, &cut)?;

    let mut out = String::new();
    writeln!(out, "dims: {:?}", state.dims()).unwrap();
    writeln!(out, "cut: {}", describe_cut(&cut)).unwrap();
    writeln!(out, "scheme: {}", s.scheme.name()).unwrap();
    writeln!(out, "schmidt spectrum: {}", list(spec.values())).unwrap();
    let forced = if s.force_rank.is_some() { " (forced)" } else { "" };
    writeln!(out, "rank: {}{forced}", report.rank_used).unwrap();
    writeln!(out, "icem: {}", sig(report.value)).unwrap();
    for (i, c) in report.components.iter().enumerate() {
        writeln!(out, "C_{i}: {}", sig(*c)).unwrap();
    }
    writeln!(out, "concurrence: {}", sig(concurrence)).unwrap();
    writeln!(out, "concentratable: {}", sig(concentratable)).unwrap();
    let verdict = if report.value.abs() < EPS_MEASURE {
        "separable"
    } else {
        "entangled"
    };
    writeln!(out, "verdict: {verdict}").unwrap();
    Ok(out)
}

fn multipartite(s: &Settings, file: &Path, per_cut: bool) -> CliResult<String> {
    let state = load_pure(file, s.eps_rank)?;
    let report = multipartite_report(&state, s.scheme, s.eps_rank)?;
    let mut out = String::new();
    writeln!(out, "dims: {:?}", state.dims()).unwrap();
    writeln!(out, "scheme: {}", s.scheme.name()).unwrap();
    if per_cut {
        for (cut, value) in &report.per_cut {
            writeln!(out, "cut {}: {}", describe_cut(cut), sig(*value)).unwrap();
        }
    }
    writeln!(out, "arithmetic mean: {}", sig(report.arithmetic)).unwrap();
    writeln!(out, "geometric mean: {}", sig(report.geometric)).unwrap();
    writeln!(out, "verdict: {}", report.verdict.name()).unwrap();
    Ok(out)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn locc(s: &Settings, x: &Path, y: &Path) -> CliResult<String> {
    let sx = load_spectrum(x, s.eps_rank)?;
    let sy = load_spectrum(y, s.eps_rank)?;
    let v = locc_verdict(&sx, &sy, s.scheme)?;
    let mut out = String::new();
    writeln!(out, "x: {}", list(sx.values())).unwrap();
    writeln!(out, "y: {}", list(sy.values())).unwrap();
    writeln!(out, "x -> y: {}", yes_no(v.forward)).unwrap();
    writeln!(out, "y -> x: {}", yes_no(v.backward)).unwrap();
    writeln!(out, "relation: {}", v.relation().name()).unwrap();
    writeln!(out, "scheme: {}", s.scheme.name()).unwrap();
    writeln!(out, "i\tC_i(x)\tC_i(y)\tC_i(x) >= C_i(y)").unwrap();
    for row in &v.components {
        writeln!(
            out,
            "{}\t{}\t{}\t{}",
            row.index,
            sig(row.x),
            sig(row.y),
            yes_no(row.holds)
        )
        .unwrap();
    }
    writeln!(
        out,
        "components non-increasing x -> y: {}",
        yes_no(v.prop1_forward_consistent)
    )
    .unwrap();
    writeln!(
        out,
        "components non-increasing y -> x: {}",
        yes_no(v.prop1_backward_consistent)
    )
    .unwrap();
    Ok(out)
}

fn roof(s: &Settings, file: &Path, cut: &[usize], config: RoofConfig) -> CliResult<String> {
    let rho = load_state(file)?.density();
    let cut = Bipartition::new(cut, rho.labels())?;
    let (result, problem) = roof_parallel(&rho, &cut, s.scheme, config)?;
    let error = result.best_ensemble.reconstruction_error(&rho)?;
    let mut out = String::new();
    writeln!(out, "dims: {:?}", rho.dims()).unwrap();
    writeln!(out, "cut: {}", describe_cut(problem.cut())).unwrap();
    writeln!(out, "scheme: {}", s.scheme.name()).unwrap();
    writeln!(out, "rank: {}", problem.rank()).unwrap();
    writeln!(out, "ensemble size: {}", problem.ensemble_size()).unwrap();
    writeln!(out, "restarts: {}", result.restarts_used).unwrap();
    writeln!(out, "seed: {}", config.seed).unwrap();
    writeln!(out, "roof upper bound: {}", sig(result.value)).unwrap();
    writeln!(out, "converged: {}", result.converged).unwrap();
    writeln!(out, "reconstruction error: {}", sig(error)).unwrap();
    writeln!(out, "weights: {}", list(result.best_ensemble.weights())).unwrap();
    Ok(out)
}

fn swaptest(
    s: &Settings,
    file: &Path,
    cut: &[usize],
    r: Option<usize>,
    shots: Option<usize>,
    shot_seed: u64,
    max_amplitudes: usize,
) -> CliResult<String> {
    let state = load_pure(file, s.eps_rank)?;
    let cut = Bipartition::of(state.num_subsystems(), cut)?;
    let force_rank = match (r, s.force_rank) {
        (Some(_), Some(_)) => return Err(CliError::Semantic("give either --r or --force-rank, not both".into())),
        (Some(r), None) => Some(r + 1),
        (None, rank) => rank,
    };
    let rep = check_prop2(&state, &cut, s.eps_rank, force_rank, max_amplitudes)?;
    let mut out = String::new();
    writeln!(out, "cut: {}", describe_cut(&cut)).unwrap();
    writeln!(out, "rank: {}", rep.rank).unwrap();
    writeln!(out, "ancillas: {}", rep.r).unwrap();
    writeln!(out, "copies: {}", rep.r + 1).unwrap();
    writeln!(out, "p(0): {}", sig(rep.outcome.p_all_zero())).unwrap();
    writeln!(out, "1 - p(0) simulated: {}", sig(rep.simulated)).unwrap();
    writeln!(out, "1 - p(0) closed form: {}", sig(rep.closed_form)).unwrap();
    writeln!(out, "icem binomial: {}", sig(rep.icem_binomial)).unwrap();
    writeln!(out, "icem printed: {}", sig(rep.icem_permutation)).unwrap();
    writeln!(out, "|simulated - closed form|: {}", sig(rep.simulated_vs_closed_form)).unwrap();
    writeln!(out, "|simulated - binomial|: {}", sig(rep.simulated_vs_binomial)).unwrap();
    writeln!(out, "|simulated - printed|: {}", sig(rep.simulated_vs_permutation)).unwrap();
    if rep.r <= MAX_PRINTED_ANCILLAS {
        for (z, p) in rep.outcome.probabilities().iter().enumerate() {
            let bits = if rep.r == 0 {
                "-".to_string()
            } else {
                format!("{z:0width$b}", width = rep.r)
            };
            writeln!(out, "p({bits}): {}", sig(*p)).unwrap();
        }
    }
    if let Some(shots) = shots {
        let est = rep.outcome.sample(shots, shot_seed)?;
        writeln!(out, "shots: {}", est.shots).unwrap();
        writeln!(out, "p(0) estimate: {} +- {}", sig(est.p_zero), sig(est.std_error)).unwrap();
        writeln!(out, "1 - p(0) estimate: {}", sig(1.0 - est.p_zero)).unwrap();
    }
    Ok(out)
}

fn csv_string(rows: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> Result<(), csv::Error>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    rows(&mut w)?;
    let bytes = w.into_inner().map_err(|e| CliError::Semantic(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is ASCII"))
}

// CSV values are written at full precision so the points keep satisfying
// the locus equation after a round trip.
fn figure1(samples: usize) -> CliResult<String> {
    if samples == 0 {
        return Err(CliError::Semantic("--samples must be positive".into()));
    }
    csv_string(|w| {
        w.write_record(["beta1", "beta2"])?;
        for (b1, b2) in figure1_points(samples) {
            w.write_record([b1.to_string(), b2.to_string()])?;
        }
        Ok(())
    })
}

fn figure2(s: &Settings, samples: usize) -> CliResult<Output> {
    let sweep = figure2_sweep(samples, s.scheme, s.eps_rank)?;
    let stdout = csv_string(|w| {
        w.write_record(["t", "icem_phi2", "icem_phi1", "equal_flag"])?;
        for row in &sweep.rows {
            w.write_record([
                row.t.to_string(),
                row.curve.to_string(),
                row.reference.to_string(),
                u8::from(row.equal).to_string(),
            ])?;
        }
        Ok(())
    })?;
    let mut stderr = format!("equality points: {}\n", sweep.equality_points.len());
    for p in &sweep.equality_points {
        writeln!(
            stderr,
            "t={} beta1={} beta2={} beta3={}",
            sig(p.t),
            sig(p.beta1),
            sig(p.beta2),
            sig(p.beta3)
        )
        .unwrap();
    }
    Ok(Output { stdout, stderr })
}
