//! JSON state and spectrum files.
//!
//! ```json
//! {"dims": [2, 2], "kind": "pure", "amplitudes": [[0.7071, 0], [0, 0], [0, 0], [0.7071, 0]]}
//! {"dims": [2], "kind": "density", "matrix": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]}
//! {"values": [0.5, 0.4, 0.1]}
//! ```
//!
//! Amplitudes are row-major with the last subsystem fastest.

use std::fs;
use std::path::Path;

use icem_core::state::{DensityMatrix, PureState, SchmidtSpectrum};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Pure,
    Density,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumFile {
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LoadedState {
    Pure(PureState),
    Density(DensityMatrix),
}

impl LoadedState {
    pub fn dims(&self) -> &[usize] {
        match self {
            LoadedState::Pure(s) => s.dims(),
            LoadedState::Density(r) => r.dims(),
        }
    }

    /// The density matrix, projecting pure states.
    pub fn density(&self) -> DensityMatrix {
        match self {
            LoadedState::Pure(s) => DensityMatrix::from_pure(s),
            LoadedState::Density(r) => r.clone(),
        }
    }
}

/// A well-formed file whose payload is not a valid state.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FieldError {
    #[error("{0}")]
    Shape(String),
    #[error("{field}: {source}")]
    Invalid {
        field: &'static str,
        source: icem_core::Error,
    },
}

fn complex(pair: &[f64; 2]) -> Complex64 {
    Complex64::new(pair[0], pair[1])
}

impl StateFile {
    pub fn from_pure(state: &PureState) -> Self {
        StateFile {
            dims: state.dims().to_vec(),
            kind: Kind::Pure,
            amplitudes: Some(state.amplitudes().iter().map(|z| [z.re, z.im]).collect()),
            matrix: None,
        }
    }

    pub fn from_density(rho: &DensityMatrix) -> Self {
        let m = rho.matrix();
        StateFile {
            dims: rho.dims().to_vec(),
            kind: Kind::Density,
            amplitudes: None,
            matrix: Some(
                (0..m.nrows())
                    .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                    .collect(),
            ),
        }
    }

    /// Validates the payload into a state.
    pub fn to_state(&self) -> Result<LoadedState, FieldError> {
        match self.kind {
            Kind::Pure => {
                if self.matrix.is_some() {
                    return Err(FieldError::Shape("matrix: not allowed for kind \"pure\"".into()));
                }
                let amps = self
                    .amplitudes
                    .as_ref()
                    .ok_or_else(|| FieldError::Shape("amplitudes: missing for kind \"pure\"".into()))?;
                let amps = amps.iter().map(complex).collect();
                PureState::new(self.dims.clone(), amps)
                    .map(LoadedState::Pure)
                    .map_err(|source| FieldError::Invalid {
                        field: "amplitudes",
                        source,
                    })
            }
            Kind::Density => {
                if self.amplitudes.is_some() {
                    return Err(FieldError::Shape("amplitudes: not allowed for kind \"density\"".into()));
                }
                let rows = self
                    .matrix
                    .as_ref()
                    .ok_or_else(|| FieldError::Shape("matrix: missing for kind \"density\"".into()))?;
                let n = rows.len();
                if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
                    return Err(FieldError::Shape(format!(
                        "matrix[{i}]: row has {} entries, expected {n}",
                        row.len()
                    )));
                }
                let m = DMatrix::from_fn(n, n, |i, j| complex(&rows[i][j]));
                DensityMatrix::unlabeled(self.dims.clone(), m)
                    .map(LoadedState::Density)
                    .map_err(|source| FieldError::Invalid {
                        field: "matrix",
                        source,
                    })
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state files always serialize")
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> CliResult<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let at = e.path().to_string();
        let inner = e.into_inner();
        CliError::parse(path, format!("field `{at}`: {inner}"))
    })
}

pub fn parse_state(path: &Path, text: &str) -> CliResult<LoadedState> {
    let file: StateFile = parse_json(path, text)?;
    file.to_state().map_err(|e| match e {
        FieldError::Invalid {
            source: source @ icem_core::Error::CapacityExceeded { .. },
            ..
        } => CliError::Core(source),
        other => CliError::parse(path, other.to_string()),
    })
}

pub fn load_state(path: &Path) -> CliResult<LoadedState> {
    parse_state(path, &read(path)?)
}

pub fn load_spectrum(path: &Path, eps_rank: f64) -> CliResult<SchmidtSpectrum> {
    let file: SpectrumFile = parse_json(path, &read(path)?)?;
    SchmidtSpectrum::new(&file.values, eps_rank).map_err(|e| CliError::parse(path, format!("values: {e}")))
}
