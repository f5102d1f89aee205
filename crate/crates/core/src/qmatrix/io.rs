//! JSON state files.
//!
//! A pure state:
//!
//! ```json
//! {"n": 1, "kind": "pure", "amplitudes": [[0.6, 0.0], [0.0, 0.8]]}
//! ```
//!
//! A mixed state:
//!
//! ```json
//! {"n": 1, "kind": "mixed", "matrix": [[[0.5, 0.0], [0.5, 0.0]], [[0.5, 0.0], [0.5, 0.0]]]}
//! ```
//!
//! Each complex number is a `[re, im]` pair written in decimal; parsing is
//! correctly rounded to the nearest double. `n` and `kind` are optional when
//! they can be inferred, but must agree with the payload when present.
//! Exactly one of `amplitudes` and `matrix` must be given. Unknown keys are
//! rejected.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{ComplexMatrix, PureState, QubitState};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    Pure,
    Mixed,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<StateKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
}

/// A state as loaded from a file; pure files keep their vector form.
#[derive(Debug, Clone)]
pub enum LoadedState {
    Pure(PureState),
    Mixed(QubitState),
}

impl LoadedState {
    pub fn into_state(self) -> QubitState {
        match self {
            LoadedState::Pure(psi) => QubitState::from_pure(&psi),
            LoadedState::Mixed(rho) => rho,
        }
    }
}

fn pair(z: &[f64; 2]) -> Complex64 {
    Complex64::new(z[0], z[1])
}

fn unpair(z: &Complex64) -> [f64; 2] {
    [z.re, z.im]
}

impl StateFile {
    pub fn from_pure(psi: &PureState) -> Self {
        Self {
            n: Some(psi.n_qubits()),
            kind: Some(StateKind::Pure),
            amplitudes: Some(psi.amplitudes().iter().map(unpair).collect()),
            matrix: None,
        }
    }

    pub fn from_state(rho: &QubitState) -> Self {
        let m = rho.matrix();
        Self {
            n: Some(rho.n_qubits()),
            kind: Some(StateKind::Mixed),
            amplitudes: None,
            matrix: Some(
                (0..m.dim())
                    .map(|i| m.row(i).iter().map(unpair).collect())
                    .collect(),
            ),
        }
    }

    /// Checks the schema, then physicality. Schema problems are
    /// [`Error::Parse`]; physicality problems are [`Error::Validation`].
    pub fn load(self) -> Result<LoadedState> {
        let parse = |msg: String| Error::Parse(msg);
        let (kind, dim) = match (&self.amplitudes, &self.matrix) {
            (Some(_), Some(_)) => {
                return Err(parse(
                    "give either `amplitudes` or `matrix`, not both".into(),
                ))
            }
            (None, None) => return Err(parse("missing `amplitudes` or `matrix`".into())),
            (Some(a), None) => (StateKind::Pure, a.len()),
            (None, Some(m)) => (StateKind::Mixed, m.len()),
        };
        if let Some(declared) = self.kind {
            if declared != kind {
                return Err(parse(format!(
                    "`kind` is {declared:?} but the payload is {kind:?}"
                )));
            }
        }
        if dim < 2 || !dim.is_power_of_two() {
            return Err(parse(format!("dimension {dim} is not a power of two >= 2")));
        }
        let n = dim.trailing_zeros() as usize;
        if let Some(declared) = self.n {
            if declared != n {
                return Err(parse(format!(
                    "`n` is {declared} but the payload has dimension {dim} ({n} qubits)"
                )));
            }
        }
        if let Some(a) = self.amplitudes {
            return Ok(LoadedState::Pure(PureState::new(
                a.iter().map(pair).collect(),
            )?));
        }
        let rows: Vec<Vec<Complex64>> = self
            .matrix
            .unwrap_or_default()
            .iter()
            .map(|row| row.iter().map(pair).collect())
            .collect();
        let matrix = ComplexMatrix::from_rows(rows).map_err(|e| match e {
            Error::InvalidArgument(msg) => Error::Parse(msg),
            other => other,
        })?;
        Ok(LoadedState::Mixed(QubitState::from_matrix(matrix)?))
    }
}

pub fn parse_state_json(text: &str) -> Result<LoadedState> {
    let file: StateFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("state file: {e}")))?;
    file.load()
}

pub fn read_state_file(path: impl AsRef<Path>) -> Result<LoadedState> {
    let text = std::fs::read_to_string(path)?;
    parse_state_json(&text)
}

pub fn pure_to_json(psi: &PureState) -> String {
    serde_json::to_string_pretty(&StateFile::from_pure(psi)).expect("state file serializes")
}

pub fn state_to_json(rho: &QubitState) -> String {
    serde_json::to_string_pretty(&StateFile::from_state(rho)).expect("state file serializes")
}
