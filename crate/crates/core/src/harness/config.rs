//! Sweep configuration files.
//!
//! ```json
//! {
//!   "n_qubits": 3,
//!   "sampler": {"kind": "haar_pure"},
//!   "samples": 10000,
//!   "alphas": [1.0, 2.0],
//!   "betas": [1.0],
//!   "seed": 42,
//!   "output_path": "sweep.csv",
//!   "tol_ineq": 1e-9,
//!   "check_chain": false
//! }
//! ```
//!
//! `sampler.kind` is one of `haar_pure`, `ginibre_mixed` (optional `rank`,
//! default full), `product_pure`, `targeted` (optional `m`, `k`; drawn per
//! sample when absent). Optional keys: `tol_ineq`, `tol_phys` (when set,
//! every sampled state is validated at that tolerance), `check_chain`,
//! `workers`. Unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::sampling::{SamplerKind, SamplerSpec};
use crate::{max_qubits, Error, Result, TOL_INEQ};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n_qubits: usize,
    pub sampler: SamplerKind,
    pub samples: u64,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub seed: u64,
    pub output_path: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_ineq: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_phys: Option<f64>,
    #[serde(default)]
    pub check_chain: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

/// Pulls the first backtick-quoted name out of a serde message, which is
/// where serde puts the offending field.
fn field_of(message: &str) -> String {
    message
        .split('`')
        .nth(1)
        .map(str::to_owned)
        .unwrap_or_else(|| "<document>".to_owned())
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if !inner.is_data() {
                return Error::Parse(format!("config: {inner}"));
            }
            let msg = inner.to_string();
            // Unknown keys are reported at their parent; the key itself is
            // in the message.
            let field = if msg.starts_with("unknown field") || path == "." {
                field_of(&msg)
            } else {
                path
            };
            Error::config(field, msg)
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn tol_ineq(&self) -> f64 {
        self.tol_ineq.unwrap_or(TOL_INEQ)
    }

    pub fn sampler_spec(&self) -> SamplerSpec {
        SamplerSpec {
            kind: self.sampler,
            n_qubits: self.n_qubits,
            seed: self.seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let max = max_qubits();
        if !(3..=max).contains(&self.n_qubits) {
            return Err(Error::config(
                "n_qubits",
                format!("{} must lie in [3, {max}]", self.n_qubits),
            ));
        }
        if self.samples == 0 {
            return Err(Error::config("samples", "must be >= 1"));
        }
        for (field, grid) in [("alphas", &self.alphas), ("betas", &self.betas)] {
            if grid.is_empty() {
                return Err(Error::config(field, "grid must be nonempty"));
            }
            if let Some(v) = grid.iter().find(|v| !(**v >= 1.0 && v.is_finite())) {
                return Err(Error::config(
                    field,
                    format!("{v} must be a finite real >= 1"),
                ));
            }
        }
        for (field, tol) in [("tol_ineq", self.tol_ineq), ("tol_phys", self.tol_phys)] {
            if let Some(t) = tol {
                if !(t >= 0.0 && t.is_finite()) {
                    return Err(Error::config(
                        field,
                        format!("{t} must be a finite real >= 0"),
                    ));
                }
            }
        }
        if self.workers == Some(0) {
            return Err(Error::config("workers", "must be >= 1"));
        }
        self.sampler_spec()
            .validate()
            .map_err(|e| Error::config("sampler", e.to_string()))
    }
}
