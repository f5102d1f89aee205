//! Batteries for the scalar lemma and bipartite superadditivity.
//!
//! Grid file (every key optional, defaults shown by [`LemmaGrid::default`]):
//!
//! ```json
//! {"ks": [0.25, 0.5, 1.0], "alphas": [1, 2], "x_fractions": [0, 0.5, 1],
//!  "lemma1_states": 100, "lemma1_qubits": 3, "betas": [1, 2, 3], "seed": 7}
//! ```
//!
//! Scalar points are `x = fraction·k`; fractions must lie in `[0, 1]`.
//! Lemma-1 states alternate between Haar pure (even index) and full-rank
//! Ginibre (odd index) samples.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{check_lemma1, lemma2_factor};
use crate::sampling::{SamplerKind, SamplerSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LemmaGrid {
    pub ks: Vec<f64>,
    pub alphas: Vec<f64>,
    pub x_fractions: Vec<f64>,
    pub lemma1_states: u64,
    pub lemma1_qubits: usize,
    pub betas: Vec<f64>,
    pub seed: u64,
}

impl Default for LemmaGrid {
    /// 100 × 8 × 9 = 7200 scalar points; 10⁴ three-qubit states × 3 splits ×
    /// 3 exponents.
    fn default() -> Self {
        Self {
            ks: (1..=100).map(|i| i as f64 / 100.0).collect(),
            alphas: vec![1.0, 1.25, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0],
            x_fractions: (0..=8).map(|i| i as f64 / 8.0).collect(),
            lemma1_states: 10_000,
            lemma1_qubits: 3,
            betas: vec![1.0, 2.0, 3.0],
            seed: 20_200_101,
        }
    }
}

impl LemmaGrid {
    pub fn from_json(text: &str) -> Result<Self> {
        let grid: Self =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("lemma grid: {e}")))?;
        grid.validate()?;
        Ok(grid)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(f) = self.x_fractions.iter().find(|f| !(0.0..=1.0).contains(*f)) {
            return Err(Error::config(
                "x_fractions",
                format!("{f} outside [0, 1]: x must not exceed k"),
            ));
        }
        if let Some(k) = self.ks.iter().find(|k| !(**k > 0.0 && **k <= 1.0)) {
            return Err(Error::config("ks", format!("{k} outside (0, 1]")));
        }
        for (field, grid) in [("alphas", &self.alphas), ("betas", &self.betas)] {
            if let Some(v) = grid.iter().find(|v| !(**v >= 1.0 && v.is_finite())) {
                return Err(Error::config(
                    field,
                    format!("{v} must be a finite real >= 1"),
                ));
            }
        }
        if self.lemma1_qubits < 2 {
            return Err(Error::config("lemma1_qubits", "need at least 2 qubits"));
        }
        Ok(())
    }

    pub fn lemma2_points(&self) -> usize {
        self.ks.len() * self.alphas.len() * self.x_fractions.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaSummary {
    pub lemma2_points: u64,
    pub lemma2_failures: u64,
    /// Smallest `lhs - rhs` seen on the scalar grid.
    pub lemma2_min_margin: f64,
    pub lemma1_states: u64,
    pub lemma1_checks: u64,
    pub lemma1_failures: u64,
    pub lemma1_min_margin: f64,
}

impl LemmaSummary {
    pub fn passed(&self) -> bool {
        self.lemma2_failures == 0 && self.lemma1_failures == 0
    }
}

pub fn run_lemmas(grid: &LemmaGrid, tol: f64) -> Result<LemmaSummary> {
    grid.validate()?;

    let mut lemma2_failures = 0;
    let mut lemma2_min_margin = f64::INFINITY;
    for &k in &grid.ks {
        for &alpha in &grid.alphas {
            let f = lemma2_factor(k, alpha)?;
            for &frac in &grid.x_fractions {
                let x = (frac * k).min(k);
                let margin = (1.0 + x).powf(alpha) - (1.0 + f * x.powf(alpha));
                lemma2_min_margin = lemma2_min_margin.min(margin);
                if margin < -tol {
                    lemma2_failures += 1;
                }
            }
        }
    }

    let n = grid.lemma1_qubits;
    let spec = |kind| SamplerSpec {
        kind,
        n_qubits: n,
        seed: grid.seed,
    };
    let pure = spec(SamplerKind::HaarPure {});
    let mixed = spec(SamplerKind::GinibreMixed { rank: None });
    let per_state = (0..grid.lemma1_states)
        .into_par_iter()
        .map(|i| {
            let rho = if i % 2 == 0 {
                pure.sample(i)?
            } else {
                mixed.sample(i)?
            };
            let mut failures = 0u64;
            let mut margin = f64::INFINITY;
            for split in 0..n {
                for &beta in &grid.betas {
                    let r = check_lemma1(&rho, split, beta, tol)?;
                    margin = margin.min(r.lhs - r.rhs);
                    failures += u64::from(!r.holds);
                }
            }
            Ok((failures, margin))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(LemmaSummary {
        lemma2_points: grid.lemma2_points() as u64,
        lemma2_failures,
        lemma2_min_margin,
        lemma1_states: grid.lemma1_states,
        lemma1_checks: grid.lemma1_states * (n * grid.betas.len()) as u64,
        lemma1_failures: per_state.iter().map(|p| p.0).sum(),
        lemma1_min_margin: per_state.iter().map(|p| p.1).fold(f64::INFINITY, f64::min),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::TOL_INEQ;

    #[test]
    fn default_grid_is_large_enough() {
        assert!(LemmaGrid::default().lemma2_points() >= 2500);
    }

    #[test]
    fn small_battery_passes() {
        let grid = LemmaGrid {
            lemma1_states: 50,
            ..LemmaGrid::default()
        };
        let s = run_lemmas(&grid, TOL_INEQ).unwrap();
        assert!(s.passed(), "{s:?}");
        assert_eq!(s.lemma1_checks, 50 * 9);
        // x = 0 and x = k are equalities.
        assert!(s.lemma2_min_margin.abs() < 1e-12);
    }

    #[test]
    fn x_above_k_is_an_argument_error() {
        let grid = LemmaGrid::from_json(r#"{"x_fractions": [1.0000001]}"#);
        assert!(matches!(grid, Err(Error::Config { .. })));
        assert!(LemmaGrid::from_json(r#"{"bogus": 1}"#).is_err());
    }
}
