use serde::Serialize;

use super::lemmas::check_exponent;
use crate::coherence::l1_coherence;
use crate::qmatrix::QubitState;
use crate::{Error, Result, TOL_INEQ};

/// β-powered coherences of a state under its fixed qubit ordering.
///
/// Positions are 0-based here: `singles[i] = C^β(ρ_{A_{i+1}})` and
/// `tails[i] = C^β(ρ_{A_{i+2} ⋯ A_n})`, the reduced state on every qubit after
/// qubit `i`. `tails` has `n - 1` entries and its last entry equals the last
/// single. `total` is `C^β` of the whole state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoherenceProfile {
    beta: f64,
    total: f64,
    singles: Vec<f64>,
    tails: Vec<f64>,
}

impl CoherenceProfile {
    /// Computes the `2n - 1` reductions once and raises them to `beta`.
    pub fn from_state(rho: &QubitState, beta: f64) -> Result<Self> {
        check_exponent("beta", beta)?;
        let n = rho.n_qubits();
        if n < 2 {
            return Err(Error::arg("a coherence profile needs at least 2 qubits"));
        }
        let total = l1_coherence(rho).value();
        let singles = (0..n)
            .map(|q| Ok(l1_coherence(&rho.qubit(q)?).value()))
            .collect::<Result<Vec<_>>>()?;
        let tails = (1..n)
            .map(|start| {
                let keep: Vec<usize> = (start..n).collect();
                Ok(l1_coherence(&rho.partial_trace(&keep)?).value())
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_values(1.0, total, singles, tails)?.rebased(beta)
    }

    /// Builds a profile from already-powered values.
    ///
    /// At `β = 1` the chained superadditivity consequence
    /// `tails[i] ≥ Σ_{j>i} singles[j]` is enforced within [`TOL_INEQ`].
    pub fn from_values(beta: f64, total: f64, singles: Vec<f64>, tails: Vec<f64>) -> Result<Self> {
        check_exponent("beta", beta)?;
        let n = singles.len();
        if n < 2 {
            return Err(Error::arg("a coherence profile needs at least 2 qubits"));
        }
        if tails.len() != n - 1 {
            return Err(Error::arg(format!(
                "expected {} tail values for {n} qubits, got {}",
                n - 1,
                tails.len()
            )));
        }
        if let Some(v) = std::iter::once(&total)
            .chain(&singles)
            .chain(&tails)
            .find(|v| !(**v >= 0.0 && v.is_finite()))
        {
            return Err(Error::arg(format!(
                "coherence value {v} must be finite and >= 0"
            )));
        }
        if beta == 1.0 {
            for i in 0..n - 1 {
                let downstream: f64 = singles[i + 1..].iter().sum();
                if tails[i] < downstream - TOL_INEQ {
                    return Err(Error::arg(format!(
                        "tail {} has coherence {} below the sum {downstream} of its single-qubit coherences",
                        i + 1,
                        tails[i]
                    )));
                }
            }
        }
        Ok(Self {
            beta,
            total,
            singles,
            tails,
        })
    }

    /// Re-expresses a `β = 1` profile at another exponent.
    pub fn rebased(&self, beta: f64) -> Result<Self> {
        check_exponent("beta", beta)?;
        if self.beta != 1.0 {
            return Err(Error::arg("only a beta = 1 profile can be rebased"));
        }
        let pow = |v: &f64| v.powf(beta);
        Ok(Self {
            beta,
            total: pow(&self.total),
            singles: self.singles.iter().map(pow).collect(),
            tails: self.tails.iter().map(pow).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.singles.len()
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn singles(&self) -> &[f64] {
        &self.singles
    }

    pub fn tails(&self) -> &[f64] {
        &self.tails
    }

    /// `T(i)` with 1-based `i`: `T(0)` is the whole state, `T(i)` for
    /// `1 ≤ i ≤ n-1` is the reduction on `A_{i+1} ⋯ A_n`.
    pub(crate) fn tail_from(&self, i: usize) -> f64 {
        if i == 0 {
            self.total
        } else {
            self.tails[i - 1]
        }
    }

    /// Single-qubit term with 1-based index.
    pub(crate) fn single(&self, i: usize) -> f64 {
        self.singles[i - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        assert!(CoherenceProfile::from_values(1.0, 0.0, vec![0.0], vec![]).is_err());
        assert!(CoherenceProfile::from_values(1.0, 0.0, vec![0.0; 3], vec![0.0]).is_err());
        assert!(CoherenceProfile::from_values(1.0, 0.0, vec![0.0, -1.0], vec![0.0]).is_err());
        assert!(CoherenceProfile::from_values(0.5, 0.0, vec![0.0; 2], vec![0.0]).is_err());
    }

    #[test]
    fn enforces_chained_superadditivity_at_beta_one() {
        // tails[0] = 1 < singles[1] + singles[2] = 2.
        assert!(CoherenceProfile::from_values(1.0, 5.0, vec![1.0; 3], vec![1.0, 1.0]).is_err());
        assert!(CoherenceProfile::from_values(1.0, 5.0, vec![1.0; 3], vec![2.0, 1.0]).is_ok());
        // Not enforced on raw powered values.
        assert!(CoherenceProfile::from_values(2.0, 5.0, vec![1.0; 3], vec![1.0, 1.0]).is_ok());
    }

    #[test]
    fn rebase_powers_every_entry() {
        let p =
            CoherenceProfile::from_values(1.0, 2.2, vec![1.0, 0.0, 0.6], vec![0.6, 0.6]).unwrap();
        let q = p.rebased(2.0).unwrap();
        assert!((q.total() - 4.84).abs() < 1e-15);
        assert_eq!(q.singles(), &[1.0, 0.0, 0.36]);
        assert!(q.rebased(2.0).is_err());
        assert_eq!(q.tail_from(0), q.total());
        assert_eq!(q.tail_from(2), q.tails()[1]);
    }
}
