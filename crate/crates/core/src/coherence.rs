//! The l1-norm of coherence in the computational (tensor-product) basis.

use crate::qmatrix::{ComplexMatrix, QubitState};
use crate::{Error, Result};

/// A non-negative l1-norm coherence value.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct CoherenceValue(f64);

impl CoherenceValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<CoherenceValue> for f64 {
    fn from(c: CoherenceValue) -> f64 {
        c.0
    }
}

/// Sum of the moduli of the off-diagonal entries, accumulated row-major.
pub fn l1_off_diagonal(matrix: &ComplexMatrix) -> f64 {
    let dim = matrix.dim();
    let mut total = 0.0;
    for i in 0..dim {
        for (j, z) in matrix.row(i).iter().enumerate() {
            if i != j {
                total += z.norm();
            }
        }
    }
    total
}

/// `C_l1(ρ) = Σ_{i≠j} |ρ_ij|`.
pub fn l1_coherence(rho: &QubitState) -> CoherenceValue {
    CoherenceValue(l1_off_diagonal(rho.matrix()))
}

/// `C_l1(ρ)^p` for `p ≥ 1`.
pub fn l1_coherence_pow(rho: &QubitState, p: f64) -> Result<f64> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::arg(format!(
            "exponent {p} must be a finite real >= 1"
        )));
    }
    Ok(l1_coherence(rho).value().powf(p))
}

/// l1 coherence of a tensor product whose factors have coherences `values`:
/// `Π(1 + C_i) - 1`.
pub fn product_coherence(values: &[f64]) -> Result<f64> {
    if let Some(v) = values.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
        return Err(Error::arg(format!(
            "coherence {v} must be a finite real >= 0"
        )));
    }
    Ok(values.iter().map(|c| 1.0 + c).product::<f64>() - 1.0)
}
