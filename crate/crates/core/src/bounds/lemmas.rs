use serde::Serialize;

use crate::coherence::l1_coherence;
use crate::qmatrix::QubitState;
use crate::{Error, Result};

pub(crate) fn check_k(k: f64) -> Result<()> {
    if !(k > 0.0 && k <= 1.0) {
        return Err(Error::arg(format!("k = {k} must lie in (0, 1]")));
    }
    Ok(())
}

pub(crate) fn check_exponent(name: &str, value: f64) -> Result<()> {
    if !(value >= 1.0 && value.is_finite()) {
        return Err(Error::arg(format!(
            "{name} = {value} must be a finite real >= 1"
        )));
    }
    Ok(())
}

/// `((1+k)^α - 1) / k^α`, the coefficient gained by each chaining step.
///
/// Exactly `2^α - 1` at `k = 1` and exactly `1` at `α = 1`. Non-increasing in
/// `k` for fixed `α ≥ 1`.
pub fn lemma2_factor(k: f64, alpha: f64) -> Result<f64> {
    check_k(k)?;
    check_exponent("alpha", alpha)?;
    if alpha == 1.0 {
        return Ok(1.0);
    }
    if k == 1.0 {
        return Ok(2f64.powf(alpha) - 1.0);
    }
    // exp_m1/ln_1p keeps the numerator accurate for small k.
    Ok((alpha * k.ln_1p()).exp_m1() / k.powf(alpha))
}

/// `(1+x)^α ≥ 1 + lemma2_factor(k, α)·x^α` for `0 ≤ x ≤ k ≤ 1`, `α ≥ 1`,
/// compared with absolute tolerance `tol`.
pub fn check_lemma2(x: f64, k: f64, alpha: f64, tol: f64) -> Result<bool> {
    let factor = lemma2_factor(k, alpha)?;
    if !(0.0..=k).contains(&x) {
        return Err(Error::arg(format!("x = {x} must lie in [0, k = {k}]")));
    }
    Ok((1.0 + x).powf(alpha) >= 1.0 + factor * x.powf(alpha) - tol)
}

/// Outcome of a bipartite `2 ⊗ 2^{n-1}` superadditivity check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma1Report {
    pub split_qubit: usize,
    pub beta: f64,
    /// `C^β(ρ_AB)`.
    pub lhs: f64,
    /// `C^β(ρ_A) + C^β(ρ_B)`.
    pub rhs: f64,
    pub holds: bool,
}

/// Checks `C^β(ρ_AB) ≥ C^β(ρ_A) + C^β(ρ_B)` where `A` is qubit `split_qubit`
/// and `B` the remaining qubits.
pub fn check_lemma1(
    rho: &QubitState,
    split_qubit: usize,
    beta: f64,
    tol: f64,
) -> Result<Lemma1Report> {
    check_exponent("beta", beta)?;
    let n = rho.n_qubits();
    if n < 2 {
        return Err(Error::arg("a bipartite split needs at least 2 qubits"));
    }
    if split_qubit >= n {
        return Err(Error::arg(format!(
            "split qubit {split_qubit} out of range for {n} qubits"
        )));
    }
    let rest: Vec<usize> = (0..n).filter(|&q| q != split_qubit).collect();
    let whole = l1_coherence(rho).value().powf(beta);
    let a = l1_coherence(&rho.partial_trace(&[split_qubit])?)
        .value()
        .powf(beta);
    let b = l1_coherence(&rho.partial_trace(&rest)?).value().powf(beta);
    let rhs = a + b;
    Ok(Lemma1Report {
        split_qubit,
        beta,
        lhs: whole,
        rhs,
        holds: whole >= rhs - tol,
    })
}
