//! Numerics for the l1-norm of coherence on multiqubit states.
//!
//! The crate computes `C_l1(ρ) = Σ_{i≠j} |ρ_ij|` in the computational basis,
//! evaluates the strong superadditivity lower bounds on `C_l1^{αβ}` of an
//! `n`-qubit state in terms of its single-qubit and tail reductions, searches
//! for the tightest admissible `(k, m)` parameters, and verifies every
//! intermediate inequality of the chaining argument behind the bound.
//!
//! Modules:
//! - [`qmatrix`]: dense complex matrices, qubit states, partial traces, state files.
//! - [`coherence`]: the l1-norm coherence measure.
//! - [`bounds`]: the scalar lemma, bipartite superadditivity, bound evaluation and search.
//! - [`sampling`]: seeded random and constructed states.
//! - [`harness`]: experiment configs, sweeps, reports and the CLI.

pub mod bounds;
pub mod coherence;
mod error;
pub mod harness;
pub mod qmatrix;
pub mod sampling;

pub use error::{ConditionSide, Error, Result};

/// Absolute tolerance for physicality checks (Hermiticity, trace, PSD).
pub const TOL_PHYS: f64 = 1e-9;

/// Absolute tolerance for inequality checks.
pub const TOL_INEQ: f64 = 1e-9;

/// Default upper limit on the number of qubits of any constructed matrix.
pub const DEFAULT_MAX_QUBITS: usize = 14;

/// Environment variable overriding [`DEFAULT_MAX_QUBITS`].
pub const MAX_QUBITS_ENV: &str = "COHERENCE_MAX_QUBITS";

/// The active qubit-count guard: `COHERENCE_MAX_QUBITS` if set to a valid
/// integer, otherwise [`DEFAULT_MAX_QUBITS`].
pub fn max_qubits() -> usize {
    std::env::var(MAX_QUBITS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&v| v > 0 && v < usize::BITS as usize / 2)
        .unwrap_or(DEFAULT_MAX_QUBITS)
}

pub use num_complex::Complex64;
