use std::fmt;

use num_complex::Complex64;

use super::matrix::{check_qubit_limit, ComplexMatrix};
use crate::{Error, Result, TOL_PHYS};

/// A normalized `n`-qubit state vector.
///
/// Basis index bit `n-1-q` belongs to qubit `q`, so qubit 0 is the leftmost
/// (most significant) tensor factor.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Wraps amplitudes that must already be normalized within [`TOL_PHYS`].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n_qubits = qubits_of_len(amplitudes.len())?;
        check_qubit_limit(n_qubits)?;
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::Validation("non-finite amplitude".into()));
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > TOL_PHYS {
            return Err(Error::Validation(format!(
                "amplitudes have squared norm {norm_sq}, expected 1"
            )));
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Validation(
                "cannot normalize a zero or non-finite vector".into(),
            ));
        }
        for z in &mut amplitudes {
            *z /= norm;
        }
        Self::new(amplitudes)
    }

    pub(crate) fn from_trusted(n_qubits: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n_qubits);
        Self {
            n_qubits,
            amplitudes,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `|self⟩ ⊗ |other⟩`.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let n = self.n_qubits + other.n_qubits;
        check_qubit_limit(n)?;
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Ok(Self::from_trusted(n, amplitudes))
    }

    /// Outer product `|ψ⟩⟨ψ|`.
    pub fn density_matrix(&self) -> ComplexMatrix {
        let amps = &self.amplitudes;
        ComplexMatrix::from_fn(amps.len(), |i, j| amps[i] * amps[j].conj())
    }
}

fn qubits_of_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::arg(format!(
            "dimension {len} is not a power of two >= 2"
        )));
    }
    Ok(len.trailing_zeros() as usize)
}

/// Physicality diagnostics for a candidate density matrix.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ValidationReport {
    pub hermiticity_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl ValidationReport {
    pub fn of(matrix: &ComplexMatrix, tolerance: f64) -> Self {
        let hermiticity_defect = matrix.hermiticity_defect();
        let trace_defect = (matrix.trace() - Complex64::new(1.0, 0.0)).norm();
        let min_eigenvalue = matrix
            .hermitian_eigenvalues()
            .first()
            .copied()
            .unwrap_or(f64::NAN);
        let passed = hermiticity_defect <= tolerance
            && trace_defect <= tolerance
            && min_eigenvalue >= -tolerance;
        Self {
            hermiticity_defect,
            trace_defect,
            min_eigenvalue,
            tolerance,
            passed,
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "hermiticity defect {:.3e}, trace defect {:.3e}, min eigenvalue {:.3e} (tol {:.1e})",
            self.hermiticity_defect, self.trace_defect, self.min_eigenvalue, self.tolerance
        )
    }
}

/// Validates a raw matrix as a density operator. Never fails; see
/// [`ValidationReport::passed`].
pub fn validate(matrix: &ComplexMatrix) -> ValidationReport {
    ValidationReport::of(matrix, TOL_PHYS)
}

/// An `n`-qubit density operator.
///
/// Every value of this type has passed physicality validation or was derived
/// from one that had through an operation that preserves it (partial trace,
/// tensor product, convex mixture, pure-state outer product).
#[derive(Debug, Clone, PartialEq)]
pub struct QubitState {
    n_qubits: usize,
    matrix: ComplexMatrix,
    /// Original qubit positions, in order; displayed as `A_{label+1}`.
    labels: Vec<usize>,
}

impl QubitState {
    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self> {
        Self::from_matrix_with_tol(matrix, TOL_PHYS)
    }

    pub fn from_matrix_with_tol(matrix: ComplexMatrix, tolerance: f64) -> Result<Self> {
        let n_qubits = qubits_of_len(matrix.dim())?;
        check_qubit_limit(n_qubits)?;
        let report = ValidationReport::of(&matrix, tolerance);
        if !report.passed {
            return Err(Error::Validation(report.to_string()));
        }
        Ok(Self::from_trusted(n_qubits, matrix))
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self::from_trusted(psi.n_qubits, psi.density_matrix())
    }

    pub(crate) fn from_trusted(n_qubits: usize, matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(matrix.dim(), 1 << n_qubits);
        Self {
            n_qubits,
            matrix,
            labels: (0..n_qubits).collect(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label_names(&self) -> Vec<String> {
        self.labels.iter().map(|l| format!("A_{}", l + 1)).collect()
    }

    pub fn validate(&self) -> ValidationReport {
        validate(&self.matrix)
    }

    /// `self ⊗ other`; labels of `other` are shifted past those of `self`.
    pub fn tensor(&self, other: &QubitState) -> Result<QubitState> {
        let matrix = self.matrix.kron(&other.matrix)?;
        let mut out = Self::from_trusted(self.n_qubits + other.n_qubits, matrix);
        let shift = self.labels.iter().max().map_or(0, |m| m + 1);
        out.labels = self
            .labels
            .iter()
            .copied()
            .chain(other.labels.iter().map(|l| l + shift))
            .collect();
        Ok(out)
    }

    /// Convex mixture `λ·self + (1-λ)·other`.
    pub fn mix(&self, other: &QubitState, lambda: f64) -> Result<QubitState> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::arg(format!("mixing weight {lambda} outside [0, 1]")));
        }
        if self.n_qubits != other.n_qubits {
            return Err(Error::arg("cannot mix states of different qubit counts"));
        }
        let matrix = self
            .matrix
            .scale(lambda)
            .add(&other.matrix.scale(1.0 - lambda))?;
        let mut out = Self::from_trusted(self.n_qubits, matrix);
        out.labels = self.labels.clone();
        Ok(out)
    }

    /// Reduced state on the qubits in `keep`, which must be nonempty,
    /// strictly increasing and within `0..n`. Kept qubits retain their order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<QubitState> {
        let n = self.n_qubits;
        if keep.is_empty() {
            return Err(Error::arg("keep set is empty"));
        }
        if let Some(&q) = keep.iter().find(|&&q| q >= n) {
            return Err(Error::arg(format!("qubit {q} out of range for {n} qubits")));
        }
        if keep.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::arg("keep set must be strictly increasing"));
        }
        let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
        let kept_offsets = scatter_offsets(keep, n);
        let traced_offsets = scatter_offsets(&traced, n);

        let full = &self.matrix;
        let matrix = ComplexMatrix::from_fn(kept_offsets.len(), |r, c| {
            let (row, col) = (kept_offsets[r], kept_offsets[c]);
            traced_offsets
                .iter()
                .map(|&t| full[(row | t, col | t)])
                .sum()
        });
        let mut out = Self::from_trusted(keep.len(), matrix);
        out.labels = keep.iter().map(|&q| self.labels[q]).collect();
        Ok(out)
    }

    /// Reduced state of a single qubit.
    pub fn qubit(&self, q: usize) -> Result<QubitState> {
        self.partial_trace(&[q])
    }
}

/// For each assignment of the listed qubits (first listed qubit most
/// significant), the full-register index with only those bits set.
fn scatter_offsets(qubits: &[usize], n: usize) -> Vec<usize> {
    let len = qubits.len();
    (0..1usize << len)
        .map(|local| {
            qubits
                .iter()
                .enumerate()
                .filter(|(pos, _)| local >> (len - 1 - pos) & 1 == 1)
                .fold(0, |acc, (_, &q)| acc | 1 << (n - 1 - q))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_1_SQRT_2;

    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn from_pure_basis_and_plus() {
        let zero = PureState::new(vec![c(1.0), c(0.0)]).unwrap();
        assert_eq!(
            QubitState::from_pure(&zero).matrix(),
            &ComplexMatrix::from_real_diagonal(&[1.0, 0.0])
        );
        let plus = PureState::new(vec![c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)]).unwrap();
        let rho = QubitState::from_pure(&plus);
        for z in rho.matrix().as_slice() {
            assert!((z - c(0.5)).norm() < 1e-15);
        }
    }

    #[test]
    fn pure_state_rejects_unnormalized() {
        assert!(matches!(
            PureState::new(vec![c(1.0), c(1.0)]),
            Err(Error::Validation(_))
        ));
        assert!(PureState::new(vec![c(1.0), c(0.0), c(0.0)]).is_err());
    }

    #[test]
    fn validate_examples() {
        assert!(validate(&ComplexMatrix::from_real_diagonal(&[0.5, 0.5])).passed);
        let r = validate(&ComplexMatrix::from_real_diagonal(&[1.0, 1.0]));
        assert!(!r.passed);
        assert!((r.trace_defect - 1.0).abs() < 1e-15);

        let mut m = ComplexMatrix::from_real_diagonal(&[0.5, 0.5]);
        m[(0, 1)] = Complex64::new(0.1, 0.2);
        m[(1, 0)] = Complex64::new(0.1, 0.2);
        let r = validate(&m);
        assert!(!r.passed);
        assert!(r.hermiticity_defect > 0.3);
    }

    #[test]
    fn validate_rejects_negative_eigenvalue() {
        let m = ComplexMatrix::from_real_diagonal(&[1.5, -0.5]);
        let r = validate(&m);
        assert!(!r.passed);
        assert!((r.min_eigenvalue + 0.5).abs() < 1e-14);
        assert!(QubitState::from_matrix(m).is_err());
    }

    #[test]
    fn bell_reduction_is_maximally_mixed() {
        let bell =
            PureState::new(vec![c(FRAC_1_SQRT_2), c(0.0), c(0.0), c(FRAC_1_SQRT_2)]).unwrap();
        let rho = QubitState::from_pure(&bell);
        let half = ComplexMatrix::from_real_diagonal(&[0.5, 0.5]);
        for q in 0..2 {
            assert!(rho.qubit(q).unwrap().matrix().max_abs_diff(&half) < 1e-15);
        }
    }

    #[test]
    fn partial_trace_argument_errors() {
        let rho = QubitState::from_matrix(ComplexMatrix::from_real_diagonal(&[0.25; 4])).unwrap();
        assert!(rho.partial_trace(&[]).is_err());
        assert!(rho.partial_trace(&[2]).is_err());
        assert!(rho.partial_trace(&[1, 0]).is_err());
        assert!(rho.partial_trace(&[1, 1]).is_err());
    }

    #[test]
    fn partial_trace_keeps_labels() {
        let rho = QubitState::from_matrix(ComplexMatrix::from_real_diagonal(&[0.125; 8])).unwrap();
        let red = rho.partial_trace(&[0, 2]).unwrap();
        assert_eq!(red.labels(), &[0, 2]);
        assert_eq!(red.label_names(), vec!["A_1", "A_3"]);
        assert_eq!(red.partial_trace(&[1]).unwrap().labels(), &[2]);
    }

    #[test]
    fn offsets_follow_msb_convention() {
        // 3 qubits: qubit 0 is bit 2, qubit 2 is bit 0.
        assert_eq!(scatter_offsets(&[0], 3), vec![0, 4]);
        assert_eq!(scatter_offsets(&[1, 2], 3), vec![0, 1, 2, 3]);
        assert_eq!(scatter_offsets(&[0, 2], 3), vec![0, 1, 4, 5]);
    }
}
