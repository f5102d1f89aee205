//! C ABI over `qcoherence`.
//!
//! Conventions:
//! - Every fallible function returns a [`QcStatus`] and writes results through
//!   out-pointers, which are left untouched on failure.
//! - On any non-`QC_STATUS_OK` status, [`qc_last_error_message`] describes the
//!   failure on the calling thread.
//! - [`QcState`] and [`QcReport`] are opaque; release them with
//!   [`qc_state_free`] and [`qc_report_free`]. Strings returned by the library
//!   are released with [`qc_string_free`].
//! - Panics never cross the boundary; they surface as `QC_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qcoherence::bounds::{
    best_bound_with, lemma2_factor, verify_proof_chain, BoundOptions, BoundReport,
};
use qcoherence::coherence::l1_coherence;
use qcoherence::qmatrix::{parse_state_json, state_to_json, QubitState};
use qcoherence::sampling::{reference_example, SamplerKind, SamplerSpec};
use qcoherence::Error;

/// A validated n-qubit density matrix.
pub struct QcState(QubitState);

/// The outcome of a tightest-bound search.
pub struct QcReport(BoundReport);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Validation = 4,
    SizeLimit = 5,
    Infeasible = 6,
    ConditionViolated = 7,
    Io = 8,
    Panic = 9,
}

impl From<&Error> for QcStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidArgument(_) => QcStatus::InvalidArgument,
            Error::SizeLimit { .. } => QcStatus::SizeLimit,
            Error::Validation(_) => QcStatus::Validation,
            Error::Parse(_) | Error::Config { .. } => QcStatus::Parse,
            Error::Infeasible { .. } => QcStatus::Infeasible,
            Error::ConditionViolated { .. } => QcStatus::ConditionViolated,
            Error::Io(_) => QcStatus::Io,
        }
    }
}

/// Flat view of a [`QcReport`]. `m == 0` and `k` NaN mean no admissible
/// parameters were found.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QcBoundSummary {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub m: usize,
    pub k: f64,
    pub lhs: f64,
    pub rhs_theorem: f64,
    pub rhs_baseline_k1: f64,
    pub rhs_plain_sum: f64,
    pub gap: f64,
    pub conditions_met: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

struct Failure(QcStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(QcStatus::from(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(QcStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            QcStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_owned());
            set_last_error(format!("internal panic: {msg}"));
            QcStatus::Panic
        }
    }
}

/// # Safety
/// `p` must be null or valid for reads of `T`.
unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

/// # Safety
/// `p` must be null or valid for writes of `T`.
unsafe fn store<T>(p: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(value);
    Ok(())
}

fn boxed_state(rho: QubitState) -> *mut QcState {
    Box::into_raw(Box::new(QcState(rho)))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s)
        .expect("JSON has no interior NUL")
        .into_raw()
}

/// Message for the most recent failure on this thread, or null after a
/// success. Valid until the next library call on this thread; do not free.
#[no_mangle]
pub extern "C" fn qc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses and validates a state document (pure or mixed JSON form).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qc_state_from_json(
    json: *const c_char,
    out: *mut *mut QcState,
) -> QcStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Failure(QcStatus::Parse, format!("state JSON is not UTF-8: {e}")))?;
        let rho = parse_state_json(text)?.into_state();
        store(out, boxed_state(rho), "out")
    })
}

/// The three-qubit reference state `(|0⟩+|1⟩)/√2 ⊗ |0⟩ ⊗ (|0⟩+3|1⟩)/√10`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qc_state_reference_example(out: *mut *mut QcState) -> QcStatus {
    guard(|| {
        store(
            out,
            boxed_state(QubitState::from_pure(&reference_example())),
            "out",
        )
    })
}

fn sample(
    kind: SamplerKind,
    n_qubits: usize,
    seed: u64,
    index: u64,
) -> Result<QubitState, Failure> {
    let spec = SamplerSpec {
        kind,
        n_qubits,
        seed,
    };
    spec.validate()?;
    Ok(spec.sample(index)?)
}

/// Haar-random pure state; sample `index` of the stream for `seed`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qc_state_haar(
    n_qubits: usize,
    seed: u64,
    index: u64,
    out: *mut *mut QcState,
) -> QcStatus {
    guard(|| {
        let rho = sample(SamplerKind::HaarPure {}, n_qubits, seed, index)?;
        store(out, boxed_state(rho), "out")
    })
}

/// Ginibre-ensemble mixed state of the given rank (`0` for full rank).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qc_state_ginibre(
    n_qubits: usize,
    rank: usize,
    seed: u64,
    index: u64,
    out: *mut *mut QcState,
) -> QcStatus {
    guard(|| {
        let rank = (rank != 0).then_some(rank);
        let rho = sample(SamplerKind::GinibreMixed { rank }, n_qubits, seed, index)?;
        store(out, boxed_state(rho), "out")
    })
}

/// # Safety
/// `state` must be null or a pointer obtained from this library and not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn qc_state_free(state: *mut QcState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// # Safety
/// `state` must be a live state; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qc_state_num_qubits(state: *const QcState, out: *mut usize) -> QcStatus {
    guard(|| store(out, borrow(state, "state")?.0.n_qubits(), "out"))
}

/// `C_l1` of the state.
///
/// # Safety
/// `state` must be a live state; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qc_state_coherence(state: *const QcState, out: *mut f64) -> QcStatus {
    guard(|| store(out, l1_coherence(&borrow(state, "state")?.0).value(), "out"))
}

/// Reduced state on the strictly increasing qubit list `keep[0..len]`
/// (qubit 0 is the most significant).
///
/// # Safety
/// `state` must be a live state; `keep` must be valid for `len` reads; `out`
/// must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qc_state_partial_trace(
    state: *const QcState,
    keep: *const usize,
    len: usize,
    out: *mut *mut QcState,
) -> QcStatus {
    guard(|| {
        let rho = &borrow(state, "state")?.0;
        if keep.is_null() {
            return Err(null("keep"));
        }
        let keep = std::slice::from_raw_parts(keep, len);
        let reduced = rho.partial_trace(keep)?;
        store(out, boxed_state(reduced), "out")
    })
}

/// Serializes the state as a mixed-form JSON document.
///
/// # Safety
/// `state` must be a live state; `out` must be valid for writes. Free the
/// result with [`qc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn qc_state_to_json(
    state: *const QcState,
    out: *mut *mut c_char,
) -> QcStatus {
    guard(|| {
        store(
            out,
            c_string(state_to_json(&borrow(state, "state")?.0)),
            "out",
        )
    })
}

/// `((1+k)^α - 1)/k^α` for `k ∈ (0, 1]`, `α ≥ 1`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qc_lemma2_factor(k: f64, alpha: f64, out: *mut f64) -> QcStatus {
    guard(|| store(out, lemma2_factor(k, alpha)?, "out"))
}

/// Tightest admissible bound on `C_l1^{αβ}` of an n ≥ 3 qubit state.
/// `tol` is the absolute tolerance for the ordering conditions.
///
/// # Safety
/// `state` must be a live state; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qc_best_bound(
    state: *const QcState,
    alpha: f64,
    beta: f64,
    tol: f64,
    out: *mut *mut QcReport,
) -> QcStatus {
    guard(|| {
        let rho = &borrow(state, "state")?.0;
        if !(tol >= 0.0 && tol.is_finite()) {
            return Err(Failure(
                QcStatus::InvalidArgument,
                format!("tol {tol} must be a finite real >= 0"),
            ));
        }
        let report = best_bound_with(rho, alpha, beta, &BoundOptions::with_tol(tol))?;
        store(out, Box::into_raw(Box::new(QcReport(report))), "out")
    })
}

/// # Safety
/// `report` must be a live report; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qc_report_summary(
    report: *const QcReport,
    out: *mut QcBoundSummary,
) -> QcStatus {
    guard(|| {
        let r = &borrow(report, "report")?.0;
        let summary = QcBoundSummary {
            n: r.n,
            alpha: r.alpha,
            beta: r.beta,
            m: r.m.unwrap_or(0),
            k: r.k.unwrap_or(f64::NAN),
            lhs: r.lhs,
            rhs_theorem: r.rhs_theorem,
            rhs_baseline_k1: r.rhs_baseline_k1,
            rhs_plain_sum: r.rhs_plain_sum,
            gap: r.gap,
            conditions_met: r.conditions_met,
        };
        store(out, summary, "out")
    })
}

/// Flat JSON object with the same keys as the CSV report columns.
///
/// # Safety
/// `report` must be a live report; `out` must be valid for writes. Free the
/// result with [`qc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn qc_report_to_json(
    report: *const QcReport,
    out: *mut *mut c_char,
) -> QcStatus {
    guard(|| store(out, c_string(borrow(report, "report")?.0.to_json()), "out"))
}

/// Re-checks every intermediate inequality of the bound at the report's
/// parameters. Fails with `QC_STATUS_INVALID_ARGUMENT` when the report has no
/// admissible parameters.
///
/// # Safety
/// `state` and `report` must be live; `steps` and `failed` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn qc_verify_chain(
    state: *const QcState,
    report: *const QcReport,
    tol: f64,
    steps: *mut usize,
    failed: *mut usize,
) -> QcStatus {
    guard(|| {
        let rho = &borrow(state, "state")?.0;
        let r = &borrow(report, "report")?.0;
        if steps.is_null() || failed.is_null() {
            return Err(null("steps/failed"));
        }
        let params = r.params().ok_or_else(|| {
            Failure(
                QcStatus::InvalidArgument,
                "report has no admissible parameters".to_owned(),
            )
        })?;
        let chain = verify_proof_chain(rho, &params, &BoundOptions::with_tol(tol))?;
        store(steps, chain.len(), "steps")?;
        store(failed, chain.iter().filter(|s| !s.passed).count(), "failed")
    })
}

/// # Safety
/// `report` must be null or a pointer obtained from this library and not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn qc_report_free(report: *mut QcReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
