#ifndef QCOHERENCE_H
#define QCOHERENCE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QcStatus {
  QC_STATUS_OK = 0,
  QC_STATUS_NULL_POINTER = 1,
  QC_STATUS_INVALID_ARGUMENT = 2,
  QC_STATUS_PARSE = 3,
  QC_STATUS_VALIDATION = 4,
  QC_STATUS_SIZE_LIMIT = 5,
  QC_STATUS_INFEASIBLE = 6,
  QC_STATUS_CONDITION_VIOLATED = 7,
  QC_STATUS_IO = 8,
  QC_STATUS_PANIC = 9,
} QcStatus;

// The outcome of a tightest-bound search.
typedef struct QcReport QcReport;

// A validated n-qubit density matrix.
typedef struct QcState QcState;

// Flat view of a [`QcReport`]. `m == 0` and `k` NaN mean no admissible
// parameters were found.
typedef struct QcBoundSummary {
  size_t n;
  double alpha;
  double beta;
  size_t m;
  double k;
  double lhs;
  double rhs_theorem;
  double rhs_baseline_k1;
  double rhs_plain_sum;
  double gap;
  bool conditions_met;
} QcBoundSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or null after a
// success. Valid until the next library call on this thread; do not free.
const char *qc_last_error_message(void);

// Parses and validates a state document (pure or mixed JSON form).
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be valid for writes.
enum QcStatus qc_state_from_json(const char *json, struct QcState **out);

// The three-qubit reference state `(|0⟩+|1⟩)/√2 ⊗ |0⟩ ⊗ (|0⟩+3|1⟩)/√10`.
//
// # Safety
// `out` must be valid for writes.
enum QcStatus qc_state_reference_example(struct QcState **out);

// Haar-random pure state; sample `index` of the stream for `seed`.
//
// # Safety
// `out` must be valid for writes.
enum QcStatus qc_state_haar(size_t n_qubits, uint64_t seed, uint64_t index, struct QcState **out);

// Ginibre-ensemble mixed state of the given rank (`0` for full rank).
//
// # Safety
// `out` must be valid for writes.
enum QcStatus qc_state_ginibre(size_t n_qubits,
                               size_t rank,
                               uint64_t seed,
                               uint64_t index,
                               struct QcState **out);

// # Safety
// `state` must be null or a pointer obtained from this library and not yet
// freed.
void qc_state_free(struct QcState *state);

// # Safety
// `state` must be a live state; `out` must be valid for writes.
enum QcStatus qc_state_num_qubits(const struct QcState *state, size_t *out);

// `C_l1` of the state.
//
// # Safety
// `state` must be a live state; `out` must be valid for writes.
enum QcStatus qc_state_coherence(const struct QcState *state, double *out);

// Reduced state on the strictly increasing qubit list `keep[0..len]`
// (qubit 0 is the most significant).
//
// # Safety
// `state` must be a live state; `keep` must be valid for `len` reads; `out`
// must be valid for writes.
enum QcStatus qc_state_partial_trace(const struct QcState *state,
                                     const size_t *keep,
                                     size_t len,
                                     struct QcState **out);

// Serializes the state as a mixed-form JSON document.
//
// # Safety
// `state` must be a live state; `out` must be valid for writes. Free the
// result with [`qc_string_free`].
enum QcStatus qc_state_to_json(const struct QcState *state, char **out);

// `((1+k)^α - 1)/k^α` for `k ∈ (0, 1]`, `α ≥ 1`.
//
// # Safety
// `out` must be valid for writes.
enum QcStatus qc_lemma2_factor(double k, double alpha, double *out);

// Tightest admissible bound on `C_l1^{αβ}` of an n ≥ 3 qubit state.
// `tol` is the absolute tolerance for the ordering conditions.
//
// # Safety
// `state` must be a live state; `out` must be valid for writes.
enum QcStatus qc_best_bound(const struct QcState *state,
                            double alpha,
                            double beta,
                            double tol,
                            struct QcReport **out);

// # Safety
// `report` must be a live report; `out` must be valid for writes.
enum QcStatus qc_report_summary(const struct QcReport *report, struct QcBoundSummary *out);

// Flat JSON object with the same keys as the CSV report columns.
//
// # Safety
// `report` must be a live report; `out` must be valid for writes. Free the
// result with [`qc_string_free`].
enum QcStatus qc_report_to_json(const struct QcReport *report, char **out);

// Re-checks every intermediate inequality of the bound at the report's
// parameters. Fails with `QC_STATUS_INVALID_ARGUMENT` when the report has no
// admissible parameters.
//
// # Safety
// `state` and `report` must be live; `steps` and `failed` must be valid for
// writes.
enum QcStatus qc_verify_chain(const struct QcState *state,
                              const struct QcReport *report,
                              double tol,
                              size_t *steps,
                              size_t *failed);

// # Safety
// `report` must be null or a pointer obtained from this library and not yet
// freed.
void qc_report_free(struct QcReport *report);

// # Safety
// `s` must be null or a string returned by this library and not yet freed.
void qc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QCOHERENCE_H */
