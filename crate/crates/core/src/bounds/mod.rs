//! Superadditivity lemmas and the strong lower bounds on `C_l1^{αβ}`.

mod chain;
mod lemmas;
mod profile;
mod theorem;

pub use chain::{verify_chain_for_profile, verify_proof_chain, ChainStep, StepKind};
pub use lemmas::{check_lemma1, check_lemma2, lemma2_factor, Lemma1Report};
pub use profile::CoherenceProfile;
pub use theorem::{
    admissible_k, best_bound, best_bound_for_profile, best_bound_with, conditions, format_f64,
    plain_sum_rhs, theorem_rhs, BoundOptions, BoundParams, BoundReport, ConditionCheck,
    ConditionOutcome, KInterval, TailCondition, REPORT_CSV_HEADER,
};
