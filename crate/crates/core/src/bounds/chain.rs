//! Step-by-step verification of the chaining argument behind the bound.
//!
//! With `s_i` the β-powered single-qubit coherences, `T_i` the β-powered
//! coherence of `A_{i+1}⋯A_n` (`T_0` the whole state) and
//! `f = lemma2_factor(k, α)`, the argument is:
//!
//! * leading indices `i = 1..=m`:
//!   `T_{i-1}^α ≥ (s_i + T_i)^α` (bipartite superadditivity),
//!   `(s_i + T_i)^α ≥ s_i^α + f·T_i^α` (scalar lemma with `x = T_i/s_i ≤ k`),
//!   hence `T_0^α ≥ Σ_{l≤i} f^{l-1} s_l^α + f^i T_i^α`;
//! * trailing indices `j = m+1..=n-1`:
//!   `T_{j-1}^α ≥ (s_j + T_j)^α`,
//!   `(s_j + T_j)^α ≥ f·s_j^α + T_j^α` (scalar lemma with `x = s_j/T_j ≤ k`),
//!   hence `T_m^α ≥ f·Σ_{l=m+1}^{j} s_l^α + T_j^α`;
//! * combined: `T_0^α ≥ theorem_rhs`.

use serde::Serialize;

use super::lemmas::lemma2_factor;
use super::profile::CoherenceProfile;
use super::theorem::{conditions, theorem_rhs, BoundOptions, BoundParams};
use crate::qmatrix::QubitState;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    Superadditivity,
    LeadingLemma,
    LeadingBound,
    TrailingLemma,
    TrailingBound,
    Combined,
}

/// One inequality `lhs ≥ rhs` of the chain; `index` is 1-based (0 for the
/// combined step).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainStep {
    pub kind: StepKind,
    pub index: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub passed: bool,
}

fn pow0(v: f64, alpha: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v.powf(alpha)
    }
}

fn scaled(coef: f64, v: f64, alpha: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        coef * v.powf(alpha)
    }
}

pub fn verify_proof_chain(
    rho: &QubitState,
    params: &BoundParams,
    opts: &BoundOptions,
) -> Result<Vec<ChainStep>> {
    let profile = CoherenceProfile::from_state(rho, params.beta)?;
    verify_chain_for_profile(&profile, params, opts)
}

/// Refuses with [`Error::ConditionViolated`] naming the first failing index
/// when the ordering conditions do not hold at `params`.
pub fn verify_chain_for_profile(
    profile: &CoherenceProfile,
    params: &BoundParams,
    opts: &BoundOptions,
) -> Result<Vec<ChainStep>> {
    let outcome = conditions(profile, params.k, params.m, opts)?;
    if let Some(fail) = outcome.first_failure() {
        return Err(Error::ConditionViolated {
            index: fail.index,
            side: fail.side,
            single: fail.single,
            tail: fail.tail,
            k: params.k,
        });
    }
    let rhs_final = theorem_rhs(profile, params)?;

    let n = profile.n();
    let (m, alpha) = (params.m, params.alpha);
    let f = lemma2_factor(params.k, alpha)?;
    let tol = opts.tol_ineq;
    let step = |kind, index, lhs: f64, rhs: f64| ChainStep {
        kind,
        index,
        lhs,
        rhs,
        passed: lhs >= rhs - tol,
    };

    let s = |i: usize| profile.single(i);
    let t = |i: usize| profile.tail_from(i);
    let whole = pow0(t(0), alpha);
    let mut steps = Vec::with_capacity(3 * n + 1);

    let mut prefix = 0.0;
    let mut coef = 1.0;
    for i in 1..=m {
        let joined = pow0(s(i) + t(i), alpha);
        steps.push(step(
            StepKind::Superadditivity,
            i,
            pow0(t(i - 1), alpha),
            joined,
        ));
        let split = pow0(s(i), alpha) + scaled(f, t(i), alpha);
        steps.push(step(StepKind::LeadingLemma, i, joined, split));
        prefix += scaled(coef, s(i), alpha);
        coef *= f;
        steps.push(step(
            StepKind::LeadingBound,
            i,
            whole,
            prefix + scaled(coef, t(i), alpha),
        ));
    }

    let head = pow0(t(m), alpha);
    let mut trailing = 0.0;
    for j in m + 1..n {
        let joined = pow0(s(j) + t(j), alpha);
        steps.push(step(
            StepKind::Superadditivity,
            j,
            pow0(t(j - 1), alpha),
            joined,
        ));
        let split = scaled(f, s(j), alpha) + pow0(t(j), alpha);
        steps.push(step(StepKind::TrailingLemma, j, joined, split));
        trailing += scaled(f, s(j), alpha);
        steps.push(step(
            StepKind::TrailingBound,
            j,
            head,
            trailing + pow0(t(j), alpha),
        ));
    }

    steps.push(step(StepKind::Combined, 0, whole, rhs_final));
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ConditionSide;

    fn example_profile() -> CoherenceProfile {
        CoherenceProfile::from_values(1.0, 2.2, vec![1.0, 0.0, 0.6], vec![0.6, 0.6]).unwrap()
    }

    #[test]
    fn example_chain_passes() {
        let params = BoundParams::new(0.6, 1, 2.0, 1.0).unwrap();
        let steps = verify_chain_for_profile(&example_profile(), &params, &BoundOptions::default())
            .unwrap();
        // 3 leading + 3 trailing + combined.
        assert_eq!(steps.len(), 7);
        assert!(steps.iter().all(|s| s.passed), "{steps:#?}");
        let last = steps.last().unwrap();
        assert_eq!(last.kind, StepKind::Combined);
        assert!((last.rhs - 64.0 / 25.0).abs() < 1e-12);
        assert!((last.lhs - 121.0 / 25.0).abs() < 1e-12);
    }

    #[test]
    fn refuses_when_conditions_fail() {
        let params = BoundParams::new(0.5, 1, 2.0, 1.0).unwrap();
        match verify_chain_for_profile(&example_profile(), &params, &BoundOptions::default()) {
            Err(Error::ConditionViolated {
                index: 1,
                side: ConditionSide::Leading,
                ..
            }) => {}
            other => panic!("expected refusal at index 1, got {other:?}"),
        }
    }
}
