use serde::Serialize;

use super::lemmas::{check_exponent, check_k, lemma2_factor};
use super::profile::CoherenceProfile;
use crate::qmatrix::QubitState;
use crate::{ConditionSide, Error, Result, TOL_INEQ};

/// Form of the ordering condition imposed on the trailing indices
/// `j = m+1..=n-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TailCondition {
    /// `C^β(A_j) ≤ k·C^β(A_{j+1}⋯A_n)`. This is what the chaining step for
    /// trailing indices consumes (the scalar lemma needs its ratio `≤ k`), and
    /// the bound is sound under it.
    #[default]
    Scaled,
    /// `C^β(A_j) ≤ C^β(A_{j+1}⋯A_n) / k`. Weaker than [`Scaled`](Self::Scaled)
    /// for `k < 1` and not sufficient for the bound: see the
    /// `reciprocal_form_admits_counterexample` test.
    Reciprocal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundOptions {
    /// Absolute tolerance for every inequality comparison.
    pub tol_ineq: f64,
    pub tail_condition: TailCondition,
}

impl Default for BoundOptions {
    fn default() -> Self {
        Self {
            tol_ineq: TOL_INEQ,
            tail_condition: TailCondition::Scaled,
        }
    }
}

impl BoundOptions {
    pub fn with_tol(tol_ineq: f64) -> Self {
        Self {
            tol_ineq,
            ..Self::default()
        }
    }
}

/// Free parameters of the bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundParams {
    pub k: f64,
    pub m: usize,
    pub alpha: f64,
    pub beta: f64,
}

impl BoundParams {
    pub fn new(k: f64, m: usize, alpha: f64, beta: f64) -> Result<Self> {
        check_k(k)?;
        check_exponent("alpha", alpha)?;
        check_exponent("beta", beta)?;
        if m == 0 {
            return Err(Error::arg("m must be >= 1"));
        }
        Ok(Self { k, m, alpha, beta })
    }

    fn check_against(&self, profile: &CoherenceProfile) -> Result<()> {
        check_m(self.m, profile.n())?;
        if self.beta != profile.beta() {
            return Err(Error::arg(format!(
                "params beta {} does not match profile beta {}",
                self.beta,
                profile.beta()
            )));
        }
        Ok(())
    }
}

pub(crate) fn check_m(m: usize, n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::arg(format!(
            "the bound needs n >= 3 qubits, got {n}"
        )));
    }
    if !(1..=n - 2).contains(&m) {
        return Err(Error::arg(format!("m = {m} must lie in [1, {}]", n - 2)));
    }
    Ok(())
}

/// One evaluated ordering condition (1-based index).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionCheck {
    pub index: usize,
    pub side: ConditionSide,
    pub single: f64,
    pub tail: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionOutcome {
    pub met: bool,
    pub checks: Vec<ConditionCheck>,
}

impl ConditionOutcome {
    pub fn first_failure(&self) -> Option<&ConditionCheck> {
        self.checks.iter().find(|c| !c.satisfied)
    }
}

/// Evaluates the ordering conditions at `(k, m)`:
/// `singles[i] ≥ tails[i]/k` for `i = 1..=m`, and the trailing form selected
/// by `opts.tail_condition` for `j = m+1..=n-1`, each softened by `tol_ineq`.
pub fn conditions(
    profile: &CoherenceProfile,
    k: f64,
    m: usize,
    opts: &BoundOptions,
) -> Result<ConditionOutcome> {
    check_k(k)?;
    let n = profile.n();
    check_m(m, n)?;
    let tol = opts.tol_ineq;
    let checks: Vec<ConditionCheck> = (1..n)
        .map(|i| {
            let (single, tail) = (profile.single(i), profile.tail_from(i));
            let (side, satisfied) = if i <= m {
                (ConditionSide::Leading, single >= tail / k - tol)
            } else {
                let bound = match opts.tail_condition {
                    TailCondition::Scaled => k * tail,
                    TailCondition::Reciprocal => tail / k,
                };
                (ConditionSide::Trailing, single <= bound + tol)
            };
            ConditionCheck {
                index: i,
                side,
                single,
                tail,
                satisfied,
            }
        })
        .collect();
    Ok(ConditionOutcome {
        met: checks.iter().all(|c| c.satisfied),
        checks,
    })
}

/// `f·v^α`-style term that is exactly zero when `v` is, even if `f`
/// overflowed.
fn weighted(coef: f64, value: f64, alpha: f64) -> f64 {
    if value == 0.0 {
        0.0
    } else {
        coef * value.powf(alpha)
    }
}

/// Right-hand side of the bound on `C^{αβ}(ρ_{A_1⋯A_n})` with
/// `f = lemma2_factor(k, α)`:
///
/// `Σ_{i=1}^{m} f^{i-1} s_i^α + f^{m+1} Σ_{j=m+1}^{n-1} s_j^α + f^m s_n^α`
///
/// where `s_i` are the profile's β-powered singles. Does not check the
/// ordering conditions.
pub fn theorem_rhs(profile: &CoherenceProfile, params: &BoundParams) -> Result<f64> {
    params.check_against(profile)?;
    let n = profile.n();
    let (m, alpha) = (params.m, params.alpha);
    let f = lemma2_factor(params.k, alpha)?;
    let leading: f64 = (1..=m)
        .map(|i| weighted(f.powi(i as i32 - 1), profile.single(i), alpha))
        .sum();
    let trailing: f64 = (m + 1..n)
        .map(|j| weighted(f.powi(m as i32 + 1), profile.single(j), alpha))
        .sum();
    let last = weighted(f.powi(m as i32), profile.single(n), alpha);
    Ok(leading + trailing + last)
}

/// `Σ_i s_i^α`, the iterated bipartite floor.
pub fn plain_sum_rhs(profile: &CoherenceProfile, alpha: f64) -> Result<f64> {
    check_exponent("alpha", alpha)?;
    Ok(profile
        .singles()
        .iter()
        .map(|&s| weighted(1.0, s, alpha))
        .sum())
}

/// Closed interval of admissible `k` for a fixed `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KInterval {
    pub lo: f64,
    pub hi: f64,
}

impl KInterval {
    /// The `k` giving the largest coefficient: `lo` when positive, else `hi`.
    pub fn preferred(&self) -> f64 {
        if self.lo > 0.0 {
            self.lo
        } else {
            self.hi
        }
    }
}

/// The set of `k ∈ (0, 1]` satisfying the ordering conditions at `m`,
/// computed from exact ratios (`0/0` imposes no constraint, `positive/0` is
/// infeasible). `None` when empty.
pub fn admissible_k(
    profile: &CoherenceProfile,
    m: usize,
    opts: &BoundOptions,
) -> Result<Option<KInterval>> {
    let n = profile.n();
    check_m(m, n)?;
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    for i in 1..=m {
        let (s, t) = (profile.single(i), profile.tail_from(i));
        // s ≥ t/k  ⟺  k ≥ t/s
        if t > 0.0 {
            if s == 0.0 {
                return Ok(None);
            }
            lo = lo.max(t / s);
        }
    }
    for j in m + 1..n {
        let (s, t) = (profile.single(j), profile.tail_from(j));
        if s == 0.0 {
            continue;
        }
        if t == 0.0 {
            return Ok(None);
        }
        match opts.tail_condition {
            // s ≤ k·t  ⟺  k ≥ s/t
            TailCondition::Scaled => lo = lo.max(s / t),
            // s ≤ t/k  ⟺  k ≤ t/s
            TailCondition::Reciprocal => hi = hi.min(t / s),
        }
    }
    if lo > 1.0 || lo > hi {
        return Ok(None);
    }
    Ok(Some(KInterval { lo, hi }))
}

/// Picks `k` from the interval and nudges it upward by a few ulps if rounding
/// in the ratio left the conditions marginally unmet.
fn settle_k(
    profile: &CoherenceProfile,
    m: usize,
    interval: &KInterval,
    opts: &BoundOptions,
) -> Result<Option<(f64, ConditionOutcome)>> {
    let mut k = interval.preferred();
    for _ in 0..16 {
        let outcome = conditions(profile, k, m, opts)?;
        if outcome.met {
            return Ok(Some((k, outcome)));
        }
        let next = k.next_up();
        if next > interval.hi.next_up() || next > 1.0 {
            break;
        }
        k = next;
    }
    Ok(None)
}

/// One bound evaluation. `m`, `k` and `per_condition` describe the chosen
/// parameters and are empty when no admissible `(k, m)` exists, in which
/// case `rhs_theorem` falls back to `rhs_plain_sum`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub m: Option<usize>,
    pub k: Option<f64>,
    /// `C^{αβ}` of the whole state.
    pub lhs: f64,
    pub rhs_theorem: f64,
    /// Best right-hand side at `k = 1` over admissible `m`; falls back to
    /// `rhs_plain_sum`.
    pub rhs_baseline_k1: f64,
    pub rhs_plain_sum: f64,
    pub gap: f64,
    pub conditions_met: bool,
    #[serde(skip)]
    pub per_condition: Vec<ConditionCheck>,
}

/// Column order of [`BoundReport::csv_fields`].
pub const REPORT_CSV_HEADER: [&str; 11] = [
    "n",
    "alpha",
    "beta",
    "m",
    "k",
    "lhs",
    "rhs_theorem",
    "rhs_baseline_k1",
    "rhs_plain_sum",
    "gap",
    "conditions_met",
];

/// 17 significant digits, '.' decimal: round-trips every double.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl BoundReport {
    pub fn csv_fields(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            format_f64(self.alpha),
            format_f64(self.beta),
            self.m.map(|m| m.to_string()).unwrap_or_default(),
            self.k.map(format_f64).unwrap_or_default(),
            format_f64(self.lhs),
            format_f64(self.rhs_theorem),
            format_f64(self.rhs_baseline_k1),
            format_f64(self.rhs_plain_sum),
            format_f64(self.gap),
            self.conditions_met.to_string(),
        ]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// Whether the whole-state value falls below the claimed bound.
    pub fn is_violation(&self, tol: f64) -> bool {
        self.lhs < self.rhs_theorem - tol
    }

    pub fn params(&self) -> Option<BoundParams> {
        Some(BoundParams {
            k: self.k?,
            m: self.m?,
            alpha: self.alpha,
            beta: self.beta,
        })
    }
}

/// Tightest bound for `rho` at `(α, β)` with default options.
pub fn best_bound(rho: &QubitState, alpha: f64, beta: f64) -> Result<BoundReport> {
    best_bound_with(rho, alpha, beta, &BoundOptions::default())
}

pub fn best_bound_with(
    rho: &QubitState,
    alpha: f64,
    beta: f64,
    opts: &BoundOptions,
) -> Result<BoundReport> {
    check_exponent("alpha", alpha)?;
    if rho.n_qubits() < 3 {
        return Err(Error::arg(format!(
            "the bound needs n >= 3 qubits, got {}",
            rho.n_qubits()
        )));
    }
    let profile = CoherenceProfile::from_state(rho, beta)?;
    best_bound_for_profile(&profile, alpha, opts)
}

/// Searches `m = 1..=n-2`, taking the preferred admissible `k` for each and
/// keeping the largest right-hand side (ties go to the smallest `m`).
pub fn best_bound_for_profile(
    profile: &CoherenceProfile,
    alpha: f64,
    opts: &BoundOptions,
) -> Result<BoundReport> {
    check_exponent("alpha", alpha)?;
    let n = profile.n();
    if n < 3 {
        return Err(Error::arg(format!(
            "the bound needs n >= 3 qubits, got {n}"
        )));
    }
    let beta = profile.beta();
    let lhs = weighted(1.0, profile.total(), alpha);
    let plain = plain_sum_rhs(profile, alpha)?;

    let mut best: Option<(f64, usize, f64, ConditionOutcome)> = None;
    let mut baseline: Option<f64> = None;
    for m in 1..=n - 2 {
        if let Some(interval) = admissible_k(profile, m, opts)? {
            if let Some((k, outcome)) = settle_k(profile, m, &interval, opts)? {
                let rhs = theorem_rhs(profile, &BoundParams::new(k, m, alpha, beta)?)?;
                if best.as_ref().is_none_or(|(b, ..)| rhs > *b) {
                    best = Some((rhs, m, k, outcome));
                }
            }
        }
        if conditions(profile, 1.0, m, opts)?.met {
            let rhs = theorem_rhs(profile, &BoundParams::new(1.0, m, alpha, beta)?)?;
            baseline = Some(baseline.map_or(rhs, |b: f64| b.max(rhs)));
        }
    }

    let (rhs_theorem, m, k, per_condition, met) = match best {
        Some((rhs, m, k, outcome)) => (rhs, Some(m), Some(k), outcome.checks, true),
        None => (plain, None, None, Vec::new(), false),
    };
    Ok(BoundReport {
        n,
        alpha,
        beta,
        m,
        k,
        lhs,
        rhs_theorem,
        rhs_baseline_k1: baseline.unwrap_or(plain),
        rhs_plain_sum: plain,
        gap: lhs - rhs_theorem,
        conditions_met: met,
        per_condition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Coherences of the three-qubit example `(|0⟩+|1⟩)/√2 ⊗ |0⟩ ⊗ (|0⟩+3|1⟩)/√10`.
    fn example_profile() -> CoherenceProfile {
        CoherenceProfile::from_values(1.0, 2.2, vec![1.0, 0.0, 0.6], vec![0.6, 0.6]).unwrap()
    }

    fn opts() -> BoundOptions {
        BoundOptions::default()
    }

    #[test]
    fn example_conditions() {
        let p = example_profile();
        assert!(conditions(&p, 0.6, 1, &opts()).unwrap().met);
        let out = conditions(&p, 0.5, 1, &opts()).unwrap();
        assert!(!out.met);
        let fail = out.first_failure().unwrap();
        assert_eq!((fail.index, fail.side), (1, ConditionSide::Leading));
    }

    #[test]
    fn conditions_argument_errors() {
        let p = example_profile();
        assert!(conditions(&p, 0.6, 0, &opts()).is_err());
        assert!(conditions(&p, 0.6, 2, &opts()).is_err());
        assert!(conditions(&p, 0.0, 1, &opts()).is_err());
    }

    #[test]
    fn zero_tails_leading_side_always_holds() {
        let p =
            CoherenceProfile::from_values(1.0, 0.3, vec![0.3, 0.0, 0.0], vec![0.0, 0.0]).unwrap();
        for k in [0.05, 0.5, 1.0] {
            let out = conditions(&p, k, 1, &opts()).unwrap();
            assert!(out.met);
        }
        assert_eq!(
            admissible_k(&p, 1, &opts()).unwrap(),
            Some(KInterval { lo: 0.0, hi: 1.0 })
        );
    }

    #[test]
    fn example_rhs_values() {
        let p = example_profile();
        let rhs = theorem_rhs(&p, &BoundParams::new(0.6, 1, 2.0, 1.0).unwrap()).unwrap();
        assert!((rhs - 64.0 / 25.0).abs() < 1e-12);
        let base = theorem_rhs(&p, &BoundParams::new(1.0, 1, 2.0, 1.0).unwrap()).unwrap();
        assert!((base - 52.0 / 25.0).abs() < 1e-12);
        assert!((plain_sum_rhs(&p, 2.0).unwrap() - 34.0 / 25.0).abs() < 1e-12);
    }

    #[test]
    fn zero_profile_gives_zero() {
        let p = CoherenceProfile::from_values(1.0, 0.0, vec![0.0; 4], vec![0.0; 3]).unwrap();
        for m in 1..=2 {
            let params = BoundParams::new(0.3, m, 2.5, 1.0).unwrap();
            assert_eq!(theorem_rhs(&p, &params).unwrap(), 0.0);
        }
        assert_eq!(plain_sum_rhs(&p, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn single_nonzero_plain_sum() {
        let p =
            CoherenceProfile::from_values(1.0, 0.7, vec![0.0, 0.7, 0.0], vec![0.7, 0.0]).unwrap();
        assert_eq!(plain_sum_rhs(&p, 3.0).unwrap(), 0.7_f64.powf(3.0));
    }

    #[test]
    fn alpha_one_degenerates_to_plain_sum() {
        let p = example_profile();
        for k in [0.6, 0.8, 1.0] {
            let rhs = theorem_rhs(&p, &BoundParams::new(k, 1, 1.0, 1.0).unwrap()).unwrap();
            assert_eq!(rhs, plain_sum_rhs(&p, 1.0).unwrap());
        }
    }

    #[test]
    fn theorem_rhs_rejects_beta_mismatch() {
        let p = example_profile();
        assert!(theorem_rhs(&p, &BoundParams::new(0.6, 1, 2.0, 2.0).unwrap()).is_err());
    }

    #[test]
    fn example_admissible_interval() {
        let p = example_profile();
        let iv = admissible_k(&p, 1, &opts()).unwrap().unwrap();
        assert!((iv.lo - 0.6).abs() < 1e-15);
        assert_eq!(iv.hi, 1.0);
        let rec = BoundOptions {
            tail_condition: TailCondition::Reciprocal,
            ..opts()
        };
        let iv = admissible_k(&p, 1, &rec).unwrap().unwrap();
        assert!((iv.lo - 0.6).abs() < 1e-15);
        assert_eq!(iv.hi, 1.0);
    }

    #[test]
    fn infeasible_when_tail_exceeds_single() {
        // k_lo = tails[1]/singles[1] = 2 > 1.
        let p = CoherenceProfile::from_values(1.0, 7.0, vec![1.0; 3], vec![2.0, 1.0]).unwrap();
        assert_eq!(admissible_k(&p, 1, &opts()).unwrap(), None);
        let rec = BoundOptions {
            tail_condition: TailCondition::Reciprocal,
            ..opts()
        };
        assert_eq!(admissible_k(&p, 1, &rec).unwrap(), None);
    }

    #[test]
    fn positive_single_over_zero_tail_is_infeasible() {
        let p =
            CoherenceProfile::from_values(1.0, 1.0, vec![0.0, 0.0, 1.0], vec![1.0, 1.0]).unwrap();
        // Leading i=1: single 0, tail 1.
        assert_eq!(admissible_k(&p, 1, &opts()).unwrap(), None);
        let p =
            CoherenceProfile::from_values(1.0, 1.0, vec![0.5, 0.5, 0.0], vec![0.5, 0.0]).unwrap();
        // Trailing j=2: single 0.5, tail 0.
        assert_eq!(admissible_k(&p, 1, &opts()).unwrap(), None);
    }

    #[test]
    fn best_bound_on_example_profile() {
        let p = example_profile();
        let r = best_bound_for_profile(&p, 2.0, &opts()).unwrap();
        assert_eq!(r.m, Some(1));
        assert!((r.k.unwrap() - 0.6).abs() < 1e-12);
        assert!((r.rhs_theorem - 64.0 / 25.0).abs() < 1e-12);
        assert!((r.rhs_baseline_k1 - 52.0 / 25.0).abs() < 1e-12);
        assert!((r.lhs - 121.0 / 25.0).abs() < 1e-12);
        assert!(r.conditions_met);
        assert_eq!(r.per_condition.len(), 2);
    }

    #[test]
    fn best_bound_falls_back_to_plain_sum() {
        let p = CoherenceProfile::from_values(1.0, 7.0, vec![1.0; 3], vec![3.0, 1.0]).unwrap();
        let r = best_bound_for_profile(&p, 2.0, &opts()).unwrap();
        assert!(!r.conditions_met);
        assert_eq!(r.m, None);
        assert_eq!(r.rhs_theorem, r.rhs_plain_sum);
        assert_eq!(r.rhs_baseline_k1, r.rhs_plain_sum);
        assert!(r.per_condition.is_empty());
    }

    #[test]
    fn reciprocal_form_admits_counterexample() {
        // Product-state coherences c = (0.56, 0.05, 0.005): tail_2 = c_3,
        // tail_1 = (1+c_2)(1+c_3) - 1.
        let c = [0.56, 0.05, 0.005];
        let t2 = c[2];
        let t1 = (1.0 + c[1]) * (1.0 + c[2]) - 1.0;
        let total = (1.0 + c[0]) * (1.0 + t1) - 1.0;
        let p = CoherenceProfile::from_values(1.0, total, c.to_vec(), vec![t1, t2]).unwrap();
        let k = t1 / c[0];
        let rec = BoundOptions {
            tail_condition: TailCondition::Reciprocal,
            ..opts()
        };
        assert!(conditions(&p, k, 1, &rec).unwrap().met);
        assert!(!conditions(&p, k, 1, &opts()).unwrap().met);
        let params = BoundParams::new(k, 1, 2.0, 1.0).unwrap();
        let rhs = theorem_rhs(&p, &params).unwrap();
        let lhs = total.powi(2);
        assert!(rhs > lhs + 0.9, "rhs {rhs} should exceed lhs {lhs}");
        let r = best_bound_for_profile(&p, 2.0, &rec).unwrap();
        assert!(r.is_violation(TOL_INEQ));
        let r = best_bound_for_profile(&p, 2.0, &opts()).unwrap();
        assert!(!r.is_violation(TOL_INEQ));
    }

    #[test]
    fn csv_fields_match_header() {
        let r = best_bound_for_profile(&example_profile(), 2.0, &opts()).unwrap();
        let fields = r.csv_fields();
        assert_eq!(fields.len(), REPORT_CSV_HEADER.len());
        assert_eq!(fields[0], "3");
        assert_eq!(fields[3], "1");
        assert_eq!(fields[10], "true");
        assert_eq!(fields[5].parse::<f64>().unwrap(), r.lhs);
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let obj = json.as_object().unwrap();
        assert_eq!(obj.len(), 11);
        assert!(obj.values().all(|v| !v.is_object() && !v.is_array()));
    }
}
