//! Seeded random states and constructed product states.
//!
//! Every sample draws from its own ChaCha20 stream: the generator is keyed by
//! the master seed and the stream number is the sample index, so a sample is
//! a pure function of `(seed, index)` regardless of evaluation order or
//! worker count. Standalone functions taking only a seed use stream 0.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::qmatrix::{ComplexMatrix, PureState, QubitState};
use crate::{max_qubits, ConditionSide, Error, Result};

/// Pinned generator description recorded in sweep reports.
pub const RNG_ALGORITHM: &str =
    "chacha20 (rand_chacha 0.9; key = seed_from_u64(seed), stream = sample index); normals: rand_distr 0.5 StandardNormal";

pub fn sample_rng(seed: u64, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn check_n(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::arg(format!("need at least {min} qubits, got {n}")));
    }
    let max = max_qubits();
    if n > max {
        return Err(Error::SizeLimit { qubits: n, max });
    }
    Ok(())
}

/// Standard complex normal: independent real and imaginary parts with
/// variance 1/2 each.
fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * FRAC_1_SQRT_2
}

pub fn haar_pure(n: usize, seed: u64) -> Result<PureState> {
    haar_pure_with(n, &mut sample_rng(seed, 0))
}

/// Uniformly random pure state: normalized vector of complex normals.
pub fn haar_pure_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<PureState> {
    check_n(n, 1)?;
    let amps = (0..1usize << n).map(|_| complex_normal(rng)).collect();
    PureState::normalized(amps)
}

pub fn ginibre_mixed(n: usize, rank: usize, seed: u64) -> Result<QubitState> {
    ginibre_mixed_with(n, rank, &mut sample_rng(seed, 0))
}

/// `GG† / tr(GG†)` for a `2^n × rank` matrix `G` of complex normals.
pub fn ginibre_mixed_with<R: Rng + ?Sized>(
    n: usize,
    rank: usize,
    rng: &mut R,
) -> Result<QubitState> {
    check_n(n, 1)?;
    let dim = 1usize << n;
    if !(1..=dim).contains(&rank) {
        return Err(Error::arg(format!("rank {rank} must lie in [1, {dim}]")));
    }
    let g: Vec<Complex64> = (0..dim * rank).map(|_| complex_normal(rng)).collect();
    let norm: f64 = g.iter().map(|z| z.norm_sqr()).sum();
    let mut m = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in i..dim {
            let gi = &g[i * rank..(i + 1) * rank];
            let gj = &g[j * rank..(j + 1) * rank];
            let v: Complex64 = gi
                .iter()
                .zip(gj)
                .map(|(a, b)| a * b.conj())
                .sum::<Complex64>()
                / norm;
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        }
        m[(i, i)].im = 0.0;
    }
    Ok(QubitState::from_trusted(n, m))
}

/// Single-qubit pure state `a|0⟩ + e^{iφ} b|1⟩` with l1 coherence `2ab`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitTarget {
    /// Target coherence in `[0, 1]`.
    pub coherence: f64,
    pub phase: f64,
    /// Put the larger amplitude on `|1⟩` instead of `|0⟩`.
    pub upper: bool,
}

impl QubitTarget {
    pub fn new(coherence: f64) -> Self {
        Self {
            coherence,
            phase: 0.0,
            upper: false,
        }
    }

    pub fn upper(mut self) -> Self {
        self.upper = true;
        self
    }

    fn amplitudes(&self) -> Result<[Complex64; 2]> {
        let c = self.coherence;
        if !(0.0..=1.0).contains(&c) {
            return Err(Error::arg(format!(
                "target coherence {c} outside [0, 1] (a pure qubit has C_l1 <= 1)"
            )));
        }
        // a² = (1 + √(1-c²))/2, b = c/(2a), so a² + b² = 1 and 2ab = c.
        let big = ((1.0 + (1.0 - c * c).sqrt()) / 2.0).sqrt();
        let small = c / (2.0 * big);
        let (a, b) = if self.upper {
            (small, big)
        } else {
            (big, small)
        };
        Ok([Complex64::new(a, 0.0), Complex64::from_polar(b, self.phase)])
    }
}

/// Tensor product of single-qubit pure states, first target leftmost.
pub fn product_pure_from(targets: &[QubitTarget]) -> Result<PureState> {
    check_n(targets.len(), 1)?;
    let mut amps = vec![Complex64::new(1.0, 0.0)];
    for t in targets {
        let q = t.amplitudes()?;
        amps = amps
            .iter()
            .flat_map(|a| q.iter().map(move |b| a * b))
            .collect();
    }
    Ok(PureState::from_trusted(targets.len(), amps))
}

pub fn product_pure(n: usize, coherences: &[f64], seed: u64) -> Result<PureState> {
    product_pure_with(n, coherences, &mut sample_rng(seed, 0))
}

/// Product state with the given per-qubit coherences; phases and amplitude
/// ordering are drawn from `rng`.
pub fn product_pure_with<R: Rng + ?Sized>(
    n: usize,
    coherences: &[f64],
    rng: &mut R,
) -> Result<PureState> {
    if coherences.len() != n {
        return Err(Error::arg(format!(
            "expected {n} coherence targets, got {}",
            coherences.len()
        )));
    }
    let targets: Vec<QubitTarget> = coherences
        .iter()
        .map(|&coherence| QubitTarget {
            coherence,
            phase: rng.random::<f64>() * TAU,
            upper: rng.random::<bool>(),
        })
        .collect();
    product_pure_from(&targets)
}

/// `(|0⟩+|1⟩)/√2 ⊗ |0⟩ ⊗ (|0⟩+3|1⟩)/√10`.
pub fn reference_example() -> PureState {
    let r10 = 10f64.sqrt();
    let first = [FRAC_1_SQRT_2, FRAC_1_SQRT_2];
    let second = [1.0, 0.0];
    let third = [1.0 / r10, 3.0 / r10];
    let mut amps = Vec::with_capacity(8);
    for a in first {
        for b in second {
            for c in third {
                amps.push(Complex64::new(a * b * c, 0.0));
            }
        }
    }
    PureState::from_trusted(3, amps)
}

/// A choice point in [`targeted_coherences`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetSlot {
    /// 1-based qubit index.
    pub index: usize,
    pub side: ConditionSide,
    /// Admissible range for this coherence given the qubits to its right.
    pub lo: f64,
    pub hi: f64,
    /// Coherence of the product of every qubit to the right.
    pub tail: f64,
}

fn validate_targeted(n: usize, m: usize, k: f64) -> Result<()> {
    check_n(n, 3)?;
    if !(1..=n - 2).contains(&m) {
        return Err(Error::arg(format!("m = {m} must lie in [1, {}]", n - 2)));
    }
    if !(k > 0.0 && k <= 1.0) {
        return Err(Error::arg(format!("k = {k} must lie in (0, 1]")));
    }
    Ok(())
}

/// Solves per-qubit coherences right to left so that the ordering conditions
/// hold at `(k, m)`: `c_n = last`, then `c_j ∈ [0, min(1, k·tail_j)]` for
/// `j = n-1..=m+1` and `c_i ∈ [tail_i/k, 1]` for `i = m..=1`, where `tail` is
/// the product-state coherence of everything to the right. `pick` chooses
/// within each slot (results are clamped into it).
pub fn targeted_coherences(
    n: usize,
    m: usize,
    k: f64,
    last: f64,
    mut pick: impl FnMut(&TargetSlot) -> f64,
) -> Result<Vec<f64>> {
    validate_targeted(n, m, k)?;
    if !(0.0..=1.0).contains(&last) {
        return Err(Error::arg(format!("last coherence {last} outside [0, 1]")));
    }
    let mut c = vec![0.0; n];
    c[n - 1] = last;
    let mut tail = last;
    for pos in (0..n - 1).rev() {
        let index = pos + 1;
        let slot = if index > m {
            TargetSlot {
                index,
                side: ConditionSide::Trailing,
                lo: 0.0,
                hi: (k * tail).min(1.0),
                tail,
            }
        } else {
            let lo = tail / k;
            // Allow a few ulps of rounding in tail/k at the boundary.
            if lo > 1.0 + 1e-12 {
                return Err(Error::Infeasible {
                    index,
                    required: lo,
                });
            }
            let lo = lo.min(1.0);
            TargetSlot {
                index,
                side: ConditionSide::Leading,
                lo,
                hi: 1.0,
                tail,
            }
        };
        c[pos] = pick(&slot).clamp(slot.lo, slot.hi);
        tail = (1.0 + c[pos]) * (1.0 + tail) - 1.0;
    }
    Ok(c)
}

/// Largest tail coherence `T` to the right of the leading block such that the
/// `len` leading qubits can still be filled at their minimum `c = T/k ≤ 1`.
fn leading_capacity(len: usize, k: f64) -> f64 {
    let mut cap = f64::INFINITY;
    for _ in 0..len {
        // Largest T with T/k ≤ 1 and (1 + T/k)(1 + T) - 1 ≤ cap.
        let b = 1.0 + 1.0 / k;
        let t = if cap.is_infinite() {
            f64::INFINITY
        } else {
            2.0 * cap / (b + (b * b + 4.0 * cap / k).sqrt())
        };
        cap = t.min(k);
    }
    cap
}

/// Shrink applied to random picks so rounding never lands on an infeasible
/// boundary.
const PICK_MARGIN: f64 = 1.0 - 1e-9;

pub fn targeted(n: usize, m: usize, k: f64, seed: u64) -> Result<PureState> {
    targeted_with(n, m, k, &mut sample_rng(seed, 0))
}

/// Random product state satisfying the ordering conditions at `(k, m)`.
/// Picks are capped so the chain always stays feasible.
pub fn targeted_with<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    k: f64,
    rng: &mut R,
) -> Result<PureState> {
    validate_targeted(n, m, k)?;
    let caps: Vec<f64> = (0..=m).map(|len| leading_capacity(len, k)).collect();
    let last = rng.random::<f64>() * caps[m].min(1.0) * PICK_MARGIN;
    let coherences = targeted_coherences(n, m, k, last, |slot| {
        // After this pick, the remaining leading qubits are 1..index-1 (or
        // all m of them for a trailing slot).
        let remaining = if slot.side == ConditionSide::Leading {
            slot.index - 1
        } else {
            m
        };
        let cap = (1.0 + caps[remaining]) / (1.0 + slot.tail) - 1.0;
        let hi = slot.hi.min(cap).max(slot.lo);
        let u: f64 = rng.random();
        slot.lo + u * (hi - slot.lo) * PICK_MARGIN
    })?;
    product_pure_with(n, &coherences, rng)
}

/// Ensemble selector for sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SamplerKind {
    HaarPure {},
    /// `rank` absent or null means full rank.
    GinibreMixed {
        #[serde(default)]
        rank: Option<usize>,
    },
    /// Per-qubit coherences drawn uniformly from `[0, 1]`.
    ProductPure {},
    /// Condition-satisfying product states; `m` and `k` are drawn per sample
    /// when absent.
    Targeted {
        #[serde(default)]
        m: Option<usize>,
        #[serde(default)]
        k: Option<f64>,
    },
}

impl SamplerKind {
    pub fn name(&self) -> &'static str {
        match self {
            SamplerKind::HaarPure {} => "haar_pure",
            SamplerKind::GinibreMixed { .. } => "ginibre_mixed",
            SamplerKind::ProductPure {} => "product_pure",
            SamplerKind::Targeted { .. } => "targeted",
        }
    }
}

/// A fully specified sampler: sample `i` is a pure function of these fields and `i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplerSpec {
    pub kind: SamplerKind,
    pub n_qubits: usize,
    pub seed: u64,
}

impl SamplerSpec {
    pub fn validate(&self) -> Result<()> {
        let n = self.n_qubits;
        let min = if matches!(self.kind, SamplerKind::Targeted { .. }) {
            3
        } else {
            2
        };
        check_n(n, min)?;
        match self.kind {
            SamplerKind::GinibreMixed { rank: Some(r) } if !(1..=1usize << n).contains(&r) => Err(
                Error::arg(format!("rank {r} must lie in [1, {}]", 1usize << n)),
            ),
            SamplerKind::Targeted { m, k } => {
                if let Some(m) = m {
                    if !(1..=n - 2).contains(&m) {
                        return Err(Error::arg(format!("m = {m} must lie in [1, {}]", n - 2)));
                    }
                }
                if let Some(k) = k {
                    if !(k > 0.0 && k <= 1.0) {
                        return Err(Error::arg(format!("k = {k} must lie in (0, 1]")));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn sample(&self, index: u64) -> Result<QubitState> {
        let n = self.n_qubits;
        let rng = &mut sample_rng(self.seed, index);
        match self.kind {
            SamplerKind::HaarPure {} => Ok(QubitState::from_pure(&haar_pure_with(n, rng)?)),
            SamplerKind::GinibreMixed { rank } => {
                ginibre_mixed_with(n, rank.unwrap_or(1 << n), rng)
            }
            SamplerKind::ProductPure {} => {
                let targets: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
                Ok(QubitState::from_pure(&product_pure_with(n, &targets, rng)?))
            }
            SamplerKind::Targeted { m, k } => {
                let m = m.unwrap_or_else(|| rng.random_range(1..=n - 2));
                // (0, 1]
                let k = k.unwrap_or_else(|| 1.0 - rng.random::<f64>());
                Ok(QubitState::from_pure(&targeted_with(n, m, k, rng)?))
            }
        }
    }
}
