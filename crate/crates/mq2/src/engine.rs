//! Evaluation engine: implicit application of matrix families to sparse
//! states, acceptance probabilities, verdicts and dense materialization.
//!
//! The engine never asks a family for more than single entries. One
//! application costs `O(|support| · dimension)` oracle calls: for every
//! destination index it folds the current support through the entry oracle.
//! Exact zeros are dropped as they appear, so sparsity survives wherever the
//! family actually preserves it. Destination sums run in increasing source
//! order and destinations are visited in increasing order, which makes every
//! probability this module reports reproducible bit for bit.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::model::{
    Amplitude, BitString, DecisionMode, MachineSpec, MatrixFamily, StateVector,
};

/// Hard ceiling on configuration-space dimensions. This laboratory is for
/// desk-scale instances that can be checked exactly; anything bigger is
/// refused rather than approximated.
pub const DIMENSION_CAP: u64 = 1 << 24;

/// Default ceiling for dense materialization.
pub const MATERIALIZE_CAP: u64 = 4096;

/// Absolute ceiling for dense materialization regardless of the caller's cap;
/// a dense matrix at this dimension is already 64 Gi entries away from sane.
const MATERIALIZE_HARD_CAP: u64 = 1 << 16;

/// Tolerance for the exact-probability comparisons in the P and NP modes.
pub const EQUALITY_TOLERANCE: f64 = 1e-9;

/// Bounded-error acceptance threshold shared by MQ2, BQP and BPP.
pub const ACCEPT_THRESHOLD: f64 = 2.0 / 3.0;

/// Bounded-error rejection threshold shared by MQ2, BQP and BPP.
pub const REJECT_THRESHOLD: f64 = 1.0 / 3.0;

/// Roundoff slack allowed above 1 before a probability is considered broken.
const PROBABILITY_SLACK: f64 = 1e-9;

/// One application: `out[to] = Σ_from entry(from, to, n) · v[from]` over the
/// sparse support of `v`, for every destination `to`.
pub fn apply_family(family: &MatrixFamily, state: &StateVector) -> Result<StateVector> {
    let n = state.size_param();
    let dimension = family.dimension(n);
    if dimension > DIMENSION_CAP {
        return Err(Error::DimensionCap {
            dimension,
            cap: DIMENSION_CAP,
        });
    }
    if let Some(max_index) = state.max_index() {
        if max_index >= dimension {
            return Err(Error::DimensionMismatch {
                family: family.name().to_string(),
                state_dim: max_index + 1,
                family_dim: dimension,
                size_param: n,
            });
        }
    }

    let support: Vec<(u64, Amplitude)> = state.iter().collect();
    let mut result: Vec<(u64, Amplitude)> = Vec::new();
    for to in 0..dimension {
        let mut acc = Amplitude::new(0.0, 0.0);
        for &(from, value) in &support {
            acc += family.entry(from, to, n) * value;
            if !acc.re.is_finite() || !acc.im.is_finite() {
                return Err(Error::NonFiniteAmplitude {
                    from,
                    to,
                    size_param: n,
                });
            }
        }
        if acc.re != 0.0 || acc.im != 0.0 {
            result.push((to, acc));
        }
    }
    Ok(StateVector::from_entries(n, state.semantics(), result))
}

/// `T^k` applied by `k` successive single applications, `k ≥ 1`.
pub fn apply_power(family: &MatrixFamily, state: &StateVector, k: u32) -> Result<StateVector> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "apply_power needs a positive application count".into(),
        ));
    }
    let mut current = apply_family(family, state)?;
    for _ in 1..k {
        current = apply_family(family, &current)?;
    }
    Ok(current)
}

struct RunOutcome {
    final_state: StateVector,
    raw_probability: f64,
    applications: u32,
}

fn run_machine(spec: &MachineSpec, x: &BitString) -> Result<RunOutcome> {
    let violations = spec.validate_for(x);
    if !violations.is_empty() {
        let joined = violations
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("; ");
        return Err(Error::InvalidArgument(format!(
            "machine `{}` is not well-formed: {joined}",
            spec.name()
        )));
    }

    let n = spec.size_for(x);
    let applications = spec.applications_for(n);
    let initial = spec.initial_state(x);
    let final_state = apply_power(spec.family(), &initial, applications)?;

    // `Sum for f64` folds from -0.0, so an empty accepting set would yield
    // a negative zero; `+ 0.0` normalizes the sign and changes nothing else
    let raw_probability: f64 = final_state
        .iter()
        .filter(|&(index, _)| spec.accepts(x, index))
        .map(|(index, _)| final_state.weight(index))
        .sum::<f64>()
        + 0.0;

    Ok(RunOutcome {
        final_state,
        raw_probability,
        applications,
    })
}

/// The probability that the machine accepts `x`: total measurement weight of
/// accepting configurations in the final state. Under amplitude semantics
/// that is `Σ |⟨c|T^k|I(x)⟩|²` over accepting `c`; under probability
/// semantics the plain sum. The result is clamped to `[0, 1 + 1e−9]`; the
/// raw value is available through [`decide`].
pub fn acceptance_probability(spec: &MachineSpec, x: &BitString) -> Result<f64> {
    let outcome = run_machine(spec, x)?;
    Ok(outcome.raw_probability.clamp(0.0, 1.0 + PROBABILITY_SLACK))
}

/// The verdict a decision mode assigns to an acceptance probability.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Accept,
    Reject,
    /// The probability landed strictly between the mode's two thresholds,
    /// which a machine honoring its promise never produces.
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Accept => "Accept",
            Verdict::Reject => "Reject",
            Verdict::Inconclusive => "Inconclusive",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Pure threshold table:
///
/// | mode | accept | reject |
/// |------|--------|--------|
/// | P    | = 1 (±1e−9) | = 0 (±1e−9) |
/// | NP   | > 0 (beyond 1e−9) | otherwise |
/// | PP   | > ½ | ≤ ½ |
/// | MQ2, BQP, BPP | ≥ ⅔ | ≤ ⅓ |
///
/// Anything caught strictly between accept and reject is [`Verdict::Inconclusive`].
pub fn verdict_for(mode: DecisionMode, probability: f64) -> Verdict {
    match mode {
        DecisionMode::P => {
            if (probability - 1.0).abs() <= EQUALITY_TOLERANCE {
                Verdict::Accept
            } else if probability.abs() <= EQUALITY_TOLERANCE {
                Verdict::Reject
            } else {
                Verdict::Inconclusive
            }
        }
        DecisionMode::Np => {
            if probability > EQUALITY_TOLERANCE {
                Verdict::Accept
            } else {
                Verdict::Reject
            }
        }
        DecisionMode::Pp => {
            if probability > 0.5 {
                Verdict::Accept
            } else {
                Verdict::Reject
            }
        }
        DecisionMode::Mq2 | DecisionMode::Bqp | DecisionMode::Bpp => {
            if probability >= ACCEPT_THRESHOLD {
                Verdict::Accept
            } else if probability <= REJECT_THRESHOLD {
                Verdict::Reject
            } else {
                Verdict::Inconclusive
            }
        }
    }
}

/// Outcome of one full decision run.
#[derive(Clone, Debug)]
pub struct DecisionReport {
    /// Acceptance probability clamped into `[0, 1]`.
    pub probability: f64,
    /// The unclamped sum, for diagnosing semantic drift.
    pub raw_probability: f64,
    pub mode: DecisionMode,
    pub verdict: Verdict,
    pub applications: u32,
    pub elapsed: Duration,
    /// Per-configuration contributions of the accepting support.
    pub breakdown: BTreeMap<u64, f64>,
}

impl DecisionReport {
    /// The stable wire form: `{probability, mode, verdict, applications,
    /// elapsed_ms}`.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "probability": self.probability,
            "mode": self.mode.as_str(),
            "verdict": self.verdict.as_str(),
            "applications": self.applications,
            "elapsed_ms": self.elapsed.as_secs_f64() * 1e3,
        })
    }
}

/// Runs the machine on `x` and scores the result under the machine's mode.
pub fn decide(spec: &MachineSpec, x: &BitString) -> Result<DecisionReport> {
    let started = Instant::now();
    let outcome = run_machine(spec, x)?;
    let probability = outcome.raw_probability.clamp(0.0, 1.0);

    let breakdown: BTreeMap<u64, f64> = outcome
        .final_state
        .iter()
        .filter(|&(index, _)| spec.accepts(x, index))
        .map(|(index, _)| (index, outcome.final_state.weight(index)))
        .collect();

    Ok(DecisionReport {
        probability,
        raw_probability: outcome.raw_probability,
        mode: spec.mode(),
        verdict: verdict_for(spec.mode(), probability),
        applications: outcome.applications,
        elapsed: started.elapsed(),
        breakdown,
    })
}

/// A fully materialized matrix, row-major with `at(to, from)` layout.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    dimension: usize,
    data: Vec<Amplitude>,
}

impl DenseMatrix {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn at(&self, to: usize, from: usize) -> Amplitude {
        self.data[to * self.dimension + from]
    }

    pub fn row(&self, to: usize) -> &[Amplitude] {
        &self.data[to * self.dimension..(to + 1) * self.dimension]
    }

    /// Dense matrix–vector product, the cross-check route for the sparse
    /// engine path.
    pub fn apply(&self, v: &[Amplitude]) -> Vec<Amplitude> {
        assert_eq!(v.len(), self.dimension, "vector length mismatch");
        (0..self.dimension)
            .map(|to| {
                self.row(to)
                    .iter()
                    .zip(v)
                    .map(|(m, x)| m * x)
                    .sum::<Amplitude>()
            })
            .collect()
    }
}

/// Evaluates every entry of `T_n` into a dense matrix. Refused above
/// `min(cap, 65536)`; use it for small cross-checks, not for running
/// machines.
pub fn materialize(family: &MatrixFamily, n: u32, cap: u64) -> Result<DenseMatrix> {
    let dimension = family.dimension(n);
    let effective_cap = cap.min(MATERIALIZE_HARD_CAP);
    if dimension > effective_cap {
        return Err(Error::DimensionCap {
            dimension,
            cap: effective_cap,
        });
    }
    let dim = dimension as usize;
    let mut data = Vec::with_capacity(dim * dim);
    for to in 0..dimension {
        for from in 0..dimension {
            data.push(family.entry(from, to, n));
        }
    }
    Ok(DenseMatrix {
        dimension: dim,
        data,
    })
}
