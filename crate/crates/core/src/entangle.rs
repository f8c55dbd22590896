//! Converting coherence into bipartite entanglement.
//!
//! A generalized CNOT with an incoherent ancilla maps `Σ a_j |j>` to
//! `Σ a_j |j>|j>`, so the Schmidt vector of the output equals the coherence
//! vector of the input. Every quantity here is therefore Schmidt-determined.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{meet, shannon_entropy, ProbVector};
use crate::protocols::{greedy_plan, thrifty_plan, ProtocolPlan};
use crate::scalar::Scalar;
use crate::transform::{coherence_vector, PureState};

/// Descending Schmidt coefficients of a bipartite pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtVector<S: Scalar = f64>(pub ProbVector<S>);

impl<S: Scalar> SchmidtVector<S> {
    pub fn as_vector(&self) -> &ProbVector<S> {
        &self.0
    }

    /// Entropy of entanglement in bits.
    pub fn entropy(&self) -> f64 {
        shannon_entropy(&self.0)
    }
}

/// Maximal probability of producing a state with Schmidt vector `lambda` from
/// the coherent state `source`: `min_l Σ_{i≥l} ψ_i / Σ_{i≥l} λ_i`, capped at one.
pub fn conversion_probability<S: Scalar>(source: &ProbVector<S>, lambda: &SchmidtVector<S>) -> Result<S> {
    let target = lambda.as_vector();
    if source.dim() != target.dim() {
        return Err(Error::DimensionMismatch {
            left: source.dim(),
            right: target.dim(),
        });
    }
    if source.is_majorized_by(target)? {
        return Ok(S::one());
    }
    let mut best = S::one();
    let (mut tail_s, mut tail_t) = (S::zero(), S::zero());
    for (s, t) in source.components().iter().zip(target.components()).rev() {
        tail_s = tail_s + s.clone();
        tail_t = tail_t + t.clone();
        if tail_t.is_zero_tol() {
            continue;
        }
        let ratio = tail_s.clone() / tail_t.clone();
        if ratio < best {
            best = ratio;
        }
    }
    Ok(if best.is_zero_tol() { S::zero() } else { best })
}

/// Common resource state `ψ ∧ λ`.
pub fn ce_ocr_state<S: Scalar>(source: &ProbVector<S>, lambda: &SchmidtVector<S>) -> Result<ProbVector<S>> {
    meet(&[source.clone(), lambda.0.clone()])
}

#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    pub schmidt: SchmidtVector<f64>,
    /// `d²` amplitudes indexed `j * d + k`, present only when requested.
    pub full: Option<Vec<Complex64>>,
}

impl BipartiteState {
    pub fn entropy(&self) -> f64 {
        self.schmidt.entropy()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schmidt": self.schmidt.0.components(),
            "entropy": self.entropy(),
        })
    }
}

/// `U_CNOT (|φ> ⊗ |0>)`.
pub fn cnot_embed(state: &PureState, materialize: bool) -> Result<BipartiteState> {
    let schmidt = SchmidtVector(coherence_vector(state)?);
    let full = materialize.then(|| {
        let d = state.dim();
        let mut amps = vec![Complex64::new(0.0, 0.0); d * d];
        for (j, a) in state.amplitudes().iter().enumerate() {
            amps[j * d + j] = *a;
        }
        amps
    });
    Ok(BipartiteState { schmidt, full })
}

/// Thrifty conversion report. `plan` is absent when the probability is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ConversionReport<S: Scalar = f64> {
    pub probability: S,
    pub ocr_state: ProbVector<S>,
    pub plan: Option<ProtocolPlan<S>>,
    pub success_schmidt: SchmidtVector<S>,
    pub success_entropy: f64,
    /// Schmidt vector left behind when the thrifty conversion fails.
    pub failure_schmidt: Option<SchmidtVector<S>>,
    pub failure_entropy: Option<f64>,
    /// Failure Schmidt vector of the greedy route, for comparison.
    pub greedy_failure_schmidt: Option<SchmidtVector<S>>,
}

impl<S: Scalar> ConversionReport<S> {
    pub fn to_json(&self) -> Value {
        let schmidt = |s: &SchmidtVector<S>| json!({"schmidt": s.0.to_json(), "entropy": s.entropy()});
        json!({
            "probability": self.probability.to_json(),
            "ocr_state": self.ocr_state.to_json(),
            "success": schmidt(&self.success_schmidt),
            "failure": self.failure_schmidt.as_ref().map(schmidt),
            "greedy_failure": self.greedy_failure_schmidt.as_ref().map(schmidt),
            "plan": self.plan.as_ref().map(ProtocolPlan::to_json),
        })
    }
}

pub fn conversion_plan<S: Scalar>(source: &ProbVector<S>, lambda: &SchmidtVector<S>) -> Result<ConversionReport<S>> {
    let probability = conversion_probability(source, lambda)?;
    let ocr_state = ce_ocr_state(source, lambda)?;
    let success_entropy = lambda.entropy();
    if probability.is_zero_tol() {
        return Ok(ConversionReport {
            probability,
            ocr_state,
            plan: None,
            success_schmidt: lambda.clone(),
            success_entropy,
            failure_schmidt: None,
            failure_entropy: None,
            greedy_failure_schmidt: None,
        });
    }
    let plan = thrifty_plan(source, lambda.as_vector())?;
    let failure_schmidt = plan.residual.clone().map(SchmidtVector);
    let greedy_failure_schmidt = if plan.is_deterministic() {
        None
    } else {
        greedy_plan(source, lambda.as_vector())?.residual.map(SchmidtVector)
    };
    Ok(ConversionReport {
        probability,
        ocr_state,
        failure_entropy: failure_schmidt.as_ref().map(SchmidtVector::entropy),
        plan: Some(plan),
        success_schmidt: lambda.clone(),
        success_entropy,
        failure_schmidt,
        greedy_failure_schmidt,
    })
}
