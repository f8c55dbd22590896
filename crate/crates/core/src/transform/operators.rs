use num_complex::Complex64;
use serde_json::{json, Value};

use super::ladder::TransformLadder;
use crate::error::{Error, Result};
use crate::lattice::ProbVector;
use crate::scalar::Scalar;

/// A diagonal Kraus operator in the incoherent basis.
///
/// Entries are stored squared (`|K_ii|^2`) so that exact mode stays exact;
/// the square roots are only taken when amplitudes are needed.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalOperator<S: Scalar = f64> {
    squared: Vec<S>,
}

impl<S: Scalar> DiagonalOperator<S> {
    pub fn from_squared(squared: Vec<S>) -> Self {
        Self { squared }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            squared: vec![S::one(); dim],
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            squared: vec![S::zero(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.squared.len()
    }

    /// Diagonal of `K†K`.
    pub fn squared(&self) -> &[S] {
        &self.squared
    }

    /// Nonnegative diagonal entries `K_ii`.
    pub fn entries(&self) -> Vec<f64> {
        self.squared.iter().map(|x| x.to_f64().max(0.0).sqrt()).collect()
    }

    /// Unnormalized output weights `|K_ii|^2 p_i`.
    pub fn apply_to_weights(&self, weights: &[S]) -> Vec<S> {
        self.squared
            .iter()
            .zip(weights)
            .map(|(k, w)| k.clone() * w.clone())
            .collect()
    }

    pub fn apply_to_amplitudes(&self, amplitudes: &[Complex64]) -> Vec<Complex64> {
        self.entries()
            .into_iter()
            .zip(amplitudes)
            .map(|(k, a)| a * k)
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "diagonal": self.entries(),
            "diagonal_squared": self.squared.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        })
    }
}

/// The success branch `M` with blocks `sqrt(q_1 / q_j)` on segment `j`.
pub fn success_operator<S: Scalar>(ladder: &TransformLadder<S>) -> Result<DiagonalOperator<S>> {
    if ladder.is_deterministic() {
        return Err(Error::DeterministicLadder);
    }
    let q1 = ladder.success_probability();
    let mut squared = vec![S::zero(); ladder.dim()];
    for (q, start, end) in ladder.segments() {
        for slot in &mut squared[start..end] {
            *slot = q1.clone() / q.clone();
        }
    }
    Ok(DiagonalOperator { squared })
}

/// The failure branch `N` with `N†N = I - M†M`, taken as the positive diagonal root.
pub fn failure_operator<S: Scalar>(success: &DiagonalOperator<S>) -> Result<DiagonalOperator<S>> {
    let mut squared = Vec::with_capacity(success.dim());
    for (index, m) in success.squared.iter().enumerate() {
        if !m.le_tol(&S::one()) {
            return Err(Error::EntryExceedsOne { index });
        }
        let rest = S::one() - m.clone();
        squared.push(if rest < S::zero() { S::zero() } else { rest });
    }
    Ok(DiagonalOperator { squared })
}

/// Normalized post-failure coherence vector `n ⊙ intermediate`, with
/// `n_i = (1 - M_ii^2) / (1 - q_1)`.
pub fn residual_state<S: Scalar>(intermediate: &ProbVector<S>, ladder: &TransformLadder<S>) -> Result<ProbVector<S>> {
    if ladder.is_deterministic() {
        return Err(Error::DeterministicNoResidual);
    }
    if intermediate.dim() != ladder.dim() {
        return Err(Error::LadderMismatch);
    }
    let failure = failure_operator(&success_operator(ladder)?)?;
    let keep = S::one() - ladder.success_probability();
    let weights = failure
        .apply_to_weights(intermediate.components())
        .into_iter()
        .map(|w| w / keep.clone())
        .collect();
    ProbVector::canonicalize(weights).map_err(|_| Error::LadderMismatch)
}
