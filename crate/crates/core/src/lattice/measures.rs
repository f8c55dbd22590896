use super::order::{join, meet};
use super::vector::ProbVector;
use crate::error::Result;
use crate::scalar::Scalar;

/// Shannon entropy in bits, `0 log 0 = 0`. Always evaluated in float.
pub fn shannon_entropy<S: Scalar>(p: &ProbVector<S>) -> f64 {
    -p.components()
        .iter()
        .map(Scalar::to_f64)
        .filter(|&x| x > 0.0)
        .map(|x| x * x.log2())
        .sum::<f64>()
}

/// Gini index `(d+1)/d - (2/d) Σ i p_i` over the canonical ordering.
pub fn gini_index<S: Scalar>(p: &ProbVector<S>) -> S {
    let d = S::from_usize(p.dim());
    let weighted = p
        .components()
        .iter()
        .enumerate()
        .fold(S::zero(), |acc, (i, x)| acc + S::from_usize(i + 1) * x.clone());
    (d.clone() + S::one()) / d.clone() - S::from_usize(2) / d * weighted
}

/// `H(a) + H(b) - 2 H(a ∨ b)`.
pub fn distance_d<S: Scalar>(a: &ProbVector<S>, b: &ProbVector<S>) -> Result<f64> {
    let upper = join(&[a.clone(), b.clone()])?;
    let value = shannon_entropy(a) + shannon_entropy(b) - 2.0 * shannon_entropy(&upper);
    // only rounding can push this below zero
    Ok(value.max(0.0))
}

/// `G(a) + G(b) - 2 G(a ∧ b)`.
#[allow(non_snake_case)]
pub fn distance_D<S: Scalar>(a: &ProbVector<S>, b: &ProbVector<S>) -> Result<S> {
    let lower = meet(&[a.clone(), b.clone()])?;
    Ok(gini_index(a) + gini_index(b) - S::from_usize(2) * gini_index(&lower))
}
