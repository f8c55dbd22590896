use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::ProbVector;
use crate::scalar::Scalar;

/// Suffix sums `C_l = p_l + ... + p_d` for `l = 1..d`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceMonotones<S: Scalar = f64> {
    values: Vec<S>,
}

impl<S: Scalar> CoherenceMonotones<S> {
    /// `C_l` with 1-based `l`; `C_{d+1}` is zero.
    pub fn get(&self, l: usize) -> S {
        assert!(l >= 1, "monotones are indexed from 1");
        self.values.get(l - 1).cloned().unwrap_or_else(S::zero)
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

pub fn monotones<S: Scalar>(p: &ProbVector<S>) -> CoherenceMonotones<S> {
    let mut acc = S::zero();
    let mut values: Vec<S> = p
        .components()
        .iter()
        .rev()
        .map(|x| {
            acc = acc.clone() + x.clone();
            acc.clone()
        })
        .collect();
    values.reverse();
    CoherenceMonotones { values }
}

fn check_dims<S: Scalar>(a: &ProbVector<S>, b: &ProbVector<S>) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(())
}

/// Whether `source` can be turned into `target` with certainty (`source ≺ target`).
pub fn deterministic_feasible<S: Scalar>(source: &ProbVector<S>, target: &ProbVector<S>) -> Result<bool> {
    source.is_majorized_by(target)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LadderStep<S: Scalar = f64> {
    pub q: S,
    pub l: usize,
}

/// The ratio sequence `(q_j, l_j)` with `d + 1 = l_0 > l_1 > ... > l_k = 1`.
///
/// Segment `j` covers the 1-based indices `l_j ..= l_{j-1} - 1` and scales
/// the target's coherence weights by `q_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformLadder<S: Scalar = f64> {
    dim: usize,
    steps: Vec<LadderStep<S>>,
}

impl<S: Scalar> TransformLadder<S> {
    /// The single-step ladder `[(1, 1)]` used when the target is reachable with certainty.
    pub fn deterministic(dim: usize) -> Self {
        Self {
            dim,
            steps: vec![LadderStep { q: S::one(), l: 1 }],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn steps(&self) -> &[LadderStep<S>] {
        &self.steps
    }

    pub fn is_deterministic(&self) -> bool {
        self.steps[0].q >= S::one()
    }

    pub fn success_probability(&self) -> S {
        self.steps[0].q.clone()
    }

    /// `(q_j, start, end)` per segment, 0-based half-open index ranges.
    pub fn segments(&self) -> impl Iterator<Item = (&S, usize, usize)> + '_ {
        let mut upper = self.dim;
        self.steps.iter().map(move |step| {
            let seg = (&step.q, step.l - 1, upper);
            upper = step.l - 1;
            seg
        })
    }

    /// The per-index multiplier `m_i = q_j` for `i` in segment `j`.
    pub fn scaling_vector(&self) -> Vec<S> {
        let mut m = vec![S::zero(); self.dim];
        for (q, start, end) in self.segments() {
            for slot in &mut m[start..end] {
                *slot = q.clone();
            }
        }
        m
    }

    /// Hadamard product `m ⊙ p` in index order, without re-sorting.
    pub fn scale(&self, p: &ProbVector<S>) -> Result<Vec<S>> {
        if p.dim() != self.dim {
            return Err(Error::LadderMismatch);
        }
        Ok(self
            .scaling_vector()
            .into_iter()
            .zip(p.components())
            .map(|(m, x)| m * x.clone())
            .collect())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim,
            "steps": self.steps.iter().map(|s| json!({"q": s.q.to_json(), "l": s.l})).collect::<Vec<_>>(),
        })
    }
}

/// Build the ladder driving the optimal probabilistic transformation.
///
/// When `source ≺ target` the deterministic ladder `[(1, 1)]` is returned.
/// Ratios with a vanishing denominator are skipped; among ties the
/// smallest index wins.
pub fn ladder<S: Scalar>(source: &ProbVector<S>, target: &ProbVector<S>) -> Result<TransformLadder<S>> {
    check_dims(source, target)?;
    let d = source.dim();
    if source.support() < target.support() {
        return Err(Error::UnsupportedTarget {
            source_support: source.support(),
            target_support: target.support(),
        });
    }
    if source.is_majorized_by(target)? {
        return Ok(TransformLadder::deterministic(d));
    }
    let cs = monotones(source);
    let ct = monotones(target);
    let mut steps = Vec::new();
    let mut prev = d + 1;
    while prev > 1 {
        let (base_s, base_t) = (cs.get(prev), ct.get(prev));
        let mut best: Option<(S, usize)> = None;
        for l in 1..prev {
            let den = ct.get(l) - base_t.clone();
            if den.is_zero_tol() {
                continue;
            }
            let ratio = (cs.get(l) - base_s.clone()) / den;
            match &best {
                Some((b, _)) if !ratio.lt_tol(b) => {}
                _ => best = Some((ratio, l)),
            }
        }
        let (q, l) = best.ok_or(Error::LadderMismatch)?;
        if !S::zero().lt_tol(&q) {
            return Err(Error::UnsupportedTarget {
                source_support: source.support(),
                target_support: target.support(),
            });
        }
        steps.push(LadderStep { q, l });
        prev = l;
    }
    Ok(TransformLadder { dim: d, steps })
}

/// `min_l C_l(source) / C_l(target)`, capped at one; zero on a support deficit.
pub fn max_probability<S: Scalar>(source: &ProbVector<S>, target: &ProbVector<S>) -> Result<S> {
    if source.is_majorized_by(target)? {
        return Ok(S::one());
    }
    let cs = monotones(source);
    let ct = monotones(target);
    let mut best = S::one();
    for (s, t) in cs.values().iter().zip(ct.values()) {
        if t.is_zero_tol() {
            continue;
        }
        let ratio = s.clone() / t.clone();
        if ratio < best {
            best = ratio;
        }
    }
    if best.is_zero_tol() {
        return Ok(S::zero());
    }
    Ok(best)
}

/// Segment-wise rescaling of `target` by the ladder ratios.
pub fn intermediate_state<S: Scalar>(target: &ProbVector<S>, ladder: &TransformLadder<S>) -> Result<ProbVector<S>> {
    let scaled = ladder.scale(target)?;
    ProbVector::canonicalize(scaled).map_err(|_| Error::LadderMismatch)
}
