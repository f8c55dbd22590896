//! Greedy and thrifty probabilistic transformation plans.
//!
//! The greedy plan pivots on the join of source and target: the source is
//! first carried deterministically to the optimal intermediate state and the
//! probabilistic step lands on the target. The thrifty plan pivots on the
//! meet: the probabilistic step lands on the meet and a deterministic tail
//! carries it to the target. Both succeed with the same probability; the
//! thrifty residual is majorized by the greedy one.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{join, meet, shannon_entropy, ProbVector};
use crate::par::{map_slice, Execution};
use crate::scalar::Scalar;
use crate::transform::{intermediate_state, ladder, max_probability, residual_state, TransformLadder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProtocolKind {
    Greedy,
    Thrifty,
}

impl ProtocolKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ProtocolKind::Greedy => "greedy",
            ProtocolKind::Thrifty => "thrifty",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolPlan<S: Scalar = f64> {
    pub kind: ProtocolKind,
    pub source: ProbVector<S>,
    pub target: ProbVector<S>,
    /// Join of source and target (greedy) or their meet (thrifty).
    pub lattice_state: ProbVector<S>,
    pub intermediate: ProbVector<S>,
    pub ladder: TransformLadder<S>,
    pub success_probability: S,
    /// States visited on success, ending at the target.
    pub success_chain: Vec<ProbVector<S>>,
    pub residual: Option<ProbVector<S>>,
}

impl<S: Scalar> ProtocolPlan<S> {
    pub fn is_deterministic(&self) -> bool {
        self.ladder.is_deterministic()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "protocol": self.kind.as_str(),
            "mode": S::MODE.as_str(),
            "deterministic": self.is_deterministic(),
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "lattice_state": self.lattice_state.to_json(),
            "intermediate": self.intermediate.to_json(),
            "ladder": self.ladder.to_json(),
            "success_probability": self.success_probability.to_json(),
            "success_chain": self.success_chain.iter().map(ProbVector::to_json).collect::<Vec<_>>(),
            "residual": self.residual.as_ref().map(ProbVector::to_json),
        })
    }
}

fn feasible_probability<S: Scalar>(source: &ProbVector<S>, target: &ProbVector<S>) -> Result<S> {
    let q = max_probability(source, target)?;
    if q.is_zero_tol() {
        return Err(Error::ZeroProbability);
    }
    Ok(q)
}

/// Plan through the join `source ∨ target`.
pub fn greedy_plan<S: Scalar>(source: &ProbVector<S>, target: &ProbVector<S>) -> Result<ProtocolPlan<S>> {
    feasible_probability(source, target)?;
    let lattice_state = join(&[source.clone(), target.clone()])?;
    let lad = ladder(source, target)?;
    let intermediate = intermediate_state(target, &lad)?;
    let residual = if lad.is_deterministic() {
        None
    } else {
        Some(residual_state(&intermediate, &lad)?)
    };
    Ok(ProtocolPlan {
        kind: ProtocolKind::Greedy,
        source: source.clone(),
        target: target.clone(),
        lattice_state,
        intermediate,
        success_probability: lad.success_probability(),
        ladder: lad,
        success_chain: vec![target.clone()],
        residual,
    })
}

/// Plan through the meet `source ∧ target`.
///
/// The ladder is built against the meet itself; it coincides with the
/// source-to-target ladder, which [`compare_protocols`] reports.
pub fn thrifty_plan<S: Scalar>(source: &ProbVector<S>, target: &ProbVector<S>) -> Result<ProtocolPlan<S>> {
    feasible_probability(source, target)?;
    let lattice_state = meet(&[source.clone(), target.clone()])?;
    let lad = ladder(source, &lattice_state)?;
    let intermediate = intermediate_state(&lattice_state, &lad)?;
    let residual = if lad.is_deterministic() {
        None
    } else {
        Some(residual_state(&intermediate, &lad)?)
    };
    let success_chain = if lattice_state == *target {
        vec![target.clone()]
    } else {
        vec![lattice_state.clone(), target.clone()]
    };
    Ok(ProtocolPlan {
        kind: ProtocolKind::Thrifty,
        source: source.clone(),
        target: target.clone(),
        lattice_state,
        intermediate,
        success_probability: lad.success_probability(),
        ladder: lad,
        success_chain,
        residual,
    })
}

pub fn plan<S: Scalar>(kind: ProtocolKind, source: &ProbVector<S>, target: &ProbVector<S>) -> Result<ProtocolPlan<S>> {
    match kind {
        ProtocolKind::Greedy => greedy_plan(source, target),
        ProtocolKind::Thrifty => thrifty_plan(source, target),
    }
}

/// Plan many independent instances, in input order.
pub fn plan_batch<S: Scalar>(
    kind: ProtocolKind,
    instances: &[(ProbVector<S>, ProbVector<S>)],
    exec: Execution,
) -> Vec<Result<ProtocolPlan<S>>> {
    map_slice(instances, exec, |(source, target)| plan(kind, source, target))
}

/// Side-by-side verdicts for the greedy and thrifty plans of one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolComparison<S: Scalar = f64> {
    pub greedy: ProtocolPlan<S>,
    pub thrifty: ProtocolPlan<S>,
    /// Deterministic instances make every comparison below trivially true.
    pub vacuous: bool,
    pub equal_success_probability: bool,
    /// Thrifty ladder (built against the meet) equals the source-to-target ladder.
    pub ladders_agree: bool,
    /// Thrifty intermediate ≺ greedy intermediate.
    pub intermediate_order: bool,
    /// Thrifty residual ≺ greedy residual.
    pub residual_order: bool,
    /// `H(thrifty residual) - H(greedy residual)`, zero when vacuous.
    pub residual_entropy_gap: f64,
}

impl<S: Scalar> ProtocolComparison<S> {
    pub fn all_hold(&self) -> bool {
        self.equal_success_probability
            && self.ladders_agree
            && self.intermediate_order
            && self.residual_order
            && self.residual_entropy_gap >= -1e-12
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vacuous": self.vacuous,
            "equal_success_probability": self.equal_success_probability,
            "ladders_agree": self.ladders_agree,
            "intermediate_order": self.intermediate_order,
            "residual_order": self.residual_order,
            "residual_entropy_gap": self.residual_entropy_gap,
            "greedy": self.greedy.to_json(),
            "thrifty": self.thrifty.to_json(),
        })
    }
}

pub fn compare_protocols<S: Scalar>(source: &ProbVector<S>, target: &ProbVector<S>) -> Result<ProtocolComparison<S>> {
    let greedy = greedy_plan(source, target)?;
    let thrifty = thrifty_plan(source, target)?;
    let vacuous = greedy.is_deterministic();
    let equal_success_probability = greedy.success_probability.eq_tol(&thrifty.success_probability);
    let ladders_agree = ladders_match(&greedy.ladder, &thrifty.ladder);
    let intermediate_order = thrifty.intermediate.is_majorized_by(&greedy.intermediate)?;
    let (residual_order, residual_entropy_gap) = match (&greedy.residual, &thrifty.residual) {
        (Some(mu), Some(nu)) => (
            nu.is_majorized_by(mu)?,
            shannon_entropy(nu) - shannon_entropy(mu),
        ),
        _ => (true, 0.0),
    };
    Ok(ProtocolComparison {
        greedy,
        thrifty,
        vacuous,
        equal_success_probability,
        ladders_agree,
        intermediate_order,
        residual_order,
        residual_entropy_gap,
    })
}

/// Same indices and ratios equal within tolerance.
pub fn ladders_match<S: Scalar>(a: &TransformLadder<S>, b: &TransformLadder<S>) -> bool {
    a.dim() == b.dim()
        && a.steps().len() == b.steps().len()
        && a
            .steps()
            .iter()
            .zip(b.steps())
            .all(|(x, y)| x.l == y.l && x.q.eq_tol(&y.q))
}
