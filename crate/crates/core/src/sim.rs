//! Seeded Monte Carlo runs of the greedy and thrifty protocols.
//!
//! Trial `i` draws its uniform from a ChaCha8 stream keyed by `(seed, i)`, so
//! a report depends only on `(seed, trials, config)` and never on how trials
//! are scheduled. Residual states come from the closed-form plans; the
//! simulator only decides which branch each trial takes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::lattice::{shannon_entropy, ProbVector};
use crate::par::{map_indexed, pairwise_sum, Execution};
use crate::protocols::{plan, ProtocolKind, ProtocolPlan};
use crate::scalar::Scalar;
use crate::transform::monotones;
use crate::SCHEMA_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProtocolChoice {
    Greedy,
    Thrifty,
    Both,
}

impl ProtocolChoice {
    pub fn kinds(self) -> Vec<ProtocolKind> {
        match self {
            ProtocolChoice::Greedy => vec![ProtocolKind::Greedy],
            ProtocolChoice::Thrifty => vec![ProtocolKind::Thrifty],
            ProtocolChoice::Both => vec![ProtocolKind::Greedy, ProtocolKind::Thrifty],
        }
    }
}

/// Coherence measures averaged over the final states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    /// Shannon entropy of the coherence vector.
    Entropy,
    /// The full monotone curve `C_1..C_d`.
    Monotones,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub seed: u64,
    pub trials: usize,
    pub protocol: ProtocolChoice,
    pub measures: Vec<Measure>,
    pub record_outcomes: bool,
    pub execution: Execution,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 10_000,
            protocol: ProtocolChoice::Both,
            measures: vec![Measure::Entropy, Measure::Monotones],
            record_outcomes: false,
            execution: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub success: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProtocolStats {
    pub protocol: ProtocolKind,
    pub success_state: Value,
    pub residual_state: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_entropy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_failure_entropy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_monotones: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_failure_monotones: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub schema_version: u32,
    pub mode: &'static str,
    pub seed: u64,
    pub trials: usize,
    pub success_probability: Value,
    pub success_probability_f64: f64,
    pub successes: usize,
    pub failures: usize,
    pub empirical_success_rate: f64,
    /// `3 sqrt(q (1 - q) / trials)`.
    pub three_sigma: f64,
    pub protocols: Vec<ProtocolStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outcomes: Option<Vec<TrialOutcome>>,
}

impl SimReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report is plain data")
    }

    pub fn stats(&self, kind: ProtocolKind) -> Option<&ProtocolStats> {
        self.protocols.iter().find(|p| p.protocol == kind)
    }
}

/// The uniform variate of trial `trial` under `seed`.
pub fn trial_uniform(seed: u64, trial: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng.random::<f64>()
}

pub fn simulate<S: Scalar>(source: &ProbVector<S>, target: &ProbVector<S>, cfg: &SimConfig) -> Result<SimReport> {
    if cfg.trials == 0 {
        return Err(Error::InvalidTrials(0));
    }
    let plans = cfg
        .protocol
        .kinds()
        .into_iter()
        .map(|kind| plan(kind, source, target))
        .collect::<Result<Vec<ProtocolPlan<S>>>>()?;
    if plans[0].is_deterministic() {
        return Err(Error::DeterministicInstance);
    }
    let q = plans[0].success_probability.clone();
    let qf = q.to_f64();
    let seed = cfg.seed;
    let success = map_indexed(cfg.trials, cfg.execution, |i| trial_uniform(seed, i) < qf);
    let successes = success.iter().filter(|&&s| s).count();
    let failures = cfg.trials - successes;

    let protocols = plans
        .iter()
        .map(|p| protocol_stats(p, &success, cfg))
        .collect();

    let n = cfg.trials as f64;
    Ok(SimReport {
        schema_version: SCHEMA_VERSION,
        mode: S::MODE.as_str(),
        seed,
        trials: cfg.trials,
        success_probability: q.to_json(),
        success_probability_f64: qf,
        successes,
        failures,
        empirical_success_rate: successes as f64 / n,
        three_sigma: 3.0 * (qf * (1.0 - qf) / n).sqrt(),
        protocols,
        outcomes: cfg.record_outcomes.then(|| {
            success
                .iter()
                .enumerate()
                .map(|(trial, &success)| TrialOutcome { trial, success })
                .collect()
        }),
    })
}

fn mean_of(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| pairwise_sum(values) / values.len() as f64)
}

fn protocol_stats<S: Scalar>(plan: &ProtocolPlan<S>, success: &[bool], cfg: &SimConfig) -> ProtocolStats {
    let residual = plan
        .residual
        .as_ref()
        .expect("probabilistic plans carry a residual");
    let failures = || success.iter().filter(|&&s| !s);

    let mut stats = ProtocolStats {
        protocol: plan.kind,
        success_state: plan.target.to_json(),
        residual_state: residual.to_json(),
        mean_entropy: None,
        mean_failure_entropy: None,
        mean_monotones: None,
        mean_failure_monotones: None,
    };
    if cfg.measures.contains(&Measure::Entropy) {
        let (h_ok, h_fail) = (shannon_entropy(&plan.target), shannon_entropy(residual));
        let per_trial: Vec<f64> = success.iter().map(|&s| if s { h_ok } else { h_fail }).collect();
        let per_failure: Vec<f64> = failures().map(|_| h_fail).collect();
        stats.mean_entropy = mean_of(&per_trial);
        stats.mean_failure_entropy = mean_of(&per_failure);
    }
    if cfg.measures.contains(&Measure::Monotones) {
        let curve = |p: &ProbVector<S>| -> Vec<f64> {
            monotones(p).values().iter().map(Scalar::to_f64).collect()
        };
        let (c_ok, c_fail) = (curve(&plan.target), curve(residual));
        let d = c_ok.len();
        let column = |l: usize, only_failures: bool| -> Option<f64> {
            let values: Vec<f64> = success
                .iter()
                .filter(|&&s| !(only_failures && s))
                .map(|&s| if s { c_ok[l] } else { c_fail[l] })
                .collect();
            mean_of(&values)
        };
        stats.mean_monotones = (0..d).map(|l| column(l, false)).collect();
        stats.mean_failure_monotones = (0..d).map(|l| column(l, true)).collect();
    }
    stats
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, Exact};

    fn ev(v: &[(i64, i64)]) -> ProbVector<Exact> {
        ProbVector::canonicalize(v.iter().map(|&(n, d)| ratio(n, d)).collect()).unwrap()
    }

    fn example() -> (ProbVector<Exact>, ProbVector<Exact>) {
        (ev(&[(1, 2), (2, 5), (1, 10)]), ev(&[(7, 10), (3, 20), (3, 20)]))
    }

    #[test]
    fn single_trial_reports_one_outcome() {
        let (psi, phi) = example();
        let cfg = SimConfig {
            seed: 3,
            trials: 1,
            record_outcomes: true,
            ..SimConfig::default()
        };
        let r = simulate(&psi, &phi, &cfg).unwrap();
        assert_eq!(r.outcomes.as_ref().unwrap().len(), 1);
        assert_eq!(r.successes + r.failures, 1);
        assert_eq!(r.success_probability, Value::String("2/3".into()));
    }

    #[test]
    fn serial_and_parallel_reports_are_identical() {
        let (psi, phi) = example();
        let base = SimConfig {
            seed: 11,
            trials: 5_000,
            ..SimConfig::default()
        };
        let serial = simulate(&psi, &phi, &SimConfig { execution: Execution::Serial, ..base.clone() }).unwrap();
        let parallel = simulate(&psi, &phi, &SimConfig { execution: Execution::Parallel, ..base }).unwrap();
        assert_eq!(
            serde_json::to_string(&serial).unwrap(),
            serde_json::to_string(&parallel).unwrap()
        );
    }

    #[test]
    fn error_paths() {
        let (psi, phi) = example();
        let zero = SimConfig { trials: 0, ..SimConfig::default() };
        assert_eq!(simulate(&psi, &phi, &zero), Err(Error::InvalidTrials(0)));
        let det = simulate(&ProbVector::uniform(3), &phi, &SimConfig::default());
        assert_eq!(det, Err(Error::DeterministicInstance));
        let none = simulate(&ProbVector::point_mass(3), &phi, &SimConfig::default());
        assert_eq!(none, Err(Error::ZeroProbability));
    }

    #[test]
    fn measures_are_optional() {
        let (psi, phi) = example();
        let cfg = SimConfig {
            trials: 100,
            measures: vec![Measure::Entropy],
            protocol: ProtocolChoice::Thrifty,
            ..SimConfig::default()
        };
        let r = simulate(&psi, &phi, &cfg).unwrap();
        assert_eq!(r.protocols.len(), 1);
        assert!(r.protocols[0].mean_monotones.is_none());
        assert!(r.protocols[0].mean_entropy.is_some());
    }

    #[test]
    fn stream_draws_are_stable() {
        assert_eq!(trial_uniform(42, 7), trial_uniform(42, 7));
        assert_ne!(trial_uniform(42, 7), trial_uniform(42, 8));
        assert_ne!(trial_uniform(42, 7), trial_uniform(43, 7));
    }
}
