mod common;

use coherence_lattice::protocols::{greedy_plan, thrifty_plan, ProtocolKind};
use coherence_lattice::sample;
use coherence_lattice::sim::{simulate, trial_uniform, Measure, ProtocolChoice, SimConfig};
use coherence_lattice::transform::monotones;
use coherence_lattice::Execution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn reports_are_reproducible_and_schedule_free() {
    let mut rng = ChaCha8Rng::seed_from_u64(601);
    for d in 2..=6 {
        let (psi, phi) = sample::probabilistic_pair(&mut rng, d);
        let cfg = SimConfig { seed: d as u64, trials: 3000, record_outcomes: true, ..SimConfig::default() };
        let a = serde_json::to_string(&simulate(&psi, &phi, &cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&simulate(&psi, &phi, &cfg).unwrap()).unwrap();
        let serial = SimConfig { execution: Execution::Serial, ..cfg };
        let c = serde_json::to_string(&simulate(&psi, &phi, &serial).unwrap()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }
}

#[test]
fn outcomes_follow_the_stream_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(602);
    let (psi, phi) = sample::probabilistic_pair(&mut rng, 4);
    let cfg = SimConfig { seed: 9, trials: 500, record_outcomes: true, ..SimConfig::default() };
    let r = simulate(&psi, &phi, &cfg).unwrap();
    let q = r.success_probability_f64;
    for o in r.outcomes.as_ref().unwrap() {
        assert_eq!(o.success, trial_uniform(9, o.trial) < q);
    }
    assert_eq!(r.successes, r.outcomes.unwrap().iter().filter(|o| o.success).count());
}

#[test]
fn residuals_and_failure_averages_are_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(603);
    for d in 2..=7 {
        let (psi, phi) = sample::probabilistic_pair(&mut rng, d);
        let cfg = SimConfig { seed: 1, trials: 2000, ..SimConfig::default() };
        let r = simulate(&psi, &phi, &cfg).unwrap();
        for (kind, plan) in [
            (ProtocolKind::Greedy, greedy_plan(&psi, &phi).unwrap()),
            (ProtocolKind::Thrifty, thrifty_plan(&psi, &phi).unwrap()),
        ] {
            let s = r.stats(kind).unwrap();
            let residual = plan.residual.unwrap();
            assert_eq!(s.residual_state, residual.to_json());
            if r.failures > 0 {
                let h = common::entropy(residual.components());
                assert!((s.mean_failure_entropy.unwrap() - h).abs() < 1e-12);
                let curve = monotones(&residual);
                for (l, v) in s.mean_failure_monotones.as_ref().unwrap().iter().enumerate() {
                    assert!((v - curve.get(l + 1)).abs() < 1e-12);
                }
            }
        }
        let g = r.stats(ProtocolKind::Greedy).unwrap();
        let t = r.stats(ProtocolKind::Thrifty).unwrap();
        assert!(t.mean_entropy.unwrap() + 1e-12 >= g.mean_entropy.unwrap());
        if r.failures > 0 {
            assert!(t.mean_failure_entropy.unwrap() + 1e-12 >= g.mean_failure_entropy.unwrap());
        }
    }
}

#[test]
fn single_protocol_and_measure_selection() {
    let mut rng = ChaCha8Rng::seed_from_u64(604);
    let (psi, phi) = sample::probabilistic_pair(&mut rng, 3);
    let cfg = SimConfig {
        trials: 10,
        protocol: ProtocolChoice::Greedy,
        measures: vec![Measure::Monotones],
        ..SimConfig::default()
    };
    let r = simulate(&psi, &phi, &cfg).unwrap();
    assert_eq!(r.protocols.len(), 1);
    assert!(r.stats(ProtocolKind::Thrifty).is_none());
    assert!(r.protocols[0].mean_entropy.is_none());
    assert_eq!(r.protocols[0].mean_monotones.as_ref().unwrap().len(), 3);
    assert_eq!(r.to_json()["schema_version"], 1);
}
