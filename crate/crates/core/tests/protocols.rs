mod common;

use coherence_lattice::lattice::{distance_D, distance_d, join, meet, shannon_entropy};
use coherence_lattice::protocols::{compare_protocols, greedy_plan, plan_batch, thrifty_plan, ProtocolKind};
use coherence_lattice::sample;
use coherence_lattice::scalar::ratio;
use coherence_lattice::transform::ladder;
use coherence_lattice::{Error, Exact, Execution, ProbVector};
use common::{comps, TOL};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ev(v: &[(i64, i64)]) -> ProbVector<Exact> {
    ProbVector::canonicalize(v.iter().map(|&(n, d)| ratio(n, d)).collect()).unwrap()
}

#[test]
fn worked_example_plans() {
    let psi = ev(&[(1, 2), (2, 5), (1, 10)]);
    let phi = ev(&[(7, 10), (3, 20), (3, 20)]);
    let g = greedy_plan(&psi, &phi).unwrap();
    let t = thrifty_plan(&psi, &phi).unwrap();
    assert_eq!(g.lattice_state, ev(&[(7, 10), (1, 5), (1, 10)]));
    assert_eq!(t.lattice_state, ev(&[(1, 2), (7, 20), (3, 20)]));
    assert_eq!(g.intermediate, ev(&[(63, 85), (27, 170), (1, 10)]));
    assert_eq!(t.intermediate, ev(&[(9, 17), (63, 170), (1, 10)]));
    assert_eq!(g.residual.unwrap(), ev(&[(14, 17), (3, 17), (0, 1)]));
    assert_eq!(t.residual.unwrap(), ev(&[(10, 17), (7, 17), (0, 1)]));
    assert_eq!(g.success_probability, ratio(2, 3));
    assert_eq!(t.success_probability, ratio(2, 3));
    assert_eq!(t.success_chain, vec![t.lattice_state.clone(), phi.clone()]);
}

#[test]
fn thrifty_ladder_equals_direct_ladder() {
    let mut rng = ChaCha8Rng::seed_from_u64(301);
    for d in 3..=8 {
        for _ in 0..300 {
            let (psi, phi) = sample::probabilistic_pair(&mut rng, d);
            let low = meet(&[psi.clone(), phi.clone()]).unwrap();
            let direct = ladder(&psi, &phi).unwrap();
            let via_meet = ladder(&psi, &low).unwrap();
            assert_eq!(direct.steps().len(), via_meet.steps().len());
            for (a, b) in direct.steps().iter().zip(via_meet.steps()) {
                assert_eq!(a.l, b.l);
                assert!((a.q - b.q).abs() <= TOL);
            }
        }
    }
}

#[test]
fn exact_thrifty_ladder_equals_direct_ladder() {
    let mut rng = ChaCha8Rng::seed_from_u64(302);
    for d in 3..=6 {
        for _ in 0..60 {
            let (psi, phi) = sample::rational_probabilistic_pair(&mut rng, d, 25);
            let low = meet(&[psi.clone(), phi.clone()]).unwrap();
            assert_eq!(ladder(&psi, &phi).unwrap(), ladder(&psi, &low).unwrap());
        }
    }
}

#[test]
fn thrifty_dominates_greedy() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for d in 2..=8 {
        for _ in 0..300 {
            let (psi, phi) = sample::probabilistic_pair(&mut rng, d);
            let c = compare_protocols(&psi, &phi).unwrap();
            assert!(!c.vacuous);
            assert!(c.all_hold(), "{psi} -> {phi}");
            let (mu, nu) = (c.greedy.residual.unwrap(), c.thrifty.residual.unwrap());
            assert!(common::majorized(&comps(&nu), &comps(&mu), TOL));
            assert!(common::majorized(&comps(&c.thrifty.intermediate), &comps(&c.greedy.intermediate), TOL));
            assert!(shannon_entropy(&nu) + TOL >= shannon_entropy(&mu));
            let upper = join(&[psi.clone(), phi.clone()]).unwrap();
            assert!(common::majorized(&comps(&upper), &comps(&c.greedy.intermediate), TOL));
        }
    }
}

#[test]
fn join_is_the_closest_reachable_state() {
    let mut rng = ChaCha8Rng::seed_from_u64(304);
    for _ in 0..100 {
        let d = rng.random_range(2..=8);
        let (psi, phi) = sample::probabilistic_pair(&mut rng, d);
        let upper = join(&[psi.clone(), phi.clone()]).unwrap();
        let best = distance_d(&phi, &upper).unwrap();
        for _ in 0..200 {
            let candidate = sample::reachable_from(&mut rng, &psi);
            assert!(best <= distance_d(&phi, &candidate).unwrap() + TOL);
        }
    }
}

#[test]
fn meet_is_the_closest_state_below_the_target() {
    let mut rng = ChaCha8Rng::seed_from_u64(305);
    for _ in 0..100 {
        let d = rng.random_range(2..=8);
        let (psi, phi) = sample::probabilistic_pair(&mut rng, d);
        let low = meet(&[psi.clone(), phi.clone()]).unwrap();
        let best = distance_D(&psi, &low).unwrap();
        for _ in 0..200 {
            let steps = rng.random_range(1..=3 * d);
            let candidate = sample::mix_down(&mut rng, &phi, steps);
            assert!(best <= distance_D(&psi, &candidate).unwrap() + TOL);
        }
    }
}

#[test]
fn deterministic_and_impossible_instances() {
    let psi = ev(&[(1, 3), (1, 3), (1, 3)]);
    let phi = ev(&[(7, 10), (3, 20), (3, 20)]);
    let g = greedy_plan(&psi, &phi).unwrap();
    assert!(g.is_deterministic() && g.residual.is_none());
    let c = compare_protocols(&psi, &phi).unwrap();
    assert!(c.vacuous && c.all_hold());
    let point = ProbVector::<Exact>::point_mass(3);
    assert_eq!(thrifty_plan(&point, &phi), Err(Error::ZeroProbability));
}

#[test]
fn batch_planning_is_execution_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(306);
    let pairs: Vec<_> = (0..200).map(|i| sample::probabilistic_pair(&mut rng, 2 + i % 7)).collect();
    for kind in [ProtocolKind::Greedy, ProtocolKind::Thrifty] {
        let serial = plan_batch(kind, &pairs, Execution::Serial);
        let parallel = plan_batch(kind, &pairs, Execution::Parallel);
        assert_eq!(serial, parallel);
    }
}
