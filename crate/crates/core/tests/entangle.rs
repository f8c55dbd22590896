mod common;

use coherence_lattice::entangle::{ce_ocr_state, cnot_embed, conversion_plan, conversion_probability, SchmidtVector};
use coherence_lattice::lattice::meet;
use coherence_lattice::sample;
use coherence_lattice::scalar::ratio;
use coherence_lattice::transform::{coherence_vector, max_probability, PureState};
use coherence_lattice::{Exact, ProbVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ev(v: &[(i64, i64)]) -> ProbVector<Exact> {
    ProbVector::canonicalize(v.iter().map(|&(n, d)| ratio(n, d)).collect()).unwrap()
}

#[test]
fn conversion_probability_equals_coherence_probability_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(501);
    for _ in 0..1000 {
        let d = rng.random_range(1..=8);
        let psi: ProbVector<Exact> = sample::rational_vector(&mut rng, d, 30);
        let mut lam: ProbVector<Exact> = sample::rational_vector(&mut rng, d, 30);
        if d > 1 && rng.random_bool(0.2) {
            // drop the tail to exercise support differences
            let mut c = lam.into_components();
            let tail = c.pop().unwrap();
            c[0] = c[0].clone() + tail;
            c.push(ratio(0, 1));
            lam = ProbVector::canonicalize(c).unwrap();
        }
        let (a, b) = if rng.random_bool(0.2) { (lam.clone(), psi.clone()) } else { (psi.clone(), lam.clone()) };
        assert_eq!(conversion_probability(&a, &SchmidtVector(b.clone())).unwrap(), max_probability(&a, &b).unwrap());
    }
}

#[test]
fn trivial_targets() {
    let bell = PureState::from_real(&[0.5f64.sqrt(), 0.5f64.sqrt()]).unwrap();
    let embedded = cnot_embed(&bell, true).unwrap();
    assert!((embedded.entropy() - 1.0).abs() < 1e-12);
    let full = embedded.full.unwrap();
    assert_eq!(full.len(), 4);
    assert!((full[0] - Complex64::new(0.5f64.sqrt(), 0.0)).norm() < 1e-15);
    assert!((full[3] - Complex64::new(0.5f64.sqrt(), 0.0)).norm() < 1e-15);
    assert_eq!(full[1], Complex64::new(0.0, 0.0));

    let product = cnot_embed(&PureState::from_real(&[1.0, 0.0]).unwrap(), false).unwrap();
    assert_eq!(product.entropy(), 0.0);
    assert!(product.full.is_none());

    let maximal = ev(&[(1, 2), (1, 2)]);
    assert_eq!(conversion_probability(&maximal, &SchmidtVector(maximal.clone())).unwrap(), ratio(1, 1));
    assert_eq!(conversion_probability(&ev(&[(9, 10), (1, 10)]), &SchmidtVector(maximal)).unwrap(), ratio(1, 5));
    let psi = ev(&[(1, 2), (2, 5), (1, 10)]);
    assert_eq!(conversion_probability(&psi, &SchmidtVector(ProbVector::point_mass(3))).unwrap(), ratio(1, 1));
}

#[test]
fn embedding_preserves_the_coherence_vector() {
    let mut rng = ChaCha8Rng::seed_from_u64(502);
    for d in 1..=8 {
        for _ in 0..20 {
            let p = sample::prob_vector(&mut rng, d);
            let state = sample::pure_state_with(&mut rng, p.components());
            let e = cnot_embed(&state, rng.random()).unwrap();
            assert_eq!(e.schmidt.0, coherence_vector(&state).unwrap());
        }
    }
}

#[test]
fn thrifty_failure_keeps_more_entanglement() {
    let mut rng = ChaCha8Rng::seed_from_u64(503);
    for d in 2..=8 {
        for _ in 0..100 {
            let (psi, lam) = sample::probabilistic_pair(&mut rng, d);
            let r = conversion_plan(&psi, &SchmidtVector(lam.clone())).unwrap();
            let (nu, mu) = (r.failure_schmidt.unwrap(), r.greedy_failure_schmidt.unwrap());
            assert!(common::majorized(nu.0.components(), mu.0.components(), common::TOL));
            assert!(nu.entropy() + common::TOL >= mu.entropy());
            assert_eq!(r.ocr_state, ce_ocr_state(&psi, &SchmidtVector(lam.clone())).unwrap());
            assert_eq!(r.ocr_state, meet(&[psi, lam]).unwrap());
        }
    }
}

#[test]
fn worked_example_conversion() {
    let psi = ev(&[(1, 2), (2, 5), (1, 10)]);
    let lam = SchmidtVector(ev(&[(7, 10), (3, 20), (3, 20)]));
    let r = conversion_plan(&psi, &lam).unwrap();
    assert_eq!(r.probability, ratio(2, 3));
    assert_eq!(r.failure_schmidt.unwrap().0, ev(&[(10, 17), (7, 17), (0, 1)]));
    assert_eq!(r.ocr_state, ev(&[(1, 2), (7, 20), (3, 20)]));
    let none = conversion_plan(&ev(&[(1, 1), (0, 1)]), &SchmidtVector(ev(&[(1, 2), (1, 2)]))).unwrap();
    assert_eq!(none.probability, ratio(0, 1));
    assert!(none.plan.is_none());
}
