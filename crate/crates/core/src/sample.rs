//! Random instance generators for property sweeps, acceptance runs and benches.

use num_bigint::BigInt;
use num_complex::Complex64;
use rand::Rng;

use crate::lattice::{join, ProbVector};
use crate::scalar::Exact;
use crate::transform::PureState;

/// Normalized i.i.d. exponentials (a flat Dirichlet draw), canonicalized.
pub fn prob_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ProbVector<f64> {
    let raw: Vec<f64> = (0..d).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = raw.iter().sum();
    ProbVector::canonicalize(raw.into_iter().map(|x| x / total).collect())
        .expect("normalized by construction")
}

/// Like [`prob_vector`] but with `zeros` trailing zero components.
pub fn prob_vector_with_zeros<R: Rng + ?Sized>(rng: &mut R, d: usize, zeros: usize) -> ProbVector<f64> {
    assert!(zeros < d);
    prob_vector(rng, d - zeros).pad(d).expect("padding grows")
}

/// Integer weights in `1..=max_weight`, normalized exactly.
pub fn rational_vector<R: Rng + ?Sized>(rng: &mut R, d: usize, max_weight: u32) -> ProbVector<Exact> {
    let weights: Vec<u32> = (0..d).map(|_| rng.random_range(1..=max_weight)).collect();
    let total: u64 = weights.iter().map(|&w| w as u64).sum();
    ProbVector::canonicalize(
        weights
            .into_iter()
            .map(|w| Exact::new(BigInt::from(w), BigInt::from(total)))
            .collect(),
    )
    .expect("normalized by construction")
}

/// Random `(ψ, φ)` with full support where `ψ ⊀ φ`.
pub fn probabilistic_pair<R: Rng + ?Sized>(rng: &mut R, d: usize) -> (ProbVector<f64>, ProbVector<f64>) {
    assert!(d >= 2, "every pair is comparable in dimension one");
    loop {
        let a = prob_vector(rng, d);
        let b = prob_vector(rng, d);
        if !a.is_majorized_by(&b).expect("same dimension") {
            return (a, b);
        }
    }
}

/// Exact counterpart of [`probabilistic_pair`].
pub fn rational_probabilistic_pair<R: Rng + ?Sized>(rng: &mut R, d: usize, max_weight: u32) -> (ProbVector<Exact>, ProbVector<Exact>) {
    assert!(d >= 2);
    loop {
        let a = rational_vector(rng, d, max_weight);
        let b = rational_vector(rng, d, max_weight);
        if !a.is_majorized_by(&b).expect("same dimension") {
            return (a, b);
        }
    }
}

/// A state reachable from `source` with certainty: `source ∨ r` for random `r`.
pub fn reachable_from<R: Rng + ?Sized>(rng: &mut R, source: &ProbVector<f64>) -> ProbVector<f64> {
    let r = prob_vector(rng, source.dim());
    join(&[source.clone(), r]).expect("same dimension")
}

/// A state majorized by `target`, from `steps` random pairwise averagings
/// (each a T-transform, hence doubly stochastic).
pub fn mix_down<R: Rng + ?Sized>(rng: &mut R, target: &ProbVector<f64>, steps: usize) -> ProbVector<f64> {
    let d = target.dim();
    let mut v = target.components().to_vec();
    if d < 2 {
        return target.clone();
    }
    for _ in 0..steps {
        let i = rng.random_range(0..d);
        let mut j = rng.random_range(0..d - 1);
        if j >= i {
            j += 1;
        }
        let t: f64 = rng.random();
        let (a, b) = (v[i], v[j]);
        v[i] = t * a + (1.0 - t) * b;
        v[j] = (1.0 - t) * a + t * b;
    }
    ProbVector::canonicalize(v).expect("averaging preserves the simplex")
}

/// Random `(a, b)` with `a ≺ b`.
pub fn majorized_pair<R: Rng + ?Sized>(rng: &mut R, d: usize) -> (ProbVector<f64>, ProbVector<f64>) {
    let b = prob_vector(rng, d);
    let steps = rng.random_range(1..=2 * d);
    (mix_down(rng, &b, steps), b)
}

/// Random pure state with the given coherence vector and random phases.
pub fn pure_state_with<R: Rng + ?Sized>(rng: &mut R, weights: &[f64]) -> PureState {
    let amps = weights
        .iter()
        .map(|&w| Complex64::from_polar(w.max(0.0).sqrt(), rng.random_range(0.0..std::f64::consts::TAU)))
        .collect();
    PureState::new(amps).expect("weights sum to one")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_respect_their_contracts() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 2..6 {
            let (a, b) = probabilistic_pair(&mut rng, d);
            assert!(!a.is_majorized_by(&b).unwrap());
            let (a, b) = majorized_pair(&mut rng, d);
            assert!(a.is_majorized_by(&b).unwrap());
            let src = prob_vector(&mut rng, d);
            assert!(src.is_majorized_by(&reachable_from(&mut rng, &src)).unwrap());
            let r = rational_vector(&mut rng, d, 20);
            assert_eq!(r.dim(), d);
            let z = prob_vector_with_zeros(&mut rng, d, 1);
            assert_eq!(z.support(), d - 1);
        }
    }
}
