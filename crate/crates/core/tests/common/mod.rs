//! Brute-force oracles written independently of the library code paths.
#![allow(dead_code)]

use coherence_lattice::ProbVector;

pub const TOL: f64 = 1e-9;

pub fn sorted_desc(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// `s_0 = 0, s_k = sum of the k largest entries`.
pub fn lorenz(v: &[f64]) -> Vec<f64> {
    let s = sorted_desc(v);
    let mut out = vec![0.0];
    for k in 1..=s.len() {
        out.push(s[..k].iter().sum());
    }
    out
}

pub fn majorized(a: &[f64], b: &[f64], tol: f64) -> bool {
    let (la, lb) = (lorenz(a), lorenz(b));
    la.len() == lb.len() && la.iter().zip(&lb).all(|(x, y)| *x <= *y + tol)
}

pub fn increments(curve: &[f64]) -> Vec<f64> {
    curve.windows(2).map(|w| w[1] - w[0]).collect()
}

pub fn meet(a: &[f64], b: &[f64]) -> Vec<f64> {
    let (la, lb) = (lorenz(a), lorenz(b));
    increments(&la.iter().zip(&lb).map(|(x, y)| x.min(*y)).collect::<Vec<_>>())
}

/// Pointwise maximum, then the least concave majorant evaluated by checking
/// every chord `(i, j)` that straddles `k`.
pub fn join(a: &[f64], b: &[f64]) -> Vec<f64> {
    let (la, lb) = (lorenz(a), lorenz(b));
    let m: Vec<f64> = la.iter().zip(&lb).map(|(x, y)| x.max(*y)).collect();
    let n = m.len();
    let hull: Vec<f64> = (0..n)
        .map(|k| {
            let mut best = m[k];
            for i in 0..=k {
                for j in k..n {
                    if i < j {
                        let t = (k - i) as f64 / (j - i) as f64;
                        best = best.max(m[i] + t * (m[j] - m[i]));
                    }
                }
            }
            best
        })
        .collect();
    increments(&hull)
}

/// `min_l E_l(ψ) / E_l(φ)` with `E_l` the tail sums from position `l`.
pub fn max_probability(psi: &[f64], phi: &[f64]) -> f64 {
    let (p, f) = (sorted_desc(psi), sorted_desc(phi));
    let mut best: f64 = 1.0;
    for l in 0..p.len() {
        let ep: f64 = p[l..].iter().sum();
        let ef: f64 = f[l..].iter().sum();
        if ef > 0.0 {
            best = best.min(ep / ef);
        }
    }
    best
}

pub fn entropy(v: &[f64]) -> f64 {
    v.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

pub fn gini(v: &[f64]) -> f64 {
    let d = v.len() as f64;
    let l = lorenz(v);
    // twice the area under the Lorenz steps, shifted so the uniform vector scores 0
    let area: f64 = l[1..].iter().sum();
    (2.0 * area - (d + 1.0)) / d
}

pub fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

pub fn comps(v: &ProbVector<f64>) -> Vec<f64> {
    v.components().to_vec()
}

use coherence_lattice::mixed::{DensityMatrix, ProjectorPartition};
use coherence_lattice::transform::PureState;
use num_complex::Complex64;
use rand::Rng;

/// A block-diagonal ρ whose blocks are pure by construction.
pub struct BlockInstance {
    pub rho: DensityMatrix,
    pub partition: ProjectorPartition,
}

pub fn random_partition<R: Rng>(rng: &mut R, d: usize) -> Vec<Vec<usize>> {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for i in 0..d {
        let b = rng.random_range(0..=blocks.len());
        if b == blocks.len() {
            blocks.push(vec![i]);
        } else {
            blocks[b].push(i);
        }
    }
    blocks
}

pub fn block_pure_instance<R: Rng>(rng: &mut R, d: usize) -> BlockInstance {
    let blocks = random_partition(rng, d);
    let mut members = Vec::new();
    let raw: Vec<f64> = blocks.iter().map(|_| rng.random_range(0.1..1.0)).collect();
    let total: f64 = raw.iter().sum();
    for (indices, w) in blocks.iter().zip(&raw) {
        let weights: Vec<f64> = indices.iter().map(|_| rng.random_range(0.05..1.0)).collect();
        let norm: f64 = weights.iter().sum();
        let mut amps = vec![Complex64::new(0.0, 0.0); d];
        for (&i, x) in indices.iter().zip(&weights) {
            amps[i] = Complex64::from_polar((x / norm).sqrt(), rng.random_range(0.0..std::f64::consts::TAU));
        }
        members.push((w / total, PureState::new(amps).unwrap()));
    }
    BlockInstance {
        rho: DensityMatrix::mixture(&members).unwrap(),
        partition: ProjectorPartition::new(blocks, d).unwrap(),
    }
}

/// Per-block coherence vectors read straight off the diagonal of ρ.
pub fn block_diagonals(rho: &DensityMatrix, partition: &ProjectorPartition) -> Vec<Vec<f64>> {
    let m = rho.matrix();
    partition
        .blocks()
        .iter()
        .filter_map(|b| {
            let trace: f64 = b.iter().map(|&i| m[(i, i)].re).sum();
            (trace > 1e-12).then(|| {
                let mut v = vec![0.0; rho.dim()];
                for (k, &i) in b.iter().enumerate() {
                    v[k] = m[(i, i)].re / trace;
                }
                v
            })
        })
        .collect()
}
