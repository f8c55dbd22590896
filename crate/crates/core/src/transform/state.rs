use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::ProbVector;
use crate::scalar::{Scalar, FLOAT_EPS};

/// A pure state given by its amplitudes in the incoherent basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        let slack = FLOAT_EPS * amplitudes.len().max(1) as f64;
        if amplitudes.is_empty() || (norm - 1.0).abs() > slack {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The state with nonnegative real amplitudes `sqrt(p_i)`.
    pub fn from_coherence_vector<S: Scalar>(p: &ProbVector<S>) -> Self {
        Self {
            amplitudes: p
                .components()
                .iter()
                .map(|x| Complex64::new(x.to_f64().max(0.0).sqrt(), 0.0))
                .collect(),
        }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }
}

/// Squared moduli of the amplitudes, in canonical order. Phases drop out.
pub fn coherence_vector(state: &PureState) -> Result<ProbVector<f64>> {
    ProbVector::canonicalize(state.amplitudes.iter().map(|a| a.norm_sqr()).collect())
}

/// `|<a|b>|^2`.
pub fn fidelity(a: &PureState, b: &PureState) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let overlap: Complex64 = a
        .amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(overlap.norm_sqr())
}
