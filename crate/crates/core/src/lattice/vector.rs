use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{Mode, Scalar};

/// A probability distribution in canonical (non-increasing) order.
///
/// Coherence vectors of pure states, Schmidt vectors and diagonals of
/// density matrices are all represented by this type.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector<S: Scalar = f64> {
    components: Vec<S>,
}

impl<S: Scalar> ProbVector<S> {
    /// Sort `raw` into non-increasing order and validate it.
    ///
    /// Ties keep their original relative order. In float mode entries down to
    /// `-eps` are clamped to zero and a sum within `eps * d` of one is
    /// renormalized; exact mode accepts nothing but a sum of exactly one.
    pub fn canonicalize(raw: Vec<S>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptySet);
        }
        let eps = S::tolerance();
        let mut entries = Vec::with_capacity(raw.len());
        for (index, value) in raw.into_iter().enumerate() {
            if value < S::zero() {
                if value < -eps.clone() || S::MODE == Mode::Exact {
                    return Err(Error::NegativeEntry {
                        index,
                        value: value.to_string(),
                    });
                }
                entries.push(S::zero());
            } else {
                entries.push(value);
            }
        }
        let sum = entries.iter().cloned().fold(S::zero(), |acc, x| acc + x);
        let slack = eps * S::from_usize(entries.len());
        if (sum.clone() - S::one()).abs() > slack {
            return Err(Error::SumNotOne {
                sum: sum.to_string(),
            });
        }
        if S::MODE == Mode::Float && sum != S::one() {
            for x in entries.iter_mut() {
                *x = x.clone() / sum.clone();
            }
        }
        entries.sort_by(|a, b| b.partial_cmp(a).expect("finite components"));
        Ok(Self {
            components: entries,
        })
    }

    /// Build from components that are already known to be sorted and normalized.
    pub(crate) fn from_sorted_unchecked(components: Vec<S>) -> Self {
        debug_assert!(components.windows(2).all(|w| w[1].le_tol(&w[0])));
        Self { components }
    }

    /// The uniform distribution, majorized by every vector of dimension `d`.
    pub fn uniform(d: usize) -> Self {
        assert!(d >= 1, "dimension must be positive");
        let value = S::one() / S::from_usize(d);
        Self {
            components: vec![value; d],
        }
    }

    /// `(1, 0, ..., 0)`, which majorizes every vector of dimension `d`.
    pub fn point_mass(d: usize) -> Self {
        assert!(d >= 1, "dimension must be positive");
        let mut components = vec![S::zero(); d];
        components[0] = S::one();
        Self { components }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[S] {
        &self.components
    }

    pub fn into_components(self) -> Vec<S> {
        self.components
    }

    /// Number of components that are nonzero (beyond tolerance).
    pub fn support(&self) -> usize {
        self.components.iter().filter(|x| !x.is_zero_tol()).count()
    }

    pub fn lorenz(&self) -> LorenzCurve<S> {
        let mut acc = S::zero();
        let partial_sums = self
            .components
            .iter()
            .map(|x| {
                acc = acc.clone() + x.clone();
                acc.clone()
            })
            .collect();
        LorenzCurve { partial_sums }
    }

    /// Zero-extend to dimension `d`.
    pub fn pad(&self, d: usize) -> Result<Self> {
        if d < self.dim() {
            return Err(Error::ShrinkNotAllowed {
                from: self.dim(),
                to: d,
            });
        }
        let mut components = self.components.clone();
        components.resize(d, S::zero());
        Ok(Self { components })
    }

    pub fn to_f64(&self) -> ProbVector<f64> {
        ProbVector {
            components: self.components.iter().map(Scalar::to_f64).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "mode": S::MODE.as_str(),
            "components": self.components.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        })
    }

    /// Accepts either a bare array of scalars or `{"mode": .., "components": [..]}`.
    ///
    /// The mode tag, when present, is informational: components are parsed in
    /// the mode of `S`.
    pub fn from_json(value: &Value) -> Result<Self> {
        let items = match value {
            Value::Array(items) => items,
            Value::Object(map) => map
                .get("components")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("missing `components` array".into()))?,
            other => return Err(Error::Parse(format!("expected a vector, got {other}"))),
        };
        let raw = items.iter().map(S::from_json).collect::<Result<Vec<_>>>()?;
        Self::canonicalize(raw)
    }
}

impl ProbVector<f64> {
    /// Lift a float vector into any mode. Exact mode receives the binary value.
    pub fn convert<T: Scalar>(&self) -> Result<ProbVector<T>> {
        let raw = self
            .components
            .iter()
            .map(|x| T::parse(&x.to_string()))
            .collect::<Result<Vec<_>>>()?;
        ProbVector::canonicalize(raw)
    }
}

impl<S: Scalar> std::fmt::Display for ProbVector<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Cumulative sums `s_k = c_1 + ... + c_k` of a [`ProbVector`].
#[derive(Debug, Clone, PartialEq)]
pub struct LorenzCurve<S: Scalar = f64> {
    partial_sums: Vec<S>,
}

impl<S: Scalar> LorenzCurve<S> {
    pub fn partial_sums(&self) -> &[S] {
        &self.partial_sums
    }

    pub fn dim(&self) -> usize {
        self.partial_sums.len()
    }

    /// Increments `s_k - s_{k-1}` with `s_0 = 0`.
    pub fn increments(&self) -> Vec<S> {
        let mut prev = S::zero();
        self.partial_sums
            .iter()
            .map(|s| {
                let step = s.clone() - prev.clone();
                prev = s.clone();
                step
            })
            .collect()
    }

    /// True when increments are non-increasing (within tolerance).
    pub fn is_concave(&self) -> bool {
        self.increments().windows(2).all(|w| w[1].le_tol(&w[0]))
    }

    pub(crate) fn from_partial_sums(partial_sums: Vec<S>) -> Self {
        Self { partial_sums }
    }
}
