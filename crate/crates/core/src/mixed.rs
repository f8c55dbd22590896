//! Target ensembles and transformations between mixed states.
//!
//! A mixed state `ρ` is handled through an orthogonal complete set of
//! incoherent projectors: when every normalized block `P ρ P` is a pure
//! state `ψ^α`, the question reduces to pure-state majorization against the
//! diagonal of the target `σ`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{join, meet, ProbVector};
use crate::scalar::{Scalar, FLOAT_EPS};
use crate::transform::{coherence_vector, max_probability, monotones, PureState};

const HERMITIAN_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;
/// A block is pure when its second eigenvalue is at most this fraction of its trace.
const RANK_ONE_TOL: f64 = 1e-9;
/// Largest dimension accepted by [`search_partition`].
pub const MAX_SEARCH_DIM: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validate Hermiticity, positivity and unit trace.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let d = matrix.nrows();
        if d == 0 || matrix.ncols() != d {
            return Err(Error::InvalidDensityMatrix("matrix must be square and nonempty".into()));
        }
        for i in 0..d {
            for j in 0..d {
                if (matrix[(i, j)] - matrix[(j, i)].conj()).norm() > HERMITIAN_TOL {
                    return Err(Error::InvalidDensityMatrix(format!(
                        "not Hermitian at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > FLOAT_EPS * d as f64 || trace.im.abs() > HERMITIAN_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace is {trace}")));
        }
        let min_eig = SymmetricEigen::new(matrix.clone())
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -PSD_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min_eig}"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidDensityMatrix("rows must form a square matrix".into()));
        }
        Self::new(DMatrix::from_fn(d, d, |i, j| rows[i][j]))
    }

    /// `|ψ><ψ|`.
    pub fn pure(state: &PureState) -> Self {
        Self::mixture(&[(1.0, state.clone())]).expect("a pure state is a valid density matrix")
    }

    /// `Σ w_k |ψ_k><ψ_k|`.
    pub fn mixture(members: &[(f64, PureState)]) -> Result<Self> {
        let d = members
            .first()
            .map(|(_, s)| s.dim())
            .ok_or_else(|| Error::InvalidDensityMatrix("empty mixture".into()))?;
        let mut matrix = DMatrix::<Complex64>::zeros(d, d);
        for (w, s) in members {
            if s.dim() != d {
                return Err(Error::DimensionMismatch { left: d, right: s.dim() });
            }
            let v = DMatrix::from_column_slice(d, 1, s.amplitudes());
            matrix += (&v * v.adjoint()) * Complex64::new(*w, 0.0);
        }
        Self::new(matrix)
    }

    /// The maximally mixed state `I / d`.
    pub fn maximally_mixed(d: usize) -> Self {
        let m = DMatrix::<Complex64>::identity(d, d) * Complex64::new(1.0 / d as f64, 0.0);
        Self { matrix: m }
    }

    /// Diagonal state with the given (unsorted) diagonal.
    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let d = values.len();
        Self::new(DMatrix::from_fn(d, d, |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Row-major `[[[re, im], ...], ...]`.
    pub fn to_json(&self) -> Value {
        let d = self.dim();
        let rows: Vec<Vec<[f64; 2]>> = (0..d)
            .map(|i| (0..d).map(|j| [self.matrix[(i, j)].re, self.matrix[(i, j)].im]).collect())
            .collect();
        json!({ "entries": rows })
    }

    /// Accepts `{"entries": rows}` or bare rows; each entry is `[re, im]` or a real number.
    pub fn from_json(value: &Value) -> Result<Self> {
        let rows = match value {
            Value::Object(map) => map
                .get("entries")
                .ok_or_else(|| Error::Parse("missing `entries`".into()))?,
            other => other,
        };
        let rows = rows
            .as_array()
            .ok_or_else(|| Error::Parse("density matrix must be an array of rows".into()))?;
        let parsed = rows
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| Error::Parse("row must be an array".into()))?
                    .iter()
                    .map(parse_complex)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(&parsed)
    }

    fn block(&self, indices: &[usize]) -> DMatrix<Complex64> {
        let n = indices.len();
        DMatrix::from_fn(n, n, |a, b| self.matrix[(indices[a], indices[b])])
    }
}

fn parse_complex(value: &Value) -> Result<Complex64> {
    let bad = || Error::Parse(format!("invalid complex entry {value}"));
    match value {
        Value::Number(n) => Ok(Complex64::new(n.as_f64().ok_or_else(bad)?, 0.0)),
        Value::Array(pair) if pair.len() == 2 => Ok(Complex64::new(
            pair[0].as_f64().ok_or_else(bad)?,
            pair[1].as_f64().ok_or_else(bad)?,
        )),
        _ => Err(bad()),
    }
}

/// Disjoint nonempty index blocks covering `0..d` (0-based; JSON is 1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectorPartition {
    blocks: Vec<Vec<usize>>,
}

impl ProjectorPartition {
    pub fn new(mut blocks: Vec<Vec<usize>>, dim: usize) -> Result<Self> {
        let mut seen = vec![false; dim];
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            block.sort_unstable();
            for &i in block.iter() {
                if i >= dim {
                    return Err(Error::InvalidPartition(format!("index {} out of range", i + 1)));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::InvalidPartition(format!("index {} repeated", i + 1)));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("index {} not covered", missing + 1)));
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(Self { blocks })
    }

    pub fn trivial(dim: usize) -> Self {
        Self {
            blocks: vec![(0..dim).collect()],
        }
    }

    pub fn singletons(dim: usize) -> Self {
        Self {
            blocks: (0..dim).map(|i| vec![i]).collect(),
        }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn to_json(&self) -> Value {
        json!(self
            .blocks
            .iter()
            .map(|b| b.iter().map(|i| i + 1).collect::<Vec<_>>())
            .collect::<Vec<_>>())
    }

    pub fn from_json(value: &Value, dim: usize) -> Result<Self> {
        let bad = || Error::Parse("partition must be a list of 1-based index lists".into());
        let blocks = value
            .as_array()
            .ok_or_else(bad)?
            .iter()
            .map(|b| {
                b.as_array()
                    .ok_or_else(bad)?
                    .iter()
                    .map(|i| match i.as_u64() {
                        Some(i) if i >= 1 => Ok(i as usize - 1),
                        _ => Err(bad()),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(blocks, dim)
    }
}

/// Weighted target ensemble `{p_j, φ_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble<S: Scalar = f64> {
    members: Vec<(S, ProbVector<S>)>,
}

impl<S: Scalar> Ensemble<S> {
    pub fn new(members: Vec<(S, ProbVector<S>)>) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::WeightsInvalid("ensemble is empty".into()))?;
        let d = first.1.dim();
        let mut total = S::zero();
        for (w, state) in &members {
            if state.dim() != d {
                return Err(Error::DimensionMismatch { left: d, right: state.dim() });
            }
            if *w < S::zero() {
                return Err(Error::WeightsInvalid(format!("negative weight {w}")));
            }
            total = total + w.clone();
        }
        if !total.eq_tol(&S::one()) {
            return Err(Error::WeightsInvalid(format!("weights sum to {total}")));
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[(S, ProbVector<S>)] {
        &self.members
    }

    /// `Σ p_j φ_j` component-wise over the canonical orderings.
    pub fn average(&self) -> Result<ProbVector<S>> {
        let d = self.members[0].1.dim();
        let mut acc = vec![S::zero(); d];
        for (w, state) in &self.members {
            for (slot, x) in acc.iter_mut().zip(state.components()) {
                *slot = slot.clone() + w.clone() * x.clone();
            }
        }
        ProbVector::canonicalize(acc)
    }
}

/// Meet of a set of coherence vectors.
pub fn ocr_state<S: Scalar>(states: &[ProbVector<S>]) -> Result<ProbVector<S>> {
    let lower = meet(states)?;
    debug_assert!({
        let c = monotones(&lower);
        let members: Vec<_> = states.iter().map(monotones).collect();
        (1..=lower.dim()).all(|l| {
            let best = members.iter().map(|m| m.get(l)).fold(S::zero(), S::max_of);
            c.get(l).eq_tol(&best) || S::MODE == crate::Mode::Float
        })
    });
    Ok(lower)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleOcr<S: Scalar = f64> {
    /// Meet of the source and every target.
    pub state: ProbVector<S>,
    /// Maximal probability of reaching `state` from the source.
    pub probability: S,
    /// Maximal probability of reaching each target individually.
    pub individual: Vec<S>,
}

impl<S: Scalar> EnsembleOcr<S> {
    /// The joint probability equals the smallest individual one.
    pub fn saturated(&self) -> bool {
        self.individual
            .iter()
            .cloned()
            .reduce(S::min_of)
            .is_some_and(|m| m.eq_tol(&self.probability))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ocr_state": self.state.to_json(),
            "probability": self.probability.to_json(),
            "individual_probabilities": self.individual.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "saturated": self.saturated(),
        })
    }
}

/// Probability of reaching the common meet of `source` and all `targets`.
pub fn ensemble_ocr_probability<S: Scalar>(source: &ProbVector<S>, targets: &[ProbVector<S>]) -> Result<EnsembleOcr<S>> {
    if targets.is_empty() {
        return Err(Error::EmptySet);
    }
    let individual = targets
        .iter()
        .map(|t| max_probability(source, t))
        .collect::<Result<Vec<_>>>()?;
    if individual.iter().any(Scalar::is_zero_tol) {
        return Err(Error::ZeroProbability);
    }
    let mut all = Vec::with_capacity(targets.len() + 1);
    all.push(source.clone());
    all.extend(targets.iter().cloned());
    let state = ocr_state(&all)?;
    let probability = max_probability(source, &state)?;
    Ok(EnsembleOcr {
        state,
        probability,
        individual,
    })
}

/// Whether the ensemble can be produced from `source` (`source ≺ Σ p_j φ_j`).
pub fn ensemble_obtainable<S: Scalar>(source: &ProbVector<S>, ensemble: &Ensemble<S>) -> Result<bool> {
    source.is_majorized_by(&ensemble.average()?)
}

/// Canonical diagonal `(σ_11, ..., σ_dd)`.
pub fn diagonal_vector(sigma: &DensityMatrix) -> Result<ProbVector<f64>> {
    let diag = (0..sigma.dim()).map(|i| sigma.matrix[(i, i)].re).collect();
    ProbVector::canonicalize(diag).map_err(|e| Error::InvalidDensityMatrix(e.to_string()))
}

/// A pure normalized block `P_α ρ P_α / Tr[P_α ρ P_α]`, embedded in full dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct PureBlock {
    pub block: usize,
    pub weight: f64,
    pub state: PureState,
}

enum BlockKind {
    Zero,
    Pure(PureState),
    Mixed,
}

fn classify_block(rho: &DensityMatrix, indices: &[usize]) -> BlockKind {
    let sub = rho.block(indices);
    let trace = sub.trace().re;
    if trace <= FLOAT_EPS {
        return BlockKind::Zero;
    }
    let eig = SymmetricEigen::new(sub);
    let mut order: Vec<usize> = (0..indices.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    if order.len() > 1 && eig.eigenvalues[order[1]] > RANK_ONE_TOL * trace {
        return BlockKind::Mixed;
    }
    let top = eig.eigenvectors.column(order[0]);
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); rho.dim()];
    for (k, &i) in indices.iter().enumerate() {
        let weight = (rho.matrix[(i, i)].re / trace).max(0.0);
        let v = top[k];
        let phase = if v.norm() > 0.0 { v / v.norm() } else { Complex64::new(1.0, 0.0) };
        amplitudes[i] = phase * weight.sqrt();
    }
    // global phase: first nonzero amplitude real positive
    if let Some(first) = amplitudes.iter().find(|a| a.norm() > 0.0).copied() {
        let rot = first.conj() / first.norm();
        for a in &mut amplitudes {
            *a *= rot;
        }
    }
    let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    for a in &mut amplitudes {
        *a /= norm.sqrt();
    }
    BlockKind::Pure(PureState::new(amplitudes).expect("normalized above"))
}

fn check_partition(rho: &DensityMatrix, partition: &ProjectorPartition) -> Result<()> {
    if partition.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: partition.dim(),
        });
    }
    Ok(())
}

/// Split `ρ` into pure blocks; blocks with zero weight are skipped.
pub fn block_decompose(rho: &DensityMatrix, partition: &ProjectorPartition) -> Result<Vec<PureBlock>> {
    check_partition(rho, partition)?;
    let mut out = Vec::new();
    for (block, indices) in partition.blocks().iter().enumerate() {
        match classify_block(rho, indices) {
            BlockKind::Zero => {}
            BlockKind::Mixed => return Err(Error::BlockNotPure { block }),
            BlockKind::Pure(state) => out.push(PureBlock {
                block,
                weight: rho.block(indices).trace().re,
                state,
            }),
        }
    }
    Ok(out)
}

/// Sufficient condition for `ρ -> σ` with certainty: every block of `ρ`
/// under `partition` is pure and majorized by the diagonal of `σ`.
pub fn deterministic_mixed_feasible(rho: &DensityMatrix, sigma: &DensityMatrix, partition: &ProjectorPartition) -> Result<bool> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    let blocks = match block_decompose(rho, partition) {
        Ok(blocks) => blocks,
        Err(Error::BlockNotPure { .. }) => return Ok(false),
        Err(e) => return Err(e),
    };
    let target = diagonal_vector(sigma)?;
    for b in &blocks {
        if !coherence_vector(&b.state)?.is_majorized_by(&target)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest partition, in restricted-growth-string order, whose blocks are
/// all pure. Singleton blocks always qualify, so a partition is found for
/// every valid `ρ`.
pub fn search_partition(rho: &DensityMatrix) -> Result<Option<ProjectorPartition>> {
    let d = rho.dim();
    if d > MAX_SEARCH_DIM {
        return Err(Error::DimensionTooLarge {
            dim: d,
            max: MAX_SEARCH_DIM,
        });
    }
    let mut memo = vec![None; 1 << d];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    if assign(rho, 0, &mut blocks, &mut memo) {
        return Ok(Some(ProjectorPartition { blocks }));
    }
    Ok(None)
}

fn block_is_pure(rho: &DensityMatrix, indices: &[usize], memo: &mut [Option<bool>]) -> bool {
    let mask: usize = indices.iter().map(|i| 1 << i).sum();
    *memo[mask].get_or_insert_with(|| !matches!(classify_block(rho, indices), BlockKind::Mixed))
}

// Depth-first over restricted growth strings; a mixed block stays mixed
// under any extension, so such branches are pruned immediately.
fn assign(rho: &DensityMatrix, index: usize, blocks: &mut Vec<Vec<usize>>, memo: &mut [Option<bool>]) -> bool {
    if index == rho.dim() {
        return true;
    }
    for b in 0..=blocks.len() {
        if b == blocks.len() {
            blocks.push(vec![index]);
        } else {
            blocks[b].push(index);
        }
        if block_is_pure(rho, &blocks[b], memo) && assign(rho, index + 1, blocks, memo) {
            return true;
        }
        if b == blocks.len() - 1 && blocks[b].len() == 1 {
            blocks.pop();
        } else {
            blocks[b].pop();
        }
    }
    false
}

/// Greedy-style plan for `{ψ^α} -> φ^σ` through the joint join of all blocks and the target.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedPctPlan {
    pub target: ProbVector<f64>,
    pub blocks: Vec<PureBlock>,
    pub block_vectors: Vec<ProbVector<f64>>,
    /// `φ^σ ∨ ψ^1 ∨ ... ∨ ψ^r`.
    pub joint_ocp: ProbVector<f64>,
    /// Maximal probability of `joint_ocp -> φ^σ`.
    pub joint_probability: f64,
    /// `ψ^α ∨ φ^σ` per block.
    pub block_ocps: Vec<ProbVector<f64>>,
    pub block_probabilities: Vec<f64>,
    /// `joint_probability <= min block_probabilities`.
    pub inequality_holds: bool,
    /// The inequality is strict. The joint probability always equals the
    /// smallest block probability (the target's rescaled Lorenz curve is a
    /// concave bound that survives the envelope), so this stays false up to
    /// rounding; it is reported as a check.
    pub strict_gap: bool,
    /// Some monotone of `joint_ocp` lies strictly below the pointwise minimum
    /// over the block joins: the envelope flattened the joint curve.
    pub flattened: bool,
    /// Every block reaches `joint_ocp` with certainty, so it can be restored.
    pub catalyst_recoverable: bool,
    /// Every block is majorized by the target diagonal.
    pub deterministic: bool,
}

impl MixedPctPlan {
    pub fn to_json(&self) -> Value {
        json!({
            "target": self.target.to_json(),
            "blocks": self.blocks.iter().zip(&self.block_vectors).map(|(b, v)| json!({
                "block": b.block + 1,
                "weight": b.weight,
                "coherence_vector": v.to_json(),
            })).collect::<Vec<_>>(),
            "joint_ocp": self.joint_ocp.to_json(),
            "joint_probability": self.joint_probability,
            "block_ocps": self.block_ocps.iter().map(ProbVector::to_json).collect::<Vec<_>>(),
            "block_probabilities": self.block_probabilities,
            "inequality_holds": self.inequality_holds,
            "strict_gap": self.strict_gap,
            "flattened": self.flattened,
            "catalyst_recoverable": self.catalyst_recoverable,
            "deterministic": self.deterministic,
        })
    }
}

pub fn mixed_pct_plan(rho: &DensityMatrix, sigma: &DensityMatrix, partition: &ProjectorPartition) -> Result<MixedPctPlan> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    let blocks = block_decompose(rho, partition)?;
    let target = diagonal_vector(sigma)?;
    let block_vectors = blocks
        .iter()
        .map(|b| coherence_vector(&b.state))
        .collect::<Result<Vec<_>>>()?;
    let mut all = vec![target.clone()];
    all.extend(block_vectors.iter().cloned());
    let joint_ocp = join(&all)?;
    let joint_probability = max_probability(&joint_ocp, &target)?;
    let block_ocps = block_vectors
        .iter()
        .map(|v| join(&[v.clone(), target.clone()]))
        .collect::<Result<Vec<_>>>()?;
    let block_probabilities = block_ocps
        .iter()
        .map(|v| max_probability(v, &target))
        .collect::<Result<Vec<_>>>()?;
    let min_block = block_probabilities.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut catalyst_recoverable = true;
    let mut deterministic = true;
    for v in &block_vectors {
        catalyst_recoverable &= v.is_majorized_by(&joint_ocp)?;
        deterministic &= v.is_majorized_by(&target)?;
    }
    let joint_curve = monotones(&joint_ocp);
    let block_curves: Vec<_> = block_ocps.iter().map(monotones).collect();
    let flattened = (1..=target.dim()).any(|l| {
        let floor = block_curves.iter().map(|c| c.get(l)).fold(f64::INFINITY, f64::min);
        joint_curve.get(l).lt_tol(&floor)
    });
    Ok(MixedPctPlan {
        flattened,
        inequality_holds: joint_probability.le_tol(&min_block),
        strict_gap: joint_probability.lt_tol(&min_block),
        target,
        blocks,
        block_vectors,
        joint_ocp,
        joint_probability,
        block_ocps,
        block_probabilities,
        catalyst_recoverable,
        deterministic,
    })
}
