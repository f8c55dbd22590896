use thiserror::Error;

/// Errors raised by lattice, transformation and simulation operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("entry {index} is negative ({value})")]
    NegativeEntry { index: usize, value: String },
    #[error("components sum to {sum}, expected 1")]
    SumNotOne { sum: String },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("operation needs at least one vector")]
    EmptySet,
    #[error("cannot pad a vector of dimension {from} down to {to}")]
    ShrinkNotAllowed { from: usize, to: usize },
    #[error("state is not normalized (squared norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("source has fewer nonzero components ({source_support}) than target ({target_support})")]
    UnsupportedTarget {
        source_support: usize,
        target_support: usize,
    },
    #[error("ladder does not match the supplied state")]
    LadderMismatch,
    #[error("ladder is deterministic, no success/failure split exists")]
    DeterministicLadder,
    #[error("operator entry {index} exceeds one")]
    EntryExceedsOne { index: usize },
    #[error("deterministic transformation has no failure branch")]
    DeterministicNoResidual,
    #[error("transformation succeeds with probability zero")]
    ZeroProbability,
    #[error("ensemble weights are invalid: {0}")]
    WeightsInvalid(String),
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("invalid projector partition: {0}")]
    InvalidPartition(String),
    #[error("block {block} of the partition is not pure")]
    BlockNotPure { block: usize },
    #[error("dimension {dim} exceeds the partition search limit of {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("source already majorized by target, nothing to simulate")]
    DeterministicInstance,
    #[error("invalid number of trials: {0}")]
    InvalidTrials(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
