//! Majorization-lattice toolkit for probabilistic coherence transformations.
//!
//! The crate is organized bottom-up:
//!
//! * [`lattice`]: canonical probability vectors, majorization, meet/join and
//!   lattice distances.
//! * [`transform`]: coherence monotones, the ratio ladder, maximal success
//!   probability and the diagonal success/failure operators.
//! * [`protocols`]: greedy (join-pivoted) and thrifty (meet-pivoted) plans.
//! * [`mixed`]: target ensembles and mixed-state transformations through
//!   pure block decompositions.
//! * [`entangle`]: converting coherence into bipartite entanglement.
//! * [`sim`]: seeded Monte Carlo runs of the protocols.
//!
//! Everything numeric is generic over [`Scalar`], implemented by exact
//! rationals ([`Exact`]) and `f64`.

pub mod entangle;
pub mod error;
pub mod lattice;
pub mod mixed;
pub mod par;
pub mod protocols;
pub mod sample;
pub mod scalar;
pub mod sim;
pub mod transform;

pub use error::{Error, Result};
pub use lattice::{MajorizationOrder, ProbVector};
pub use par::Execution;
pub use scalar::{Exact, Mode, Scalar};

/// Version tag carried by every emitted JSON document.
pub const SCHEMA_VERSION: u32 = 1;
