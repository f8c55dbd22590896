//! Canonical probability vectors and the majorization lattice.

mod measures;
mod order;
mod vector;

pub use measures::{distance_D, distance_d, gini_index, shannon_entropy};
pub use order::{compare, join, meet, MajorizationOrder};
pub use vector::{LorenzCurve, ProbVector};
