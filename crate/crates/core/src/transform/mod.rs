//! Coherence vectors, monotones, the ratio ladder and the diagonal SIO pair
//! realizing an optimal probabilistic transformation.

mod ladder;
mod operators;
mod state;

pub use ladder::{
    deterministic_feasible, intermediate_state, ladder, max_probability, monotones,
    CoherenceMonotones, LadderStep, TransformLadder,
};
pub use operators::{failure_operator, residual_state, success_operator, DiagonalOperator};
pub use state::{coherence_vector, fidelity, PureState};
