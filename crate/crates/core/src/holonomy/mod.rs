//! Berry curvature over the `(Φ, n_g)` bias plane and loop phases, from the
//! area integral of the curvature and from discrete Wilson loops.
//!
//! Loops are counterclockwise in the `(Φ, n_g)` plane for positive phase.

mod curvature;
mod loop_phase;
mod path;

pub use curvature::{
    berry_curvature, curvature_from_states, curvature_grid, curvature_matrix, CurvatureGrid,
    CurvaturePeak, LocalFrame, DEFAULT_GAP_FLOOR,
};
pub use loop_phase::{
    loop_phase_curvature, loop_phase_curvature_with, loop_phase_wilson, wilson_phase_from_states,
    CurvatureIntegration, LevelPhase, LoopMethod, LoopPhaseResult, DEFAULT_L_MAX,
    DEFAULT_PHASE_TOL,
};
pub use path::{LoopPath, Rectangle};
