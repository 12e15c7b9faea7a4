//! Time evolution under flux pulse schedules and the gate primitives built
//! from it.
//!
//! The logical basis is anchored at half flux; Bloch vectors put `ψ0` at
//! `+z`. Free evolution at half flux is then `R_z(−2π E_q t)`.

mod gates;
mod propagate;
mod schedule;
pub mod su2;
mod tipping;

pub use gates::{
    adiabatic_z_gate, diabatic_gate, diabatic_gate_finite_rise, diabatic_sequence,
    simulate_adiabatic_z, GateResult, ADIABATIC_LEAKAGE_LIMIT, GATE_DT_TOL,
};
pub use propagate::{
    bloch_projection, evolve_columns, propagate, propagate_converged, propagate_in_basis,
    propagator, StateTrajectory, StepConvergence, DEFAULT_DT, NORM_TOL,
};
pub use schedule::{PulseSchedule, Segment, SegmentKind};
pub use tipping::{
    tipping_analysis, tipping_angle, tipping_angle_in_basis, two_level_validity,
    two_level_validity_in_basis, TippingAngle, TwoLevelValidity, DEFAULT_LEAKAGE_THRESHOLD,
};
