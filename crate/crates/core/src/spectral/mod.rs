//! Diagonalization over bias sweeps, qubit splitting, the logical basis and
//! truncation convergence.

mod convergence;
mod eigen;
mod qubit;
mod sweep;

pub use convergence::{convergence_check, ConvergenceReport, CONVERGENCE_LEVELS, MAX_N_CUT};
pub use eigen::{eigensystem, solve, SpectrumResult};
pub use qubit::{
    fix_phase, localize_qubit_basis, qubit_splitting, splitting_approx, QubitBasis, WellLabel,
    BASIS_GAP_FLOOR, DEGENERATE_SPLITTING,
};
pub use sweep::{charge_sweep, flux_sweep, linspace, SpectrumSweep, SweepAxis};

pub(crate) use eigen::evolution_operator;
#[allow(unused_imports)]
pub(crate) use sweep::check_grid;
