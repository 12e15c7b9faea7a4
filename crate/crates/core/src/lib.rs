//! Numerical simulator for a flux-controlled π-SQUID qubit.
//!
//! The loop of two non-ideal π-periodic junctions is reduced to a single
//! phase mode with flux-dependent Josephson amplitudes. This crate builds the
//! truncated charge-basis Hamiltonian, diagonalizes it over flux and offset
//! charge, propagates flux pulse schedules, and evaluates Berry curvature and
//! loop phases over the (flux, offset charge) plane.
//!
//! Units: energies are frequencies E/h in MHz, times are in µs, so a product
//! `energy * time` is a phase in cycles. Flux is the loop phase Φ in radians.
//!
//! Module map:
//! - [`model`]: circuit parameters, effective junction amplitudes, operators.
//! - [`spectral`]: eigensystems, sweeps, qubit splitting, logical basis.
//! - [`dynamics`]: pulse schedules, propagation, adiabatic and diabatic gates.
//! - [`holonomy`]: Berry curvature, curvature grids, loop phases.
//! - [`cli`]: configuration files, jobs, result envelopes and bundled recipes.

pub mod cli;
pub mod dynamics;
mod error;
pub mod holonomy;
pub mod model;
pub mod spectral;

pub use error::{Error, ErrorKind, Result};

/// Complex scalar used for every state vector and operator.
pub type C64 = nalgebra::Complex<f64>;

pub use model::{CircuitParams, EffectiveJunction, HermitianOperator};
