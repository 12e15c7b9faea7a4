//! Circuit model: parameters, effective junction amplitudes and the
//! charge-basis operators of the single-mode π-SQUID Hamiltonian.
//!
//! Charge states are indexed `n ∈ {−N, …, +N}`; row `i` of every operator
//! corresponds to `n = i − N`. The phase exponential `e^{iφ̂}` raises the
//! charge by one, so `⟨n+1|e^{iφ̂}|n⟩ = 1`.

mod hamiltonian;
mod junction;
mod operator;
mod params;

pub use hamiltonian::{
    build_hamiltonian, build_hamiltonian_unshifted, build_hamiltonian_with, cos_phi_operator,
    d_hamiltonian_d_flux, d_hamiltonian_d_flux_unshifted, d_hamiltonian_d_ng, number_operator,
    phase_wavefunction, potential_energy, sin_phi_operator,
};
pub use junction::{
    effective_junction, effective_junction_derivative, effective_junction_path, sincos_pi,
    EffectiveJunction, JunctionDerivative,
};
pub use operator::HermitianOperator;
pub use params::{CircuitParams, DEFAULT_N_CUT};
