use super::{
    effective_junction, effective_junction_derivative, CircuitParams, EffectiveJunction,
    HermitianOperator,
};
use crate::C64;

fn with_charging(params: &CircuitParams) -> HermitianOperator {
    let mut h = HermitianOperator::zeros(params.n_cut);
    for i in 0..h.dim() {
        let n = h.charge_of(i) as f64;
        h.set_diag(i, 4.0 * params.ec * (n - params.ng).powi(2));
    }
    h
}

/// Fills the `+1` and `+2` charge sub-diagonals with the given couplings.
fn fill_couplings(h: &mut HermitianOperator, single: C64, pair: C64) {
    let dim = h.dim();
    for i in 0..dim {
        if i + 1 < dim {
            h.set_pair(i + 1, i, single);
        }
        if i + 2 < dim {
            h.set_pair(i + 2, i, pair);
        }
    }
}

/// Charge-basis Hamiltonian
/// `4E_C(n̂ − n_g)² − E_J1 cos(φ̂ − φ₀) − E_J2 cos 2φ̂`
/// with the effective amplitudes evaluated at `flux`.
pub fn build_hamiltonian(params: &CircuitParams, flux: f64) -> HermitianOperator {
    build_hamiltonian_with(params, &effective_junction(params, flux))
}

/// [`build_hamiltonian`] from precomputed effective parameters, e.g. one
/// point of [`effective_junction_path`](super::effective_junction_path).
pub fn build_hamiltonian_with(params: &CircuitParams, ej: &EffectiveJunction) -> HermitianOperator {
    let mut h = with_charging(params);
    fill_couplings(
        &mut h,
        C64::from_polar(-0.5 * ej.ej1, -ej.phi0),
        C64::new(-0.5 * ej.ej2, 0.0),
    );
    h
}

/// Same Hamiltonian before the phase shift by `φ₂/2`:
/// `4E_C(n̂ − n_g)² − E_J1 cos(φ̂ − φ₁) − E_J2 cos(2φ̂ − φ₂)`.
/// Related to [`build_hamiltonian`] by the diagonal unitary `e^{−i n φ₂/2}`.
pub fn build_hamiltonian_unshifted(params: &CircuitParams, flux: f64) -> HermitianOperator {
    let ej = effective_junction(params, flux);
    let mut h = with_charging(params);
    fill_couplings(
        &mut h,
        -0.5 * ej.amplitude1().conj(),
        -0.5 * ej.amplitude2().conj(),
    );
    h
}

/// `∂H/∂Φ` of [`build_hamiltonian`].
pub fn d_hamiltonian_d_flux(params: &CircuitParams, flux: f64) -> HermitianOperator {
    let ej = effective_junction(params, flux);
    let d = effective_junction_derivative(params, flux);
    let mut h = HermitianOperator::zeros(params.n_cut);
    // d/dΦ [E e^{−iφ₀}] = (E' − i φ₀' E) e^{−iφ₀}
    let single = C64::new(d.dej1, -d.dphi0 * ej.ej1) * C64::from_polar(-0.5, -ej.phi0);
    fill_couplings(&mut h, single, C64::new(-0.5 * d.dej2, 0.0));
    h
}

/// `∂H/∂Φ` of [`build_hamiltonian_unshifted`].
pub fn d_hamiltonian_d_flux_unshifted(params: &CircuitParams, flux: f64) -> HermitianOperator {
    let ej = effective_junction(params, flux);
    let d = effective_junction_derivative(params, flux);
    let mut h = HermitianOperator::zeros(params.n_cut);
    let rate = |e: f64, phi: f64, de: f64, dphi: f64| -> C64 {
        (C64::new(de, 0.0) + C64::new(0.0, dphi * e)) * C64::from_polar(1.0, phi)
    };
    let da1 = rate(ej.ej1, ej.phi1, d.dej1, d.dphi1);
    let da2 = rate(ej.ej2, ej.phi2, d.dej2, d.dphi2);
    fill_couplings(&mut h, -0.5 * da1.conj(), -0.5 * da2.conj());
    h
}

/// `∂H/∂n_g = −8E_C(n̂ − n_g)`; independent of flux.
pub fn d_hamiltonian_d_ng(params: &CircuitParams, _flux: f64) -> HermitianOperator {
    let mut h = HermitianOperator::zeros(params.n_cut);
    for i in 0..h.dim() {
        let n = h.charge_of(i) as f64;
        h.set_diag(i, -8.0 * params.ec * (n - params.ng));
    }
    h
}

pub fn number_operator(n_cut: usize) -> HermitianOperator {
    let mut h = HermitianOperator::zeros(n_cut);
    for i in 0..h.dim() {
        h.set_diag(i, h.charge_of(i) as f64);
    }
    h
}

pub fn cos_phi_operator(n_cut: usize) -> HermitianOperator {
    let mut h = HermitianOperator::zeros(n_cut);
    fill_couplings(&mut h, C64::new(0.5, 0.0), C64::new(0.0, 0.0));
    h
}

/// `sin φ̂`: `−i/2` on the charge-raising diagonal, `+i/2` on the lowering one.
pub fn sin_phi_operator(n_cut: usize) -> HermitianOperator {
    let mut h = HermitianOperator::zeros(n_cut);
    fill_couplings(&mut h, C64::new(0.0, -0.5), C64::new(0.0, 0.0));
    h
}

/// Josephson potential `−E_J1 cos(φ − φ₀) − E_J2 cos 2φ` of
/// [`build_hamiltonian`] at phase `phi` (MHz).
pub fn potential_energy(params: &CircuitParams, flux: f64, phi: f64) -> f64 {
    let ej = effective_junction(params, flux);
    -ej.ej1 * (phi - ej.phi0).cos() - ej.ej2 * (2.0 * phi).cos()
}

/// `ψ(φ) = Σ_n c_n e^{inφ}/√(2π)` for a charge-basis vector `c`.
pub fn phase_wavefunction(state: &nalgebra::DVector<C64>, phi: f64) -> C64 {
    let n_cut = (state.len() / 2) as i64;
    let norm = (2.0 * std::f64::consts::PI).sqrt().recip();
    state
        .iter()
        .enumerate()
        .map(|(i, c)| c * C64::from_polar(norm, (i as i64 - n_cut) as f64 * phi))
        .sum()
}
