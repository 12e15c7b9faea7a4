use std::f64::consts::PI;

use nalgebra::Matrix2;
use serde::Serialize;

use super::su2::{polar_unitary, QubitMap};
use crate::model::CircuitParams;
use crate::spectral::{localize_qubit_basis, solve, QubitBasis};
use crate::{Result, C64};

/// Leakage above which the two-level description of a sudden pulse is rejected.
pub const DEFAULT_LEAKAGE_THRESHOLD: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoLevelValidity {
    pub flux: f64,
    /// `E₂ − E₁` at `flux` (MHz).
    pub gap: f64,
    /// Mean weight of the logical states outside the two lowest eigenstates.
    pub leakage_step: f64,
    pub threshold: f64,
    pub valid: bool,
}

/// Weight matrix `C_ik = ⟨ψᵢ|e_k⟩` of the logical states on the two lowest
/// eigenstates at `flux`, with the eigen-energies.
fn doublet_overlaps(
    params: &CircuitParams,
    flux: f64,
    basis: &QubitBasis,
) -> Result<(QubitMap, [f64; 3])> {
    let r = solve(params, flux, 3)?;
    let e0 = r.state(0);
    let e1 = r.state(1);
    let mut c = Matrix2::new(
        basis.psi0.dotc(&e0),
        basis.psi0.dotc(&e1),
        basis.psi1.dotc(&e0),
        basis.psi1.dotc(&e1),
    );
    if flux == basis.anchor_flux && !basis.rotated {
        // eigenstates of the anchor Hamiltonian are orthogonal by construction
        c[(0, 1)] = C64::new(0.0, 0.0);
        c[(1, 0)] = C64::new(0.0, 0.0);
    }
    Ok((c, [r.energies[0], r.energies[1], r.energies[2]]))
}

pub fn two_level_validity_in_basis(
    params: &CircuitParams,
    flux: f64,
    basis: &QubitBasis,
    threshold: f64,
) -> Result<TwoLevelValidity> {
    let (c, e) = doublet_overlaps(params, flux, basis)?;
    let kept: f64 = c.iter().map(|z| z.norm_sqr()).sum();
    let leakage_step = (1.0 - 0.5 * kept).max(0.0);
    Ok(TwoLevelValidity {
        flux,
        gap: e[2] - e[1],
        leakage_step,
        threshold,
        valid: leakage_step < threshold,
    })
}

/// Two-level diagnostics for a sudden step from half flux to `flux`.
pub fn two_level_validity(params: &CircuitParams, flux: f64) -> Result<TwoLevelValidity> {
    let basis = localize_qubit_basis(params, PI)?;
    two_level_validity_in_basis(params, flux, &basis, DEFAULT_LEAKAGE_THRESHOLD)
}

/// Effective two-level Hamiltonian `h₀ I + h·σ/2` at `flux`, expressed in
/// the anchor logical basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TippingAngle {
    pub flux: f64,
    /// Tilt of the precession axis from `z`, folded into `[0, π/2]`.
    pub theta: f64,
    /// In-plane angle of the axis, `atan2(h_y, h_x)` after folding.
    pub azimuth: f64,
    pub h0: f64,
    pub h: [f64; 3],
    pub leakage_step: f64,
    pub valid: bool,
}

/// Builds the effective Hamiltonian from the symmetrically orthonormalized
/// projection of the two lowest eigenstates onto the logical subspace.
pub fn tipping_angle_in_basis(
    params: &CircuitParams,
    flux: f64,
    basis: &QubitBasis,
    threshold: f64,
) -> Result<TippingAngle> {
    let (c, e) = doublet_overlaps(params, flux, basis)?;
    let validity = two_level_validity_in_basis(params, flux, basis, threshold)?;
    let Some(w) = polar_unitary(&c) else {
        return Ok(TippingAngle {
            flux,
            theta: f64::NAN,
            azimuth: f64::NAN,
            h0: f64::NAN,
            h: [f64::NAN; 3],
            leakage_step: validity.leakage_step,
            valid: false,
        });
    };
    let diag = Matrix2::new(
        C64::new(e[0], 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(e[1], 0.0),
    );
    let heff = w * diag * w.adjoint();
    let h0 = 0.5 * (heff[(0, 0)] + heff[(1, 1)]).re;
    let mut h = [
        2.0 * heff[(0, 1)].re,
        -2.0 * heff[(0, 1)].im,
        (heff[(0, 0)] - heff[(1, 1)]).re,
    ];
    if h[2] < 0.0 {
        h = h.map(|x| -x);
    }
    let transverse = h[0].hypot(h[1]);
    Ok(TippingAngle {
        flux,
        theta: transverse.atan2(h[2]),
        azimuth: h[1].atan2(h[0]),
        h0,
        h,
        leakage_step: validity.leakage_step,
        valid: validity.valid,
    })
}

pub fn tipping_analysis(params: &CircuitParams, flux: f64) -> Result<TippingAngle> {
    let basis = localize_qubit_basis(params, PI)?;
    tipping_angle_in_basis(params, flux, &basis, DEFAULT_LEAKAGE_THRESHOLD)
}

/// Tilt `Θ(Φ)` of the sudden-pulse precession axis (radians).
pub fn tipping_angle(params: &CircuitParams, flux: f64) -> Result<f64> {
    tipping_analysis(params, flux).map(|t| t.theta)
}
