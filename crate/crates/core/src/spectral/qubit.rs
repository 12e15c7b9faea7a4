use nalgebra::{DVector, Matrix2};
use serde::Serialize;

use super::solve;
use crate::model::{build_hamiltonian, effective_junction, sin_phi_operator, CircuitParams};
use crate::{Error, Result, C64};

/// Minimum separation between the doublet and the third level.
pub const BASIS_GAP_FLOOR: f64 = 1e-6;
/// Doublet splitting below which the eigenbasis is treated as degenerate.
pub const DEGENERATE_SPLITTING: f64 = 1e-9;

/// `E₁ − E₀` (MHz).
pub fn qubit_splitting(params: &CircuitParams, flux: f64) -> Result<f64> {
    let r = solve(params, flux, 2)?;
    Ok((r.energies[1] - r.energies[0]).max(0.0))
}

/// First-order estimate of the doublet splitting from a harmonic expansion
/// around the two wells: `|2 E_J1 sin φ₀ exp(−√(E_C / 8|E_J2|))|`.
pub fn splitting_approx(params: &CircuitParams, flux: f64) -> Result<f64> {
    params.validate()?;
    let ej = effective_junction(params, flux);
    if ej.ej2 == 0.0 {
        return Err(Error::SplittingFormulaInvalid { flux });
    }
    let tunnel = (-(params.ec / (8.0 * ej.ej2.abs())).sqrt()).exp();
    Ok((2.0 * ej.ej1 * ej.phi0.sin() * tunnel).abs())
}

/// Which well of the double-well potential a state occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WellLabel {
    /// `⟨sin φ̂⟩ > 0`, the minimum near `φ = +π/2`.
    Plus,
    /// `⟨sin φ̂⟩ < 0`, the minimum near `φ = −π/2`.
    Minus,
    /// No measurable well polarization.
    Delocalized,
}

impl WellLabel {
    fn from_sin(s: f64) -> Self {
        if s > 1e-9 {
            WellLabel::Plus
        } else if s < -1e-9 {
            WellLabel::Minus
        } else {
            WellLabel::Delocalized
        }
    }
}

/// Phase-fixed logical states at an anchor flux.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitBasis {
    pub psi0: DVector<C64>,
    pub psi1: DVector<C64>,
    pub anchor_flux: f64,
    /// `⟨ψᵢ|H|ψᵢ⟩` at the anchor.
    pub energies: [f64; 2],
    pub sin_phi: [f64; 2],
    pub well_labels: [WellLabel; 2],
    /// Gap from the upper logical state to the third level.
    pub gap_to_excited: f64,
    /// The states were rotated inside a degenerate or unpolarized doublet.
    pub rotated: bool,
}

impl QubitBasis {
    pub fn states(&self) -> [&DVector<C64>; 2] {
        [&self.psi0, &self.psi1]
    }

    pub fn splitting(&self) -> f64 {
        self.energies[1] - self.energies[0]
    }
}

/// Multiplies `v` by the phase that makes its largest entry real and positive.
///
/// Entries within a relative `1e-10` of the maximum count as ties, and the
/// lowest index among them wins, so applying the rule twice is a no-op.
pub fn fix_phase(v: &DVector<C64>) -> DVector<C64> {
    let max = v.iter().fold(0.0_f64, |a, z| a.max(z.norm()));
    if max == 0.0 {
        return v.clone();
    }
    let pivot = v
        .iter()
        .find(|z| z.norm() >= max * (1.0 - 1e-10))
        .copied()
        .unwrap_or(C64::new(1.0, 0.0));
    let mut out = v * (pivot.conj() / pivot.norm());
    // the pivot itself must be exactly real
    let idx = v
        .iter()
        .position(|z| z.norm() >= max * (1.0 - 1e-10))
        .unwrap_or(0);
    out[idx] = C64::new(out[idx].norm(), 0.0);
    out
}

/// Lowest two eigenstates at `anchor_flux`, gauge-fixed and labelled by well.
///
/// When the doublet is degenerate or its eigenstates carry no well
/// polarization, the pair is rotated to the eigenvectors of `sin φ̂`
/// restricted to the doublet, i.e. the most strongly localized pair.
pub fn localize_qubit_basis(params: &CircuitParams, anchor_flux: f64) -> Result<QubitBasis> {
    let r = solve(params, anchor_flux, 3)?;
    let gap = r.energies[2] - r.energies[1];
    if gap <= BASIS_GAP_FLOOR {
        return Err(Error::BasisIllDefined {
            flux: anchor_flux,
            gap,
        });
    }
    let sin = sin_phi_operator(params.n_cut);
    let (v0, v1) = (r.state(0), r.state(1));
    let block = Matrix2::new(
        sin.expectation(&v0),
        v0.dotc(&(sin.matrix() * &v1)).norm(),
        0.0,
        sin.expectation(&v1),
    );
    let polarization = (block[(0, 0)] - block[(1, 1)]).abs();
    let spread = ((block[(0, 0)] - block[(1, 1)]).powi(2) + 4.0 * block[(0, 1)].powi(2)).sqrt();
    let splitting = r.energies[1] - r.energies[0];
    let rotate = splitting < DEGENERATE_SPLITTING || polarization < 1e-6 * spread;

    let (psi0, psi1) = if rotate {
        rotate_to_wells(params, anchor_flux, &v0, &v1)
    } else {
        (fix_phase(&v0), fix_phase(&v1))
    };
    let h = build_hamiltonian(params, anchor_flux);
    let s = [sin.expectation(&psi0), sin.expectation(&psi1)];
    Ok(QubitBasis {
        energies: [h.expectation(&psi0), h.expectation(&psi1)],
        sin_phi: s,
        well_labels: [WellLabel::from_sin(s[0]), WellLabel::from_sin(s[1])],
        psi0,
        psi1,
        anchor_flux,
        gap_to_excited: gap,
        rotated: rotate,
    })
}

fn rotate_to_wells(
    params: &CircuitParams,
    flux: f64,
    v0: &DVector<C64>,
    v1: &DVector<C64>,
) -> (DVector<C64>, DVector<C64>) {
    let sin = sin_phi_operator(params.n_cut);
    let s01 = v0.dotc(&(sin.matrix() * v1));
    let block = nalgebra::Matrix2::new(
        C64::new(sin.expectation(v0), 0.0),
        s01,
        s01.conj(),
        C64::new(sin.expectation(v1), 0.0),
    );
    let eig = block.symmetric_eigen();
    let mut pair: Vec<(f64, DVector<C64>)> = (0..2)
        .map(|i| {
            let c = eig.eigenvectors.column(i);
            (eig.eigenvalues[i], fix_phase(&(v0 * c[0] + v1 * c[1])))
        })
        .collect();
    let h = build_hamiltonian(params, flux);
    let scale = params.ec;
    pair.sort_by(|a, b| {
        let (ea, eb) = (h.expectation(&a.1), h.expectation(&b.1));
        if (ea - eb).abs() > 1e-9 * scale {
            ea.total_cmp(&eb)
        } else {
            b.0.total_cmp(&a.0)
        }
    });
    let second = pair.pop().map(|p| p.1).unwrap_or_default();
    let first = pair.pop().map(|p| p.1).unwrap_or_default();
    (first, second)
}
