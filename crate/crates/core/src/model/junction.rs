use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::CircuitParams;
use crate::C64;

/// Effective single-mode junction parameters at one flux value.
///
/// Each harmonic is described by a complex amplitude,
/// `A₁ = E_J1,Σ (cos Φ/2 + i d₁ sin Φ/2)` and `A₂ = E_J2,Σ (cos Φ + i d₂ sin Φ)`,
/// decomposed as `A = E·e^{iφ}` with a signed real `E` and `φ ∈ [−π/2, π/2]`.
/// The amplitude `E` therefore carries the sign of `Re A`, so `E_J2(π) < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveJunction {
    pub flux: f64,
    pub ej1: f64,
    pub ej2: f64,
    pub phi1: f64,
    pub phi2: f64,
    /// Relative phase `φ₁ − φ₂/2` left after shifting the pair term to `cos 2φ̂`.
    pub phi0: f64,
}

impl EffectiveJunction {
    pub fn amplitude1(&self) -> C64 {
        C64::from_polar(1.0, self.phi1) * self.ej1
    }

    pub fn amplitude2(&self) -> C64 {
        C64::from_polar(1.0, self.phi2) * self.ej2
    }
}

/// Flux derivatives of the effective parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JunctionDerivative {
    pub dej1: f64,
    pub dej2: f64,
    pub dphi1: f64,
    pub dphi2: f64,
    pub dphi0: f64,
}

/// `(sin πt, cos πt)`, exact at every multiple of `t = 1/2`.
pub fn sincos_pi(t: f64) -> (f64, f64) {
    let r = t.rem_euclid(2.0);
    let q = (2.0 * r).round();
    let (s, c) = (PI * (r - 0.5 * q)).sin_cos();
    match q as u8 {
        1 => (c, -s),
        2 => (-s, -c),
        3 => (-c, s),
        _ => (s, c),
    }
}

/// Complex amplitudes `(A₁, A₂)` at flux `flux` (radians).
fn amplitudes(params: &CircuitParams, flux: f64) -> (C64, C64) {
    let turns = flux / PI;
    let (s1, c1) = sincos_pi(0.5 * turns);
    let (s2, c2) = sincos_pi(turns);
    (
        C64::new(c1, params.d1 * s1) * params.ej1_sum,
        C64::new(c2, params.d2 * s2) * params.ej2_sum,
    )
}

fn amplitude_derivatives(params: &CircuitParams, flux: f64) -> (C64, C64) {
    let turns = flux / PI;
    let (s1, c1) = sincos_pi(0.5 * turns);
    let (s2, c2) = sincos_pi(turns);
    (
        C64::new(-0.5 * s1, 0.5 * params.d1 * c1) * params.ej1_sum,
        C64::new(-s2, params.d2 * c2) * params.ej2_sum,
    )
}

/// Signed-magnitude decomposition with the phase folded into `[−π/2, π/2]`.
fn signed_polar(a: C64) -> (f64, f64) {
    if a.re > 0.0 {
        (a.norm(), a.im.atan2(a.re))
    } else if a.re < 0.0 {
        (-a.norm(), (-a.im).atan2(-a.re))
    } else if a.im == 0.0 {
        (0.0, 0.0)
    } else {
        (a.im.abs(), FRAC_PI_2.copysign(a.im))
    }
}

pub fn effective_junction(params: &CircuitParams, flux: f64) -> EffectiveJunction {
    let (a1, a2) = amplitudes(params, flux);
    let (ej1, phi1) = signed_polar(a1);
    let (ej2, phi2) = signed_polar(a2);
    EffectiveJunction {
        flux,
        ej1,
        ej2,
        phi1,
        phi2,
        phi0: phi1 - 0.5 * phi2,
    }
}

/// Analytic flux derivatives, consistent with [`effective_junction`] on each
/// open interval where the phase branch does not switch.
pub fn effective_junction_derivative(params: &CircuitParams, flux: f64) -> JunctionDerivative {
    let ej = effective_junction(params, flux);
    let (da1, da2) = amplitude_derivatives(params, flux);
    let turns = flux / PI;
    let (s1, c1) = sincos_pi(0.5 * turns);
    let (s2, c2) = sincos_pi(turns);
    // arg'(A) = Im(A' conj A)/|A|², which reduces to these closed forms.
    let phase_rate = |scale: f64, d: f64, c: f64, s: f64| {
        if d == 0.0 {
            0.0
        } else {
            scale * d / (c * c + d * d * s * s)
        }
    };
    let dphi1 = if params.ej1_sum == 0.0 {
        0.0
    } else {
        phase_rate(0.5, params.d1, c1, s1)
    };
    let dphi2 = if params.ej2_sum == 0.0 {
        0.0
    } else {
        phase_rate(1.0, params.d2, c2, s2)
    };
    JunctionDerivative {
        dej1: (da1 * C64::from_polar(1.0, -ej.phi1)).re,
        dej2: (da2 * C64::from_polar(1.0, -ej.phi2)).re,
        dphi1,
        dphi2,
        dphi0: dphi1 - 0.5 * dphi2,
    }
}

/// Effective parameters along a flux grid with both phases on the
/// continuous branch.
///
/// The branch is chosen analytically, `arctan(d tan x)` plus `sgn(d)·π` per
/// pole of `tan x` crossed, so the result does not depend on the grid
/// spacing. Shifting a phase by `π` flips the sign of its amplitude, keeping
/// `E·e^{iφ} = A`. Phases are offset so the first point matches
/// [`effective_junction`].
pub fn effective_junction_path(params: &CircuitParams, fluxes: &[f64]) -> Vec<EffectiveJunction> {
    let mut offsets: Option<(f64, f64)> = None;
    fluxes
        .iter()
        .map(|&flux| {
            let mut ej = effective_junction(params, flux);
            let c1 = continuous_phase(params.ej1_sum, params.d1, 0.5 * flux);
            let c2 = continuous_phase(params.ej2_sum, params.d2, flux);
            let (o1, o2) = *offsets.get_or_insert((ej.phi1 - c1, ej.phi2 - c2));
            (ej.ej1, ej.phi1) = onto_branch(ej.ej1, ej.phi1, c1 + o1);
            (ej.ej2, ej.phi2) = onto_branch(ej.ej2, ej.phi2, c2 + o2);
            ej.phi0 = ej.phi1 - 0.5 * ej.phi2;
            ej
        })
        .collect()
}

fn continuous_phase(sum: f64, d: f64, x: f64) -> f64 {
    if sum == 0.0 || d == 0.0 {
        return 0.0;
    }
    let turns = (x / PI + 0.5).floor();
    (d * (x - turns * PI).tan()).atan() + d.signum() * PI * turns
}

fn onto_branch(amp: f64, phase: f64, target: f64) -> (f64, f64) {
    let turns = ((target - phase) / PI).round();
    if turns == 0.0 {
        (amp, phase)
    } else {
        let sign = if (turns as i64) % 2 == 0 { 1.0 } else { -1.0 };
        (sign * amp, phase + turns * PI)
    }
}
