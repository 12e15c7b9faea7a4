use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, Matrix2};
use serde::Serialize;

use super::su2::{axis_angle, fidelity_proxy, polar_unitary, QubitMap};
use super::{
    evolve_columns, propagator, two_level_validity_in_basis, PulseSchedule, Segment, SegmentKind,
    DEFAULT_DT, DEFAULT_LEAKAGE_THRESHOLD,
};
use crate::model::CircuitParams;
use crate::spectral::{localize_qubit_basis, QubitBasis};
use crate::{Error, Result, C64};

/// Final leakage above which an adiabatic gate is rejected.
pub const ADIABATIC_LEAKAGE_LIMIT: f64 = 1e-3;
/// Step-halving stops once the logical map moves by less than this.
pub const GATE_DT_TOL: f64 = 1e-4;
const MAX_HALVINGS: usize = 8;

/// Rotation realized on the logical subspace by a flux pulse.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateResult {
    /// Unit rotation axis in the upper hemisphere.
    pub axis: [f64; 3],
    /// Rotation angle in `(−π, π]`.
    pub angle: f64,
    /// Tilt of `axis` from `z`.
    pub tilt: f64,
    pub azimuth: f64,
    /// `|tr(R† M)|²/4` of the logical map `M` against the reported rotation `R`.
    pub fidelity_proxy: f64,
    /// Mean population of the two logical states outside the logical subspace.
    pub leakage_final: f64,
    /// Time step of the accepted evolution; `None` for sudden pulses.
    pub dt: Option<f64>,
    #[serde(skip)]
    pub map: QubitMap,
}

impl GateResult {
    fn from_map(map: QubitMap, dt: Option<f64>) -> Result<Self> {
        let unitary = polar_unitary(&map).ok_or_else(|| Error::NotConverged {
            what: "gate extraction".into(),
            detail: "logical map is singular".into(),
        })?;
        let aa = axis_angle(&unitary);
        let kept: f64 = map.iter().map(|z| z.norm_sqr()).sum();
        Ok(Self {
            axis: aa.axis,
            angle: aa.angle,
            tilt: aa.tilt(),
            azimuth: aa.azimuth(),
            fidelity_proxy: fidelity_proxy(&aa.to_unitary(), &map),
            leakage_final: (1.0 - 0.5 * kept).max(0.0),
            dt,
            map,
        })
    }

    /// Rotation `R` reported by this result.
    pub fn rotation(&self) -> QubitMap {
        super::su2::rotation(self.axis, self.angle)
    }
}

pub(crate) fn basis_columns(basis: &QubitBasis) -> DMatrix<C64> {
    DMatrix::from_columns(&[basis.psi0.clone(), basis.psi1.clone()])
}

/// `M_ij = ⟨ψᵢ|U|ψⱼ⟩` from the evolved columns `U [ψ0 ψ1]`.
pub(crate) fn logical_map(basis: &QubitBasis, evolved: &DMatrix<C64>) -> QubitMap {
    let q = basis_columns(basis);
    let m = q.adjoint() * evolved;
    Matrix2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)])
}

fn check_adiabatic_target(flux_hold: f64) -> Result<()> {
    if !(flux_hold > FRAC_PI_2 && flux_hold < 3.0 * FRAC_PI_2) {
        return Err(Error::invalid(
            "flux_hold",
            format!("must lie in (π/2, 3π/2), got {flux_hold}"),
        ));
    }
    Ok(())
}

fn excursion_schedule(flux_hold: f64, ramp_time: f64, hold_time: f64) -> Result<PulseSchedule> {
    check_adiabatic_target(flux_hold)?;
    if !(ramp_time >= 0.0 && hold_time >= 0.0) || ramp_time + hold_time <= 0.0 {
        return Err(Error::invalid(
            "ramp_time",
            "ramp and hold times must be >= 0 with a positive total",
        ));
    }
    PulseSchedule::excursion(PI, flux_hold, ramp_time, hold_time)
}

/// Logical map of `schedule`, halving the step from `DEFAULT_DT` until two
/// successive maps agree to `tol`.
fn converged_map(
    params: &CircuitParams,
    schedule: &PulseSchedule,
    basis: &QubitBasis,
    tol: f64,
) -> Result<(QubitMap, f64)> {
    let q = basis_columns(basis);
    let mut dt = DEFAULT_DT.min(schedule.shortest_segment());
    let mut coarse = logical_map(basis, &evolve_columns(params, schedule, &q, dt)?);
    let mut change = f64::INFINITY;
    for _ in 0..MAX_HALVINGS {
        dt *= 0.5;
        let fine = logical_map(basis, &evolve_columns(params, schedule, &q, dt)?);
        change = (fine - coarse).norm();
        if change < tol {
            return Ok((fine, dt));
        }
        coarse = fine;
    }
    Err(Error::NotConverged {
        what: "time step".into(),
        detail: format!("logical map still moves by {change:.3e} at dt = {dt:.3e} µs"),
    })
}

/// Ramp `π → flux_hold`, hold, ramp back at a fixed step, without the
/// leakage check.
pub fn simulate_adiabatic_z(
    params: &CircuitParams,
    flux_hold: f64,
    ramp_time: f64,
    hold_time: f64,
    dt: f64,
) -> Result<GateResult> {
    let schedule = excursion_schedule(flux_hold, ramp_time, hold_time)?;
    let basis = localize_qubit_basis(params, PI)?;
    let dt = dt.min(schedule.shortest_segment());
    let evolved = evolve_columns(params, &schedule, &basis_columns(&basis), dt)?;
    GateResult::from_map(logical_map(&basis, &evolved), Some(dt))
}

/// Slow excursion to `flux_hold` with the step refined until the map is
/// stable to [`GATE_DT_TOL`]. The angle includes the dynamical phase of both
/// ramps. Fails when more than `1e-3` of the population leaks.
pub fn adiabatic_z_gate(
    params: &CircuitParams,
    flux_hold: f64,
    ramp_time: f64,
    hold_time: f64,
) -> Result<GateResult> {
    let schedule = excursion_schedule(flux_hold, ramp_time, hold_time)?;
    let basis = localize_qubit_basis(params, PI)?;
    let (map, dt) = if schedule
        .segments()
        .iter()
        .all(|s| s.kind == SegmentKind::Hold)
    {
        let u = propagator(params, flux_hold, schedule.total_duration())?;
        (logical_map(&basis, &(u * basis_columns(&basis))), None)
    } else {
        let (map, dt) = converged_map(params, &schedule, &basis, GATE_DT_TOL)?;
        (map, Some(dt))
    };
    let gate = GateResult::from_map(map, dt)?;
    if gate.leakage_final > ADIABATIC_LEAKAGE_LIMIT {
        return Err(Error::AdiabaticityViolation {
            leakage: gate.leakage_final,
            threshold: ADIABATIC_LEAKAGE_LIMIT,
        });
    }
    Ok(gate)
}

fn check_two_level(params: &CircuitParams, basis: &QubitBasis, flux: f64) -> Result<()> {
    let v = two_level_validity_in_basis(params, flux, basis, DEFAULT_LEAKAGE_THRESHOLD)?;
    if !v.valid {
        return Err(Error::TwoLevelBreakdown {
            flux,
            leakage: v.leakage_step,
            threshold: v.threshold,
        });
    }
    Ok(())
}

/// Sudden pulses `(flux, duration)` applied back to back from half flux.
///
/// The full charge-basis state is carried between pulses, so population
/// that leaves the logical subspace in one pulse can return in a later one.
pub fn diabatic_sequence(params: &CircuitParams, pulses: &[(f64, f64)]) -> Result<GateResult> {
    if pulses.is_empty() {
        return Err(Error::invalid("pulses", "sequence is empty"));
    }
    let basis = localize_qubit_basis(params, PI)?;
    let mut evolved = basis_columns(&basis);
    for (i, &(flux, tau)) in pulses.iter().enumerate() {
        if !(tau.is_finite() && tau >= 0.0) {
            return Err(Error::invalid(
                format!("pulses[{i}]"),
                "duration must be >= 0",
            ));
        }
        check_two_level(params, &basis, flux)?;
        evolved = propagator(params, flux, tau)? * evolved;
    }
    GateResult::from_map(logical_map(&basis, &evolved), None)
}

/// Sudden step to `flux_hold`, free evolution for `hold_time`, sudden step back.
pub fn diabatic_gate(params: &CircuitParams, flux_hold: f64, hold_time: f64) -> Result<GateResult> {
    diabatic_sequence(params, &[(flux_hold, hold_time)])
}

/// Diabatic gate with linear rises of `rise_time` instead of sudden steps.
pub fn diabatic_gate_finite_rise(
    params: &CircuitParams,
    flux_hold: f64,
    hold_time: f64,
    rise_time: f64,
) -> Result<GateResult> {
    let basis = localize_qubit_basis(params, PI)?;
    check_two_level(params, &basis, flux_hold)?;
    let schedule = PulseSchedule::new(vec![
        Segment::ramp(PI, flux_hold, rise_time),
        Segment::hold(flux_hold, hold_time),
        Segment::ramp(flux_hold, PI, rise_time),
    ])?;
    let (map, dt) = converged_map(params, &schedule, &basis, GATE_DT_TOL)?;
    GateResult::from_map(map, Some(dt))
}
