use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::PulseSchedule;
use crate::model::{build_hamiltonian, CircuitParams};
use crate::spectral::{evolution_operator, localize_qubit_basis, QubitBasis};
use crate::{Error, Result, C64};

/// Default time step (µs).
pub const DEFAULT_DT: f64 = 1e-4;
/// Bound on `|‖ψ‖ − 1|` at every step.
pub const NORM_TOL: f64 = 1e-9;

/// Propagated states with their projections onto the logical basis.
#[derive(Debug, Clone, Serialize)]
pub struct StateTrajectory {
    /// Sample times (µs), starting at 0.
    pub times: Vec<f64>,
    pub flux: Vec<f64>,
    #[serde(skip)]
    pub states: Vec<DVector<C64>>,
    /// `(x, y, z)` of the projected state; length `1 −` leakage at most.
    pub bloch: Vec<[f64; 3]>,
    /// `1 − |⟨ψ0|ψ⟩|² − |⟨ψ1|ψ⟩|²`.
    pub leakage: Vec<f64>,
    /// Step actually used; segments are split into equal steps no longer than the request.
    pub dt: f64,
}

impl StateTrajectory {
    pub fn final_state(&self) -> &DVector<C64> {
        &self.states[self.states.len() - 1]
    }

    /// `|⟨target|ψ(t)⟩|²` along the trajectory.
    pub fn overlap_probability(&self, target: &DVector<C64>) -> Vec<f64> {
        self.states
            .iter()
            .map(|psi| target.dotc(psi).norm_sqr())
            .collect()
    }
}

/// Bloch vector and leakage of `psi` in the basis `{ψ0 ↦ +z, ψ1 ↦ −z}`.
pub fn bloch_projection(basis: &QubitBasis, psi: &DVector<C64>) -> ([f64; 3], f64) {
    let a = basis.psi0.dotc(psi);
    let b = basis.psi1.dotc(psi);
    let coherence = a.conj() * b;
    let leakage = psi.norm_squared() - a.norm_sqr() - b.norm_sqr();
    (
        [
            2.0 * coherence.re,
            2.0 * coherence.im,
            a.norm_sqr() - b.norm_sqr(),
        ],
        leakage,
    )
}

/// `exp(−2πi H(flux) τ)`.
pub fn propagator(params: &CircuitParams, flux: f64, tau: f64) -> Result<DMatrix<C64>> {
    let h = build_hamiltonian(params, flux);
    evolution_operator(h.matrix(), tau).ok_or_else(|| Error::EigenSolve {
        context: format!("propagator at flux {flux}"),
    })
}

struct Step {
    t_end: f64,
    flux_mid: f64,
    h: f64,
    flux_end: f64,
}

fn steps(schedule: &PulseSchedule, dt: f64) -> Result<Vec<Step>> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::invalid("dt", format!("must be > 0, got {dt}")));
    }
    if dt > schedule.shortest_segment() {
        return Err(Error::invalid(
            "dt",
            format!(
                "step {dt} µs exceeds the shortest segment ({} µs)",
                schedule.shortest_segment()
            ),
        ));
    }
    let mut out = Vec::new();
    let mut start = 0.0;
    for seg in schedule.segments() {
        let n = (seg.duration / dt - 1e-9).ceil().max(1.0) as usize;
        let h = seg.duration / n as f64;
        for i in 0..n {
            out.push(Step {
                t_end: start + h * (i + 1) as f64,
                flux_mid: seg.flux_at(h * (i as f64 + 0.5)),
                h,
                flux_end: seg.flux_at(h * (i + 1) as f64),
            });
        }
        start += seg.duration;
    }
    Ok(out)
}

/// Walks the schedule step by step, calling `visit` after each step.
fn run<F>(
    params: &CircuitParams,
    schedule: &PulseSchedule,
    mut columns: DMatrix<C64>,
    dt: f64,
    mut visit: F,
) -> Result<DMatrix<C64>>
where
    F: FnMut(&Step, &DMatrix<C64>),
{
    params.validate()?;
    let mut cached: Option<((u64, u64), DMatrix<C64>)> = None;
    for step in steps(schedule, dt)? {
        let key = (step.flux_mid.to_bits(), step.h.to_bits());
        let u = match &cached {
            Some((k, u)) if *k == key => u,
            _ => {
                cached = Some((key, propagator(params, step.flux_mid, step.h)?));
                &cached.as_ref().expect("just set").1
            }
        };
        columns = u * columns;
        for col in columns.column_iter() {
            let deviation = (col.norm() - 1.0).abs();
            if deviation >= NORM_TOL {
                return Err(Error::NormDrift {
                    time: step.t_end,
                    deviation,
                });
            }
        }
        visit(&step, &columns);
    }
    Ok(columns)
}

fn check_normalized(name: &str, psi: &DVector<C64>) -> Result<()> {
    let deviation = (psi.norm() - 1.0).abs();
    if deviation >= NORM_TOL {
        return Err(Error::invalid(
            name,
            format!("state norm deviates from 1 by {deviation:.3e}"),
        ));
    }
    Ok(())
}

/// Midpoint-flux exponential propagation with Bloch projection onto the
/// logical basis at half flux.
pub fn propagate(
    params: &CircuitParams,
    schedule: &PulseSchedule,
    psi_init: &DVector<C64>,
    dt: f64,
) -> Result<StateTrajectory> {
    let basis = localize_qubit_basis(params, PI)?;
    propagate_in_basis(params, schedule, psi_init, dt, &basis)
}

pub fn propagate_in_basis(
    params: &CircuitParams,
    schedule: &PulseSchedule,
    psi_init: &DVector<C64>,
    dt: f64,
    basis: &QubitBasis,
) -> Result<StateTrajectory> {
    if psi_init.len() != params.dim() {
        return Err(Error::invalid(
            "psi_init",
            format!(
                "length {} does not match dimension {}",
                psi_init.len(),
                params.dim()
            ),
        ));
    }
    check_normalized("psi_init", psi_init)?;
    let flux0 = schedule.flux_at(0.0)?;
    let (b0, l0) = bloch_projection(basis, psi_init);
    let mut traj = StateTrajectory {
        times: vec![0.0],
        flux: vec![flux0],
        states: vec![psi_init.clone()],
        bloch: vec![b0],
        leakage: vec![l0],
        dt,
    };
    let mut used = 0.0_f64;
    let start = DMatrix::from_column_slice(psi_init.len(), 1, psi_init.as_slice());
    run(params, schedule, start, dt, |step, cols| {
        let psi = cols.column(0).into_owned();
        let (b, l) = bloch_projection(basis, &psi);
        used = used.max(step.h);
        traj.times.push(step.t_end);
        traj.flux.push(step.flux_end);
        traj.states.push(psi);
        traj.bloch.push(b);
        traj.leakage.push(l);
    })?;
    traj.dt = used;
    Ok(traj)
}

/// Evolves every column of `columns` through the schedule and returns the
/// final columns.
pub fn evolve_columns(
    params: &CircuitParams,
    schedule: &PulseSchedule,
    columns: &DMatrix<C64>,
    dt: f64,
) -> Result<DMatrix<C64>> {
    if columns.nrows() != params.dim() {
        return Err(Error::invalid(
            "columns",
            "row count does not match the basis dimension",
        ));
    }
    for (i, c) in columns.column_iter().enumerate() {
        check_normalized(&format!("columns[{i}]"), &c.into_owned())?;
    }
    run(params, schedule, columns.clone(), dt, |_, _| {})
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepConvergence {
    pub dt: f64,
    pub halvings: usize,
    /// `‖ψ_dt(T) − ψ_{dt/2}(T)‖` for the accepted step.
    pub final_difference: f64,
}

/// Halves `dt` until the final state moves by less than `tol` under a
/// further halving; returns the finer trajectory.
pub fn propagate_converged(
    params: &CircuitParams,
    schedule: &PulseSchedule,
    psi_init: &DVector<C64>,
    dt: f64,
    tol: f64,
) -> Result<(StateTrajectory, StepConvergence)> {
    const MAX_HALVINGS: usize = 10;
    let basis = localize_qubit_basis(params, PI)?;
    let dt = dt.min(schedule.shortest_segment());
    let mut coarse = propagate_in_basis(params, schedule, psi_init, dt, &basis)?;
    for halvings in 1..=MAX_HALVINGS {
        let step = dt / f64::powi(2.0, halvings as i32);
        let fine = propagate_in_basis(params, schedule, psi_init, step, &basis)?;
        let diff = (fine.final_state() - coarse.final_state()).norm();
        if diff < tol {
            return Ok((
                fine,
                StepConvergence {
                    dt: step,
                    halvings,
                    final_difference: diff,
                },
            ));
        }
        coarse = fine;
    }
    Err(Error::NotConverged {
        what: "time step".into(),
        detail: format!("final state still moves by more than {tol} after {MAX_HALVINGS} halvings"),
    })
}
