use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::DVector;
use serde_json::{json, Value};

use super::config::{pulse_schedule, AxisConfig, InitialState, Job, LoopMethodConfig, RunConfig};
use super::output::Table;
use crate::dynamics::{
    propagate_converged, propagate_in_basis, tipping_angle_in_basis, DEFAULT_DT,
    DEFAULT_LEAKAGE_THRESHOLD,
};
use crate::holonomy::{
    curvature_grid, loop_phase_curvature_with, loop_phase_wilson, CurvatureIntegration,
};
use crate::model::{phase_wavefunction, potential_energy, CircuitParams};
use crate::spectral::{
    charge_sweep, convergence_check, flux_sweep, linspace, localize_qubit_basis, qubit_splitting,
    splitting_approx, QubitBasis,
};
use crate::{Result, C64};

/// Payload tables plus numeric metadata of one job.
#[derive(Debug, Clone, PartialEq)]
pub struct JobOutput {
    pub tables: Vec<Table>,
    pub meta: BTreeMap<String, Value>,
}

fn levels_columns(first: &str, levels: usize) -> Vec<String> {
    std::iter::once(first.to_string())
        .chain((0..levels).map(|i| format!("E{i}_MHz")))
        .collect()
}

pub fn initial_state(basis: &QubitBasis, which: InitialState) -> DVector<C64> {
    let (a, b) = (&basis.psi0, &basis.psi1);
    let s = FRAC_1_SQRT_2;
    let i = C64::new(0.0, 1.0);
    match which {
        InitialState::Psi0 => a.clone(),
        InitialState::Psi1 => b.clone(),
        InitialState::Plus => (a + b).scale(s),
        InitialState::Minus => (a - b).scale(s),
        InitialState::PlusY => (a + b * i).scale(s),
        InitialState::MinusY => (a - b * i).scale(s),
    }
}

/// Runs the job of `cfg` after validation.
pub fn execute(cfg: &RunConfig) -> Result<JobOutput> {
    cfg.validate()?;
    let params = cfg.params()?;
    let mut meta = BTreeMap::new();
    meta.insert("n_cut".to_string(), json!(params.n_cut));
    meta.insert("seed".to_string(), json!(cfg.seed));
    let tables = match &cfg.job {
        Job::SpectrumSweep {
            axis,
            start,
            end,
            points,
            levels,
            flux_pi,
            wavefunction_points,
        } => spectrum_sweep(
            &params,
            *axis,
            linspace(*start, *end, *points),
            *levels,
            *flux_pi,
            *wavefunction_points,
        )?,
        Job::Splitting {
            flux_start_pi,
            flux_end_pi,
            points,
            ej1_sum_values,
            approximation,
        } => {
            let grid = linspace(flux_start_pi * PI, flux_end_pi * PI, *points);
            let values = if ej1_sum_values.is_empty() {
                vec![params.ej1_sum]
            } else {
                ej1_sum_values.clone()
            };
            meta.insert("ej1_sum_values_MHz".into(), json!(values));
            values
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    let name = if ej1_sum_values.is_empty() {
                        "splitting".to_string()
                    } else {
                        format!("ej1_{i}")
                    };
                    splitting_table(&params.with_ej1_sum(v), &grid, *approximation, name)
                })
                .collect::<Result<Vec<_>>>()?
        }
        Job::Pulse {
            segments,
            initial,
            dt_us,
            tol,
        } => {
            let schedule = pulse_schedule(&params, segments)?;
            let basis = localize_qubit_basis(&params, PI)?;
            let psi = initial_state(&basis, *initial);
            let dt = dt_us.unwrap_or(DEFAULT_DT);
            let traj = match tol {
                Some(tol) => {
                    let (traj, conv) = propagate_converged(&params, &schedule, &psi, dt, *tol)?;
                    meta.insert("halvings".into(), json!(conv.halvings));
                    meta.insert("final_difference".into(), json!(conv.final_difference));
                    traj
                }
                None => propagate_in_basis(&params, &schedule, &psi, dt, &basis)?,
            };
            meta.insert("dt_us".into(), json!(traj.dt));
            meta.insert(
                "splitting_at_half_flux_MHz".into(),
                json!(basis.splitting()),
            );
            let p_col = format!("P_{}", initial.label());
            let mut table = Table::new(
                "trajectory",
                [
                    "time_us", "flux_rad", "bloch_x", "bloch_y", "bloch_z", "leakage", &p_col,
                ]
                .map(String::from)
                .to_vec(),
            );
            let overlap = traj.overlap_probability(&psi);
            for (i, &o) in overlap.iter().enumerate() {
                let b = traj.bloch[i];
                table.push(vec![
                    traj.times[i],
                    traj.flux[i],
                    b[0],
                    b[1],
                    b[2],
                    traj.leakage[i],
                    o,
                ]);
            }
            vec![table]
        }
        Job::TippingScan {
            flux_start_pi,
            flux_end_pi,
            points,
            threshold,
        } => {
            let threshold = threshold.unwrap_or(DEFAULT_LEAKAGE_THRESHOLD);
            meta.insert("leakage_threshold".into(), json!(threshold));
            let basis = localize_qubit_basis(&params, PI)?;
            let mut table = Table::new(
                "tipping",
                [
                    "flux_rad",
                    "theta_rad",
                    "azimuth_rad",
                    "h0_MHz",
                    "hx_MHz",
                    "hy_MHz",
                    "hz_MHz",
                    "leakage_step",
                    "valid",
                ]
                .map(String::from)
                .to_vec(),
            );
            for flux in linspace(flux_start_pi * PI, flux_end_pi * PI, *points) {
                let t = tipping_angle_in_basis(&params, flux, &basis, threshold)?;
                table.push(vec![
                    flux,
                    t.theta,
                    t.azimuth,
                    t.h0,
                    t.h[0],
                    t.h[1],
                    t.h[2],
                    t.leakage_step,
                    if t.valid { 1.0 } else { 0.0 },
                ]);
            }
            vec![table]
        }
        Job::BerryGrid {
            region,
            levels,
            resolution,
        } => {
            let rect = region.to_rectangle()?;
            let (k, l) = (levels[0], levels[1]);
            let grid = curvature_grid(&params, &rect, (k, l), (resolution[0], resolution[1]))?;
            meta.insert("gap_floor_MHz".into(), json!(grid.gap_floor));
            meta.insert("flagged_points".into(), json!(grid.flagged.len()));
            if let Some(peak) = &grid.peak {
                meta.insert("peak_flux_rad".into(), json!(peak.flux));
                meta.insert("peak_ng".into(), json!(peak.ng));
                meta.insert("peak_value".into(), json!(peak.value));
                meta.insert("peak_fwhm_flux_rad".into(), json!(peak.fwhm_flux));
                meta.insert("peak_fwhm_ng".into(), json!(peak.fwhm_ng));
            }
            let mut table = Table::new(
                "curvature",
                vec!["flux_rad".into(), "ng".into(), format!("B{k}{l}")],
            );
            for (i, &flux) in grid.flux_axis.iter().enumerate() {
                for (j, &ng) in grid.ng_axis.iter().enumerate() {
                    table.push(vec![flux, ng, grid.get(i, j)]);
                }
            }
            vec![table]
        }
        Job::BerryLoop {
            level,
            method,
            interior_resolution,
            n_steps,
            l_max,
            ej1_sum_values,
            ..
        } => {
            let path = cfg.loop_path()?;
            meta.insert("signed_area".into(), json!(path.signed_area()));
            let opts = CurvatureIntegration {
                interior_resolution: *interior_resolution,
                l_max: *l_max,
                ..CurvatureIntegration::default()
            };
            let values = if ej1_sum_values.is_empty() {
                vec![params.ej1_sum]
            } else {
                ej1_sum_values.clone()
            };
            let k = *level;
            let mut columns = vec![
                "ej1_sum_MHz".to_string(),
                "omega_curvature_rad".to_string(),
                "omega_wilson_rad".to_string(),
                "min_gap_MHz".to_string(),
                "truncation_estimate_rad".to_string(),
                "quadrature_points".to_string(),
            ];
            columns.extend(
                (0..=*l_max)
                    .filter(|&l| l != k)
                    .map(|l| format!("Omega_{k}_{l}_rad")),
            );
            let mut table = Table::new("loop_phase", columns);
            for v in values {
                let p = params.with_ej1_sum(v);
                let mut row = vec![v];
                let mut per_level = vec![f64::NAN; *l_max];
                let (mut total, mut wilson) = (f64::NAN, f64::NAN);
                let (mut gap, mut trunc, mut points) = (f64::NAN, f64::NAN, f64::NAN);
                if matches!(method, LoopMethodConfig::Curvature | LoopMethodConfig::Both) {
                    let r = loop_phase_curvature_with(&p, &path, k, &opts)?;
                    total = r.omega_total;
                    gap = r.min_gap_on_path;
                    trunc = r.truncation_estimate.unwrap_or(f64::NAN);
                    points = r.resolution as f64;
                    per_level = r.omega_by_level.iter().map(|x| x.omega).collect();
                }
                if matches!(method, LoopMethodConfig::Wilson | LoopMethodConfig::Both) {
                    let r = loop_phase_wilson(&p, &path, k, *n_steps)?;
                    wilson = r.omega_total;
                    gap = r.min_gap_on_path;
                }
                row.extend([total, wilson, gap, trunc, points]);
                row.extend(per_level);
                table.push(row);
            }
            vec![table]
        }
        Job::Convergence { flux_pi, tol } => {
            let report = convergence_check(&params, flux_pi * PI, *tol)?;
            meta.insert("n_cut_converged".into(), json!(report.n_cut));
            meta.insert(
                "max_relative_change".into(),
                json!(report.max_relative_change),
            );
            let mut table = Table::new(
                "convergence",
                vec!["n_cut".into(), "max_relative_change".into()],
            );
            for (n, change) in &report.history {
                table.push(vec![*n as f64, *change]);
            }
            vec![table]
        }
    };
    Ok(JobOutput { tables, meta })
}

fn spectrum_sweep(
    params: &CircuitParams,
    axis: AxisConfig,
    grid: Vec<f64>,
    levels: usize,
    flux_pi: f64,
    wavefunction_points: Option<usize>,
) -> Result<Vec<Table>> {
    let (sweep, first) = match axis {
        AxisConfig::Flux => {
            let grid: Vec<f64> = grid.iter().map(|f| f * PI).collect();
            (flux_sweep(params, &grid, levels)?, "flux_rad")
        }
        AxisConfig::Ng => (charge_sweep(params, flux_pi * PI, &grid, levels)?, "ng"),
    };
    let mut table = Table::new("spectrum", levels_columns(first, levels));
    let absolute: Vec<Vec<f64>> = (0..levels).map(|l| sweep.absolute_level(l)).collect();
    for (i, &x) in sweep.grid.iter().enumerate() {
        let mut row = vec![x];
        row.extend(absolute.iter().map(|col| col[i]));
        table.push(row);
    }
    let mut tables = vec![table];
    if let Some(n_phi) = wavefunction_points {
        let mut columns = vec![first.to_string(), "phi_rad".into(), "V_MHz".into()];
        columns.extend((0..levels).map(|l| format!("rho{l}_per_rad")));
        let mut wf = Table::new("wavefunctions", columns);
        for (i, &x) in sweep.grid.iter().enumerate() {
            let (flux, p) = match axis {
                AxisConfig::Flux => (x, *params),
                AxisConfig::Ng => (flux_pi * PI, params.with_ng(x)),
            };
            let r = &sweep.results[i];
            for phi in linspace(-PI, PI, n_phi) {
                let mut row = vec![x, phi, potential_energy(&p, flux, phi)];
                row.extend((0..levels).map(|l| phase_wavefunction(&r.state(l), phi).norm_sqr()));
                wf.push(row);
            }
        }
        tables.push(wf);
    }
    Ok(tables)
}

fn splitting_table(
    params: &CircuitParams,
    grid: &[f64],
    approximation: bool,
    name: String,
) -> Result<Table> {
    let mut columns = vec!["flux_rad".to_string(), "Eq_MHz".to_string()];
    if approximation {
        columns.push("Eq_approx_MHz".into());
    }
    let mut table = Table::new(name, columns);
    for &flux in grid {
        let mut row = vec![flux, qubit_splitting(params, flux)?];
        if approximation {
            row.push(splitting_approx(params, flux).unwrap_or(f64::NAN));
        }
        table.push(row);
    }
    Ok(table)
}
