use nalgebra::DVector;
use rayon::prelude::*;
use serde::Serialize;

use super::{LocalFrame, LoopPath, Rectangle, DEFAULT_GAP_FLOOR};
use crate::model::{build_hamiltonian_with, effective_junction_path, CircuitParams};
use crate::spectral::{eigensystem, SpectrumResult};
use crate::{Error, Result, C64};

pub const DEFAULT_L_MAX: usize = 8;
/// Stability required between successive Richardson estimates (rad).
pub const DEFAULT_PHASE_TOL: f64 = 1e-4;
const GAP_SAMPLES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LoopMethod {
    CurvatureIntegral,
    WilsonLoop,
}

/// Phase contributed by one intermediate level; `None` stands for the
/// undivided Wilson-loop phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelPhase {
    pub level: Option<usize>,
    pub omega: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoopPhaseResult {
    pub method: LoopMethod,
    pub level: usize,
    /// Sum of `omega_by_level` (rad).
    pub omega_total: f64,
    pub omega_by_level: Vec<LevelPhase>,
    pub path: Vec<(f64, f64)>,
    /// Smallest spacing between `level` and its neighbours along the path (MHz).
    pub min_gap_on_path: f64,
    /// Magnitude of the last included level's contribution.
    pub truncation_estimate: Option<f64>,
    /// Final interior points per axis and cell, or path steps.
    pub resolution: usize,
}

impl LoopPhaseResult {
    pub fn omega(&self, level: usize) -> Option<f64> {
        self.omega_by_level
            .iter()
            .find(|p| p.level == Some(level))
            .map(|p| p.omega)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureIntegration {
    /// Initial midpoint samples per axis in each cell; tripled on refinement.
    pub interior_resolution: usize,
    pub l_max: usize,
    pub tol: f64,
    pub max_refinements: usize,
    pub gap_floor: f64,
}

impl Default for CurvatureIntegration {
    fn default() -> Self {
        Self {
            interior_resolution: 8,
            l_max: DEFAULT_L_MAX,
            tol: DEFAULT_PHASE_TOL,
            max_refinements: 4,
            gap_floor: DEFAULT_GAP_FLOOR,
        }
    }
}

fn neighbour_gap(energies: &[f64], k: usize) -> f64 {
    let below = if k > 0 {
        energies[k] - energies[k - 1]
    } else {
        f64::INFINITY
    };
    let above = energies
        .get(k + 1)
        .map_or(f64::INFINITY, |e| e - energies[k]);
    below.min(above)
}

fn min_gap_along(params: &CircuitParams, path: &LoopPath, k: usize) -> Result<f64> {
    let points = path.sample(GAP_SAMPLES);
    let gaps = points
        .par_iter()
        .map(|&(flux, ng)| {
            let frame = LocalFrame::new(params, flux, ng, (k + 2).min(params.dim()))?;
            Ok(neighbour_gap(&frame.energies, k))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(gaps.into_iter().fold(f64::INFINITY, f64::min))
}

/// Midpoint-rule integral of `B_kl` over `cell` for every `l ≤ l_max`.
fn midpoint(
    params: &CircuitParams,
    cell: &Rectangle,
    k: usize,
    opts: &CurvatureIntegration,
    n: usize,
) -> Result<Vec<f64>> {
    let hx = (cell.flux_max - cell.flux_min) / n as f64;
    let hy = (cell.ng_max - cell.ng_min) / n as f64;
    let levels = opts.l_max + 1;
    let rows = (0..n)
        .into_par_iter()
        .map(|i| {
            let flux = cell.flux_min + (i as f64 + 0.5) * hx;
            let mut acc = vec![0.0; levels];
            for j in 0..n {
                let ng = cell.ng_min + (j as f64 + 0.5) * hy;
                let frame = LocalFrame::new(params, flux, ng, levels)?;
                for (l, a) in acc.iter_mut().enumerate() {
                    *a += frame.curvature(k, l, opts.gap_floor)?;
                }
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = vec![0.0; levels];
    for row in rows {
        for (t, r) in total.iter_mut().zip(row) {
            *t += r;
        }
    }
    Ok(total.into_iter().map(|v| v * hx * hy).collect())
}

/// Richardson-accelerated midpoint integral over one cell; returns the
/// per-level estimate and the final resolution.
fn integrate_cell(
    params: &CircuitParams,
    cell: &Rectangle,
    k: usize,
    opts: &CurvatureIntegration,
) -> Result<(Vec<f64>, usize)> {
    if cell.area() == 0.0 {
        return Ok((vec![0.0; opts.l_max + 1], 0));
    }
    let mut n = opts.interior_resolution;
    let mut coarse = midpoint(params, cell, k, opts, n)?;
    let mut previous: Option<Vec<f64>> = None;
    let mut last_change = f64::INFINITY;
    for _ in 0..opts.max_refinements {
        n *= 3;
        let fine = midpoint(params, cell, k, opts, n)?;
        let extrapolated: Vec<f64> = fine
            .iter()
            .zip(&coarse)
            .map(|(f, c)| f + (f - c) / 8.0)
            .collect();
        if let Some(prev) = &previous {
            last_change = (extrapolated.iter().sum::<f64>() - prev.iter().sum::<f64>()).abs();
            if last_change < opts.tol {
                return Ok((extrapolated, n));
            }
        }
        previous = Some(extrapolated);
        coarse = fine;
    }
    Err(Error::NotConverged {
        what: "loop phase quadrature".into(),
        detail: format!(
            "change {last_change:.3e} rad at {n} points per axis on cell \
             [{}, {}] x [{}, {}]",
            cell.flux_min, cell.flux_max, cell.ng_min, cell.ng_max
        ),
    })
}

/// `Ω_k = Σ_l ∬ B_kl dΦ dn_g` over the area enclosed by `path`, with default
/// refinement settings.
pub fn loop_phase_curvature(
    params: &CircuitParams,
    path: &LoopPath,
    k: usize,
    interior_resolution: usize,
) -> Result<LoopPhaseResult> {
    let opts = CurvatureIntegration {
        interior_resolution,
        ..CurvatureIntegration::default()
    };
    loop_phase_curvature_with(params, path, k, &opts)
}

pub fn loop_phase_curvature_with(
    params: &CircuitParams,
    path: &LoopPath,
    k: usize,
    opts: &CurvatureIntegration,
) -> Result<LoopPhaseResult> {
    params.validate()?;
    if opts.interior_resolution == 0 {
        return Err(Error::invalid("interior_resolution", "must be positive"));
    }
    if opts.l_max >= params.dim() {
        return Err(Error::invalid(
            "l_max",
            format!("must be below the basis size {}", params.dim()),
        ));
    }
    if k > opts.l_max {
        return Err(Error::invalid(
            "k",
            format!("level {k} exceeds l_max = {}", opts.l_max),
        ));
    }
    let mut by_level = vec![0.0; opts.l_max + 1];
    let mut resolution = 0;
    for (cell, weight) in path.cells() {
        let (values, n) = integrate_cell(params, &cell, k, opts)?;
        resolution = resolution.max(n);
        for (acc, v) in by_level.iter_mut().zip(values) {
            *acc += weight as f64 * v;
        }
    }
    let omega_by_level: Vec<LevelPhase> = by_level
        .iter()
        .enumerate()
        .filter(|(l, _)| *l != k)
        .map(|(l, &omega)| LevelPhase {
            level: Some(l),
            omega,
        })
        .collect();
    let last = omega_by_level.last().map(|p| p.omega.abs());
    Ok(LoopPhaseResult {
        method: LoopMethod::CurvatureIntegral,
        level: k,
        omega_total: omega_by_level.iter().map(|p| p.omega).sum(),
        omega_by_level,
        path: path.vertices().to_vec(),
        min_gap_on_path: min_gap_along(params, path, k)?,
        truncation_estimate: last,
        resolution,
    })
}

/// `−arg Π_j ⟨ψ_j|ψ_{j+1}⟩` around the closed sequence, the last state
/// linking back to the first.
pub fn wilson_phase_from_states(states: &[DVector<C64>]) -> f64 {
    if states.len() < 2 {
        return 0.0;
    }
    let links: Vec<C64> = (0..states.len())
        .into_par_iter()
        .map(|j| states[j].dotc(&states[(j + 1) % states.len()]))
        .collect();
    let product = links
        .into_iter()
        .fold(C64::new(1.0, 0.0), |acc, z| acc * (z / z.norm()));
    -product.arg()
}

/// Discrete geometric phase of level `k` along `path`, sampled at about
/// `n_steps` points.
pub fn loop_phase_wilson(
    params: &CircuitParams,
    path: &LoopPath,
    k: usize,
    n_steps: usize,
) -> Result<LoopPhaseResult> {
    params.validate()?;
    if n_steps < 4 {
        return Err(Error::invalid("n_steps", "need at least 4 steps"));
    }
    if k + 1 >= params.dim() {
        return Err(Error::invalid(
            "k",
            format!("level {k} has no upper neighbour"),
        ));
    }
    let mut points = path.sample(n_steps);
    points.pop();
    let fluxes: Vec<f64> = points.iter().map(|p| p.0).collect();
    let junctions = effective_junction_path(params, &fluxes);
    let spectra = points
        .par_iter()
        .zip(junctions.par_iter())
        .map(|(&(flux, ng), ej)| {
            let p = params.with_ng(ng);
            let h = build_hamiltonian_with(&p, ej);
            let SpectrumResult {
                energies, states, ..
            } = eigensystem(&h, k + 2)?;
            let gap = neighbour_gap(&energies, k);
            if gap <= DEFAULT_GAP_FLOOR {
                let l = if k > 0 && energies[k] - energies[k - 1] <= DEFAULT_GAP_FLOOR {
                    k - 1
                } else {
                    k + 1
                };
                return Err(Error::DegenerateGap {
                    flux,
                    ng,
                    k,
                    l,
                    gap,
                });
            }
            Ok((gap, states.column(k).into_owned()))
        })
        .collect::<Result<Vec<_>>>()?;
    let min_gap = spectra.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let states: Vec<DVector<C64>> = spectra.into_iter().map(|s| s.1).collect();
    let omega = wilson_phase_from_states(&states);
    Ok(LoopPhaseResult {
        method: LoopMethod::WilsonLoop,
        level: k,
        omega_total: omega,
        omega_by_level: vec![LevelPhase { level: None, omega }],
        path: path.vertices().to_vec(),
        min_gap_on_path: min_gap,
        truncation_estimate: None,
        resolution: states.len(),
    })
}
