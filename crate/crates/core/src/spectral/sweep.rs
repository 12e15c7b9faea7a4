use rayon::prelude::*;
use serde::Serialize;

use super::{solve, SpectrumResult};
use crate::model::CircuitParams;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Flux,
    Ng,
}

/// Spectra over a one-dimensional bias grid.
///
/// Energies in `results` are measured from the ground state at the same
/// grid point; the subtracted offsets are kept in `ground_energies`.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumSweep {
    pub axis: SweepAxis,
    pub grid: Vec<f64>,
    pub results: Vec<SpectrumResult>,
    pub ground_energies: Vec<f64>,
    pub params: CircuitParams,
}

impl SpectrumSweep {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Relative energy of `level` along the sweep.
    pub fn level(&self, level: usize) -> Vec<f64> {
        self.results.iter().map(|r| r.energies[level]).collect()
    }

    /// Absolute energy of `level` along the sweep.
    pub fn absolute_level(&self, level: usize) -> Vec<f64> {
        self.results
            .iter()
            .zip(&self.ground_energies)
            .map(|(r, e0)| r.energies[level] + e0)
            .collect()
    }
}

pub(crate) fn check_grid(name: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::invalid(name, "grid is empty"));
    }
    if let Some(bad) = grid.iter().find(|x| !x.is_finite()) {
        return Err(Error::invalid(name, format!("non-finite grid value {bad}")));
    }
    let increasing = grid.windows(2).all(|w| w[1] > w[0]);
    let decreasing = grid.windows(2).all(|w| w[1] < w[0]);
    if !(increasing || decreasing) {
        return Err(Error::invalid(name, "grid must be strictly monotone"));
    }
    Ok(())
}

fn reference_to_ground(mut r: SpectrumResult) -> (SpectrumResult, f64) {
    let e0 = r.energies[0];
    for e in &mut r.energies {
        *e -= e0;
    }
    (r, e0)
}

fn assemble(
    axis: SweepAxis,
    grid: &[f64],
    params: &CircuitParams,
    solved: Vec<SpectrumResult>,
) -> SpectrumSweep {
    let (results, ground_energies) = solved.into_iter().map(reference_to_ground).unzip();
    SpectrumSweep {
        axis,
        grid: grid.to_vec(),
        results,
        ground_energies,
        params: *params,
    }
}

pub fn flux_sweep(params: &CircuitParams, flux_grid: &[f64], k: usize) -> Result<SpectrumSweep> {
    params.validate()?;
    check_grid("flux_grid", flux_grid)?;
    let solved = flux_grid
        .par_iter()
        .map(|&flux| solve(params, flux, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(SweepAxis::Flux, flux_grid, params, solved))
}

/// Offset-charge sweep at fixed flux.
pub fn charge_sweep(
    params: &CircuitParams,
    flux: f64,
    ng_grid: &[f64],
    k: usize,
) -> Result<SpectrumSweep> {
    params.validate()?;
    check_grid("ng_grid", ng_grid)?;
    let solved = ng_grid
        .par_iter()
        .map(|&ng| solve(&params.with_ng(ng), flux, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(SweepAxis::Ng, ng_grid, params, solved))
}

/// `n` evenly spaced points from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (end - start) / (n - 1) as f64;
            let mut v: Vec<f64> = (0..n).map(|i| start + step * i as f64).collect();
            v[n - 1] = end;
            v
        }
    }
}
