use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use super::Rectangle;
use crate::model::{build_hamiltonian, d_hamiltonian_d_flux, d_hamiltonian_d_ng, CircuitParams};
use crate::spectral::{eigensystem, linspace, SpectrumResult};
use crate::{Error, Result, C64};

/// Smallest level spacing (MHz) at which curvature is evaluated.
pub const DEFAULT_GAP_FLOOR: f64 = 1e-6;

/// Eigen-decomposition and bias derivatives at one `(Φ, n_g)` point, in the
/// eigenbasis.
#[derive(Debug, Clone)]
pub struct LocalFrame {
    pub flux: f64,
    pub ng: f64,
    pub energies: Vec<f64>,
    pub states: DMatrix<C64>,
    /// `⟨ψ_k|∂_Φ H|ψ_l⟩` for the kept levels.
    pub d_flux: DMatrix<C64>,
    /// `⟨ψ_k|∂_{n_g} H|ψ_l⟩` for the kept levels.
    pub d_ng: DMatrix<C64>,
}

impl LocalFrame {
    /// Diagonalizes at `(flux, ng)` keeping `levels` eigenpairs.
    pub fn new(params: &CircuitParams, flux: f64, ng: f64, levels: usize) -> Result<Self> {
        let p = params.with_ng(ng);
        p.validate()?;
        if levels == 0 || levels > p.dim() {
            return Err(Error::invalid(
                "levels",
                format!("must be in 1..={}, got {levels}", p.dim()),
            ));
        }
        let h = build_hamiltonian(&p, flux);
        let SpectrumResult {
            energies, states, ..
        } = eigensystem(&h, levels)?;
        let d_flux = states.adjoint() * d_hamiltonian_d_flux(&p, flux).matrix() * &states;
        let d_ng = states.adjoint() * d_hamiltonian_d_ng(&p, flux).matrix() * &states;
        Ok(Self {
            flux,
            ng,
            energies,
            states,
            d_flux,
            d_ng,
        })
    }

    pub fn levels(&self) -> usize {
        self.energies.len()
    }

    /// `B_kl` from the cached matrix elements.
    pub fn curvature(&self, k: usize, l: usize, gap_floor: f64) -> Result<f64> {
        if k == l {
            return Ok(0.0);
        }
        let gap = self.energies[k] - self.energies[l];
        if gap.abs() <= gap_floor {
            return Err(Error::DegenerateGap {
                flux: self.flux,
                ng: self.ng,
                k,
                l,
                gap: gap.abs(),
            });
        }
        let cross = self.d_flux[(k, l)] * self.d_ng[(l, k)];
        Ok(-2.0 * cross.im / (gap * gap))
    }
}

/// `B_kl = −2 Im[⟨k|∂_Φ H|l⟩⟨l|∂_{n_g} H|k⟩] / (E_k − E_l)²` from explicit
/// states and derivative operators.
pub fn curvature_from_states(
    d_flux: &DMatrix<C64>,
    d_ng: &DMatrix<C64>,
    (psi_k, e_k): (&DVector<C64>, f64),
    (psi_l, e_l): (&DVector<C64>, f64),
    gap_floor: f64,
) -> Option<f64> {
    let gap = e_k - e_l;
    if gap.abs() <= gap_floor {
        return None;
    }
    let a = psi_k.dotc(&(d_flux * psi_l));
    let b = psi_l.dotc(&(d_ng * psi_k));
    Some(-2.0 * (a * b).im / (gap * gap))
}

fn check_levels(params: &CircuitParams, k: usize, l: usize) -> Result<()> {
    let dim = params.dim();
    for (name, v) in [("k", k), ("l", l)] {
        if v >= dim {
            return Err(Error::invalid(
                name,
                format!("level {v} exceeds basis size {dim}"),
            ));
        }
    }
    Ok(())
}

/// Berry curvature of level `k` due to level `l` per unit `Φ·n_g` area.
pub fn berry_curvature(
    params: &CircuitParams,
    flux: f64,
    ng: f64,
    k: usize,
    l: usize,
) -> Result<f64> {
    check_levels(params, k, l)?;
    let frame = LocalFrame::new(params, flux, ng, k.max(l) + 1)?;
    frame.curvature(k, l, DEFAULT_GAP_FLOOR)
}

/// `B_kl` for all `k, l < levels`. Degenerate pairs are `NaN`.
pub fn curvature_matrix(
    params: &CircuitParams,
    flux: f64,
    ng: f64,
    levels: usize,
) -> Result<DMatrix<f64>> {
    let frame = LocalFrame::new(params, flux, ng, levels)?;
    Ok(DMatrix::from_fn(levels, levels, |k, l| {
        frame.curvature(k, l, DEFAULT_GAP_FLOOR).unwrap_or(f64::NAN)
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvaturePeak {
    pub flux: f64,
    pub ng: f64,
    pub value: f64,
    /// Full width at half maximum of `|B|` along the flux row through the peak.
    pub fwhm_flux: f64,
    /// Same along the charge column.
    pub fwhm_ng: f64,
}

/// `B_kl` sampled on a rectangular `(Φ, n_g)` grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureGrid {
    pub flux_axis: Vec<f64>,
    pub ng_axis: Vec<f64>,
    pub level_pair: (usize, usize),
    /// `values[i][j]` at `(flux_axis[i], ng_axis[j])`; `NaN` where flagged.
    pub values: Vec<Vec<f64>>,
    /// Grid indices where `|E_k − E_l|` fell below the gap floor.
    pub flagged: Vec<(usize, usize)>,
    pub gap_floor: f64,
    pub peak: Option<CurvaturePeak>,
}

impl CurvatureGrid {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i][j]
    }

    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .filter(|v| v.is_finite())
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

fn half_width(axis: &[f64], line: &[f64], at: usize) -> f64 {
    let half = 0.5 * line[at].abs();
    let mut edges = [axis[0], axis[axis.len() - 1]];
    for (dir, edge) in [-1i64, 1].into_iter().zip(edges.iter_mut()) {
        let mut i = at as i64;
        loop {
            let next = i + dir;
            if next < 0 || next as usize >= line.len() {
                break;
            }
            let (a, b) = (line[i as usize].abs(), line[next as usize].abs());
            if !b.is_finite() || b < half {
                let frac = if b.is_finite() && a != b {
                    (a - half) / (a - b)
                } else {
                    0.5
                };
                let (xa, xb) = (axis[i as usize], axis[next as usize]);
                *edge = xa + frac * (xb - xa);
                break;
            }
            i = next;
        }
    }
    edges[1] - edges[0]
}

fn find_peak(grid: &CurvatureGrid) -> Option<CurvaturePeak> {
    let mut best: Option<(usize, usize, f64)> = None;
    for (i, row) in grid.values.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v.is_finite() && best.is_none_or(|(_, _, b)| v.abs() > b.abs()) {
                best = Some((i, j, v));
            }
        }
    }
    let (i, j, value) = best?;
    let row: Vec<f64> = grid.values.iter().map(|r| r[j]).collect();
    Some(CurvaturePeak {
        flux: grid.flux_axis[i],
        ng: grid.ng_axis[j],
        value,
        fwhm_flux: half_width(&grid.flux_axis, &row, i),
        fwhm_ng: half_width(&grid.ng_axis, &grid.values[i], j),
    })
}

/// Samples `B_kl` on a `resolution.0 × resolution.1` grid spanning `region`
/// including its edges. Points below the gap floor are flagged.
pub fn curvature_grid(
    params: &CircuitParams,
    region: &Rectangle,
    (k, l): (usize, usize),
    resolution: (usize, usize),
) -> Result<CurvatureGrid> {
    params.validate()?;
    region.validate()?;
    check_levels(params, k, l)?;
    if resolution.0 < 2 || resolution.1 < 2 {
        return Err(Error::invalid(
            "resolution",
            "need at least 2 points per axis",
        ));
    }
    let flux_axis = linspace(region.flux_min, region.flux_max, resolution.0);
    let ng_axis = linspace(region.ng_min, region.ng_max, resolution.1);
    let levels = k.max(l) + 1;
    let values: Vec<Vec<Option<f64>>> = flux_axis
        .par_iter()
        .map(|&flux| {
            ng_axis
                .iter()
                .map(|&ng| {
                    let frame = LocalFrame::new(params, flux, ng, levels)?;
                    match frame.curvature(k, l, DEFAULT_GAP_FLOOR) {
                        Ok(v) => Ok(Some(v)),
                        Err(Error::DegenerateGap { .. }) => Ok(None),
                        Err(e) => Err(e),
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut flagged = Vec::new();
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, row)| {
            row.into_iter()
                .enumerate()
                .map(|(j, v)| {
                    v.unwrap_or_else(|| {
                        flagged.push((i, j));
                        f64::NAN
                    })
                })
                .collect()
        })
        .collect();
    let mut grid = CurvatureGrid {
        flux_axis,
        ng_axis,
        level_pair: (k, l),
        values,
        flagged,
        gap_floor: DEFAULT_GAP_FLOOR,
        peak: None,
    };
    grid.peak = find_peak(&grid);
    Ok(grid)
}
