use std::f64::consts::TAU;

use faer::complex_native::c64;
use faer::{Mat, Side};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::model::{build_hamiltonian, CircuitParams, HermitianOperator};
use crate::{Error, Result, C64};

const RESIDUAL_TOL: f64 = 1e-8;
const ORTHONORMAL_TOL: f64 = 1e-9;

/// Lowest eigenpairs of the Hamiltonian at one bias point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumResult {
    /// Flux in radians, `NaN` when built from a bare operator.
    pub flux: f64,
    /// Offset charge, `NaN` when built from a bare operator.
    pub ng: f64,
    /// Ascending eigenfrequencies (MHz).
    pub energies: Vec<f64>,
    /// Eigenvectors as columns, in the order of `energies`.
    #[serde(skip)]
    pub states: DMatrix<C64>,
    pub k_kept: usize,
}

impl SpectrumResult {
    pub fn state(&self, i: usize) -> DVector<C64> {
        self.states.column(i).into_owned()
    }

    pub fn gap(&self, lower: usize, upper: usize) -> f64 {
        self.energies[upper] - self.energies[lower]
    }
}

fn to_faer(matrix: &DMatrix<C64>) -> Mat<c64> {
    Mat::from_fn(matrix.nrows(), matrix.ncols(), |i, j| {
        let z = matrix[(i, j)];
        c64::new(z.re, z.im)
    })
}

/// Full eigendecomposition sorted by energy, unchecked. `None` when the
/// solver produced non-finite output.
fn diagonalize(matrix: &DMatrix<C64>) -> Option<(Vec<f64>, DMatrix<C64>)> {
    let evd = to_faer(matrix).selfadjoint_eigendecomposition(Side::Lower);
    let s = evd.s().column_vector();
    let u = evd.u();
    let n = matrix.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| s.read(a).re.total_cmp(&s.read(b).re));
    let energies: Vec<f64> = order.iter().map(|&i| s.read(i).re).collect();
    let states = DMatrix::from_fn(n, n, |i, j| {
        let z = u.read(i, order[j]);
        C64::new(z.re, z.im)
    });
    let finite = energies.iter().all(|e| e.is_finite())
        && states.iter().all(|z| z.re.is_finite() && z.im.is_finite());
    finite.then_some((energies, states))
}

/// `exp(−2πi H τ)` through the eigen-decomposition of `H`.
pub(crate) fn evolution_operator(matrix: &DMatrix<C64>, tau: f64) -> Option<DMatrix<C64>> {
    let evd = to_faer(matrix).selfadjoint_eigendecomposition(Side::Lower);
    let s = evd.s().column_vector();
    let u = evd.u();
    let n = matrix.nrows();
    let mut scaled = u.to_owned();
    for j in 0..n {
        let e = s.read(j).re;
        if !e.is_finite() {
            return None;
        }
        let (sin, cos) = (-TAU * (e * tau).rem_euclid(1.0)).sin_cos();
        let phase = c64::new(cos, sin);
        for i in 0..n {
            scaled.write(i, j, scaled.read(i, j) * phase);
        }
    }
    let out = scaled * u.adjoint();
    let out = DMatrix::from_fn(n, n, |i, j| {
        let z = out.read(i, j);
        C64::new(z.re, z.im)
    });
    out.iter()
        .all(|z| z.re.is_finite() && z.im.is_finite())
        .then_some(out)
}

pub(crate) fn eigenvalues_only(matrix: &DMatrix<C64>) -> Option<Vec<f64>> {
    let mut e = to_faer(matrix).selfadjoint_eigenvalues(Side::Lower);
    e.sort_by(f64::total_cmp);
    e.iter().all(|x| x.is_finite()).then_some(e)
}

fn check_pairs(
    matrix: &DMatrix<C64>,
    norm: f64,
    energies: &[f64],
    states: &DMatrix<C64>,
    context: &str,
) -> Result<()> {
    let norm = norm.max(f64::MIN_POSITIVE);
    for (i, &e) in energies.iter().enumerate() {
        let v = states.column(i);
        let residual = (matrix * v - v * C64::new(e, 0.0)).norm();
        if residual >= RESIDUAL_TOL * norm {
            return Err(Error::EigenCheck {
                context: context.to_string(),
                detail: format!("residual {residual:.3e} for level {i}"),
            });
        }
    }
    let gram = states.adjoint() * states;
    let worst = gram
        .iter()
        .enumerate()
        .map(|(idx, z)| {
            let diag = idx % gram.nrows() == idx / gram.nrows();
            (z - C64::new(if diag { 1.0 } else { 0.0 }, 0.0)).norm()
        })
        .fold(0.0, f64::max);
    if worst >= ORTHONORMAL_TOL {
        return Err(Error::EigenCheck {
            context: context.to_string(),
            detail: format!("orthonormality error {worst:.3e}"),
        });
    }
    Ok(())
}

/// `k` lowest eigenpairs of `h`, ascending and residual-checked.
pub fn eigensystem(h: &HermitianOperator, k: usize) -> Result<SpectrumResult> {
    eigensystem_with_context(h, k, "operator")
}

pub(crate) fn eigensystem_with_context(
    h: &HermitianOperator,
    k: usize,
    context: &str,
) -> Result<SpectrumResult> {
    if k == 0 || k > h.dim() {
        return Err(Error::invalid(
            "k",
            format!("must be in 1..={}, got {k}", h.dim()),
        ));
    }
    let (mut energies, states) = diagonalize(h.matrix()).ok_or_else(|| Error::EigenSolve {
        context: context.to_string(),
    })?;
    let spectral_norm = energies[0].abs().max(energies[energies.len() - 1].abs());
    energies.truncate(k);
    let states = states.columns(0, k).into_owned();
    check_pairs(h.matrix(), spectral_norm, &energies, &states, context)?;
    Ok(SpectrumResult {
        flux: f64::NAN,
        ng: f64::NAN,
        energies,
        states,
        k_kept: k,
    })
}

/// Builds the Hamiltonian at `flux` and returns its `k` lowest eigenpairs.
pub fn solve(params: &CircuitParams, flux: f64, k: usize) -> Result<SpectrumResult> {
    params.validate()?;
    let h = build_hamiltonian(params, flux);
    let context = format!("flux {flux}, ng {}", params.ng);
    let mut result = eigensystem_with_context(&h, k, &context)?;
    result.flux = flux;
    result.ng = params.ng;
    Ok(result)
}
