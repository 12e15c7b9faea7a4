use std::collections::HashMap;

use serde::Serialize;

use super::eigen::eigenvalues_only;
use crate::model::{build_hamiltonian, CircuitParams};
use crate::{Error, Result};

pub const CONVERGENCE_LEVELS: usize = 6;
pub const CONVERGENCE_STEP: usize = 5;
pub const MAX_N_CUT: usize = 120;
const MIN_N_CUT: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    /// Smallest cutoff whose lowest levels survive `N → N + 5`.
    pub n_cut: usize,
    pub tol: f64,
    /// Largest relative level shift at the accepted cutoff.
    pub max_relative_change: f64,
    /// `(N, max relative change)` for every cutoff tried.
    pub history: Vec<(usize, f64)>,
}

/// Finds the smallest charge cutoff for which the six lowest eigenvalues
/// move by less than `tol` when the cutoff grows by five.
///
/// Changes are relative to `max(|E|, E_C)` so that levels close to zero
/// do not blow up the ratio.
pub fn convergence_check(params: &CircuitParams, flux: f64, tol: f64) -> Result<ConvergenceReport> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::invalid(
            "tol",
            format!("must be positive, got {tol}"),
        ));
    }
    params.validate()?;
    let mut cache: HashMap<usize, Vec<f64>> = HashMap::new();
    let mut levels = |n_cut: usize| -> Result<Vec<f64>> {
        if let Some(e) = cache.get(&n_cut) {
            return Ok(e.clone());
        }
        let h = build_hamiltonian(&params.with_n_cut(n_cut), flux);
        let mut e = eigenvalues_only(h.matrix()).ok_or_else(|| Error::EigenSolve {
            context: format!("flux {flux}, n_cut {n_cut}"),
        })?;
        e.truncate(CONVERGENCE_LEVELS);
        cache.insert(n_cut, e.clone());
        Ok(e)
    };
    let mut history = Vec::new();
    for n_cut in MIN_N_CUT..=MAX_N_CUT {
        let coarse = levels(n_cut)?;
        let fine = levels(n_cut + CONVERGENCE_STEP)?;
        let change = coarse
            .iter()
            .zip(&fine)
            .map(|(a, b)| (a - b).abs() / b.abs().max(params.ec))
            .fold(0.0, f64::max);
        history.push((n_cut, change));
        if change < tol {
            return Ok(ConvergenceReport {
                n_cut,
                tol,
                max_relative_change: change,
                history,
            });
        }
    }
    Err(Error::NotConverged {
        what: "charge cutoff".into(),
        detail: format!("lowest levels still move by more than {tol} at n_cut = {MAX_N_CUT}"),
    })
}
