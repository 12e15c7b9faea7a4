//! Lowest levels over flux and offset charge, and the cutoff check.
use std::f64::consts::PI;

use psquid::spectral::{charge_sweep, convergence_check, flux_sweep, linspace};
use psquid::CircuitParams;

fn main() -> psquid::Result<()> {
    let p = CircuitParams::reference();
    let sweep = flux_sweep(&p, &linspace(0.0, 2.0 * PI, 9), 4)?;
    for (flux, r) in sweep.grid.iter().zip(&sweep.results) {
        let rel: Vec<String> = r
            .energies
            .iter()
            .map(|e| format!("{:10.3}", e - r.energies[0]))
            .collect();
        println!("flux {:5.3} pi: {}", flux / PI, rel.join(" "));
    }
    let charge = charge_sweep(&p, PI, &linspace(0.0, 1.0, 5), 2)?;
    println!("E1 - E0 over ng at half flux: {:?}", charge.level(1));
    let report = convergence_check(&p, PI, 1e-9)?;
    println!(
        "converged at n_cut {} (max change {:.2e})",
        report.n_cut, report.max_relative_change
    );
    Ok(())
}
