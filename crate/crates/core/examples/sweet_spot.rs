//! Qubit splitting near half flux, exact against the perturbative estimate.
use std::f64::consts::PI;

use psquid::spectral::{linspace, localize_qubit_basis, qubit_splitting, splitting_approx};
use psquid::CircuitParams;

fn main() -> psquid::Result<()> {
    for ej1 in [300.0, 600.0, 1200.0] {
        let p = CircuitParams::reference().with_ej1_sum(ej1);
        println!("E_J1 = {ej1} MHz");
        for flux in linspace(0.8 * PI, 1.2 * PI, 5) {
            let eq = qubit_splitting(&p, flux)?;
            let approx = splitting_approx(&p, flux)?;
            println!(
                "  flux {:.2} pi  Eq {:9.4}  approx {:9.4}",
                flux / PI,
                eq,
                approx
            );
        }
    }
    let basis = localize_qubit_basis(&CircuitParams::reference(), PI)?;
    println!(
        "logical wells: {:?}, <sin phi> = {:?}",
        basis.well_labels, basis.sin_phi
    );
    Ok(())
}
