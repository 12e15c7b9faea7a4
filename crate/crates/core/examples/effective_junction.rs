//! Effective amplitudes and phases of the two junctions over one flux period.
use std::f64::consts::PI;

use psquid::model::{effective_junction, effective_junction_path};
use psquid::spectral::linspace;
use psquid::CircuitParams;

fn main() {
    let p = CircuitParams::reference();
    println!("flux/pi    ej1       ej2      phi0");
    for flux in linspace(0.0, 2.0 * PI, 9) {
        let ej = effective_junction(&p, flux);
        println!(
            "{:6.3} {:9.3} {:9.3} {:9.5}",
            flux / PI,
            ej.ej1,
            ej.ej2,
            ej.phi0
        );
    }
    let grid = linspace(0.0, 4.0 * PI, 801);
    let path = effective_junction_path(&p, &grid);
    let last = path.last().unwrap();
    println!(
        "unwrapped over two periods: phi1 = {:.4} pi, phi2 = {:.4} pi",
        last.phi1 / PI,
        last.phi2 / PI
    );
}
