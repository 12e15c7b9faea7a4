//! Sudden flux steps: tipping angle, validity window and a composed gate.
use std::f64::consts::PI;

use psquid::dynamics::{diabatic_gate, diabatic_sequence, tipping_analysis};
use psquid::spectral::{linspace, qubit_splitting};
use psquid::CircuitParams;

fn main() -> psquid::Result<()> {
    let p = CircuitParams::reference();
    for flux in linspace(PI, 1.5 * PI, 6) {
        let t = tipping_analysis(&p, flux)?;
        println!(
            "flux {:.2} pi  theta {:.4}  h0 {:9.3} MHz  valid {}",
            flux / PI,
            t.theta,
            t.h0,
            t.valid
        );
    }
    let flux = 1.2 * PI;
    let h = tipping_analysis(&p, flux)?.h;
    let splitting = 2.0 * h.iter().map(|x| x * x).sum::<f64>().sqrt();
    let g = diabatic_gate(&p, flux, 1.0 / splitting)?;
    println!(
        "half turn at 1.2 pi: angle {:.4}, tilt {:.4}, leakage {:.2e}",
        g.angle, g.tilt, g.leakage_final
    );
    let eq = qubit_splitting(&p, PI)?;
    let seq = diabatic_sequence(
        &p,
        &[
            (flux, 0.25 / splitting),
            (PI, 0.25 / eq),
            (flux, 0.25 / splitting),
        ],
    )?;
    println!(
        "three-step sequence: axis ({:+.3}, {:+.3}, {:+.3}), angle {:.4}",
        seq.axis[0], seq.axis[1], seq.axis[2], seq.angle
    );
    Ok(())
}
