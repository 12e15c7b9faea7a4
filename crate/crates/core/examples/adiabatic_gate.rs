//! Slow flux excursion away from half flux giving a Z rotation.
use std::f64::consts::PI;

use psquid::dynamics::adiabatic_z_gate;
use psquid::CircuitParams;

fn main() -> psquid::Result<()> {
    let p = CircuitParams::reference();
    for target in [1.1, 1.2, 1.3] {
        let g = adiabatic_z_gate(&p, target * PI, 0.05, 0.02)?;
        println!(
            "hold {target:.1} pi: angle {:+.4} rad  axis ({:+.3}, {:+.3}, {:+.3})  leakage {:.2e}",
            g.angle, g.axis[0], g.axis[1], g.axis[2], g.leakage_final
        );
    }
    Ok(())
}
