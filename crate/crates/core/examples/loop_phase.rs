//! Geometric phase of a rectangular loop, by Wilson loop and by curvature.
use std::f64::consts::PI;

use psquid::holonomy::{loop_phase_curvature, loop_phase_wilson, LoopPath, Rectangle};
use psquid::CircuitParams;

fn main() -> psquid::Result<()> {
    let p = CircuitParams::reference().with_n_cut(15);
    let path = LoopPath::rectangle(&Rectangle::new((-0.3 * PI, 0.3 * PI), (0.2, 0.8))?)?;
    let w = loop_phase_wilson(&p, &path, 1, 200)?;
    let c = loop_phase_curvature(&p, &path, 1, 16)?;
    println!(
        "level 1: wilson {:+.6e}  curvature {:+.6e}  min gap {:.3} MHz",
        w.omega_total, c.omega_total, w.min_gap_on_path
    );
    Ok(())
}
