//! Berry curvature between the two lowest levels near the crossing point.
use std::f64::consts::PI;

use psquid::holonomy::{berry_curvature, curvature_grid, Rectangle};
use psquid::CircuitParams;

fn main() -> psquid::Result<()> {
    let p = CircuitParams::reference().with_n_cut(15);
    println!(
        "B_01 at (pi, 0.5): {:.4e}",
        berry_curvature(&p, PI, 0.5, 0, 1)?
    );
    let region = Rectangle::new((0.5 * PI, 1.5 * PI), (0.0, 1.0))?;
    let grid = curvature_grid(&p, &region, (0, 1), (21, 21))?;
    println!(
        "max |B_01| on grid: {:.4e}, flagged points: {}",
        grid.max_abs(),
        grid.flagged.len()
    );
    if let Some(peak) = grid.peak {
        println!(
            "peak {:.4e} at flux {:.3} pi, ng {:.3}",
            peak.value,
            peak.flux / PI,
            peak.ng
        );
    }
    Ok(())
}
