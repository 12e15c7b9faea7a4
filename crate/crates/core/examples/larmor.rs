//! Free precession of an equator state at half flux.
use std::f64::consts::PI;

use psquid::cli::{initial_state, InitialState};
use psquid::dynamics::{propagate, PulseSchedule};
use psquid::spectral::{localize_qubit_basis, qubit_splitting};
use psquid::CircuitParams;

fn main() -> psquid::Result<()> {
    let p = CircuitParams::reference();
    let eq = qubit_splitting(&p, PI)?;
    let basis = localize_qubit_basis(&p, PI)?;
    let plus = initial_state(&basis, InitialState::Plus);
    let traj = propagate(&p, &PulseSchedule::hold(PI, 2.0 / eq)?, &plus, 1e-3 / eq)?;
    let p_plus = traj.overlap_probability(&plus);
    println!("Eq = {eq:.4} MHz, period = {:.5} us", 1.0 / eq);
    for i in (0..traj.times.len()).step_by(traj.times.len() / 8) {
        let [x, y, z] = traj.bloch[i];
        println!(
            "t {:8.5}  P+ {:.4}  bloch ({x:+.3}, {y:+.3}, {z:+.3})",
            traj.times[i], p_plus[i]
        );
    }
    Ok(())
}
