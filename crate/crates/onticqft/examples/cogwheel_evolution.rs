//! Time evolution of a truncated mode permutes its phase states: after
//! t = 2 pi j / (omega D) every tooth has advanced by j. At other times
//! the phase label simply advances continuously, phi -> phi + omega t.

use std::f64::consts::TAU;

use onticqft::cogwheel::{evolve_mode, ontic_basis, phase_state, CogwheelMode, PhaseLabel};
use onticqft::Result;

fn main() -> Result<()> {
    let d = 8;
    let mode = CogwheelMode::new(d, 1.5)?;
    let basis = ontic_basis(d)?;
    println!("Cogwheel evolution, D = {d}, omega = {}\n", mode.omega);

    // One tooth per step at the commensurate time.
    let step = TAU / (mode.omega * d as f64);
    for j in [1usize, 3, d - 1] {
        let u = evolve_mode(mode, j as f64 * step)?;
        println!("t = {j} steps:");
        for m in 0..d {
            let evolved = u.apply(&basis[m])?;
            let target = (m + j) % d;
            let ov = basis[target].inner(&evolved)?;
            println!(
                "  |phi_{m}> -> |phi_{target}>  |overlap| = {:.12}  phase = {:+.6}",
                ov.norm(),
                ov.arg()
            );
        }
    }

    // Off the lattice the label advances exactly, with no tooth to land on.
    let phi0 = PhaseLabel::new(1.0);
    let t = 0.7331;
    let u = evolve_mode(mode, t)?;
    let got = u.apply(&phase_state(d, phi0)?)?;
    let want = phase_state(d, PhaseLabel::new(phi0.phi() + mode.omega * t))?;
    println!(
        "\noff-lattice: || U({t}) |phi=1.0> - |phi=1.0+omega t> || = {:.3e}",
        got.distance(&want)?
    );
    Ok(())
}
