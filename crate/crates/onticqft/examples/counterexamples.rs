//! The boundaries of the construction: what does NOT work, with the
//! deviations measured rather than assumed. Coherent states cannot be
//! relabeled as ontic states, the truncated ladder algebra is not
//! canonical at the cutoff, fermionic phase states collapse to two
//! levels, and bosonic modes cannot imitate Dirac site operators.

use std::f64::consts::TAU;

use onticqft::cogwheel::{coherent_state, fermion_phase_constraint_demo};
use onticqft::fermions::bosonic_dirac_failure_demo;
use onticqft::fock::make_boson_mode;
use onticqft::{Result, C64};

fn main() -> Result<()> {
    // 1. Coherent states on the unit circle overlap strongly.
    let d = 30;
    let states: Vec<_> = (0..8)
        .map(|m| coherent_state(d, C64::from_polar(1.0, TAU * m as f64 / 8.0)))
        .collect::<Result<_>>()?;
    let mut max_ov = 0.0f64;
    for i in 0..8 {
        for j in (i + 1)..8 {
            max_ov = max_ov.max(states[i].inner(&states[j])?.norm());
        }
    }
    println!("coherent circle, |z| = 1: max off-diagonal overlap = {max_ov:.6}");
    println!("  (orthogonality would need this to vanish; the floor is exp(-2) = {:.6})\n", (-2.0f64).exp());

    // 2. [A, A-dagger] = I fails at the cutoff by -(D-1) on the top level.
    let d = 5;
    let (a, adag, _) = make_boson_mode(d)?;
    let comm = a.commutator(&adag)?;
    let diag: Vec<String> = (0..d).map(|n| format!("{:+.0}", comm.entry(n, n).re)).collect();
    println!("[A, A^dag] diagonal at D = {d}: [{}]", diag.join(", "));
    println!("  (canonical value is +1 everywhere; the top entry is -(D-1))\n");

    // 3. A fermionic phase state has nothing above n = 1.
    let rep = fermion_phase_constraint_demo(4)?;
    println!("fermionic phase-state projections by occupation number:");
    for (n, norm) in rep.projection_norms.iter().enumerate() {
        println!("  n = {n}: ||P_n|phi>|| = {norm:.6}");
    }
    println!("  (n >= 2 vanishes identically: the fermionic cogwheel has two teeth)\n");

    // 4. Bosonic building blocks cannot satisfy Dirac anticommutators.
    let rep = bosonic_dirac_failure_demo(4, 2)?;
    println!("bosonic Dirac-style site operators:");
    println!(
        "  max |{{B_i, B_j^dag}} - delta_ij| = {:.6} (fermionic control: {:.1e})",
        rep.max_anticommutator_deviation, rep.fermionic_control_deviation
    );
    println!(
        "  max off-diagonal Gram of the would-be site states = {:.6}",
        rep.max_offdiagonal_gram
    );
    println!("  (only genuinely fermionic modes produce an ontic site basis)");
    Ok(())
}
