//! Chiral gamma matrices, the Clifford algebra, and the helicity
//! eigenspinors that solve the massless Weyl equation. A plane wave
//! solves the equation only when the frequency sign matches the
//! helicity; the wrong sign misses by exactly 2|k|.

use onticqft::fermions::{
    clifford_check, gamma_chiral, sigma_dot_apply, weyl_plane_wave_residual, weyl_spinors,
};
use onticqft::{Result, C64};

fn main() -> Result<()> {
    let g = gamma_chiral();
    println!("Clifford algebra {{gamma_mu, gamma_nu}} = 2 eta_mu_nu:");
    let table = clifford_check(&g);
    for mu in 0..4 {
        let row: Vec<String> = (0..4)
            .map(|nu| format!("{:+.0}", table[mu][nu].coefficient.re))
            .collect();
        println!("  [{}]", row.join(", "));
    }
    let max_res = (0..4)
        .flat_map(|m| (0..4).map(move |n| (m, n)))
        .map(|(m, n)| table[m][n].residual)
        .fold(0.0, f64::max);
    println!("max non-scalar residual = {max_res:.3e}\n");

    // Helicity spinors at a generic momentum.
    let k: [f64; 3] = [0.3, -1.2, 0.7];
    let kn = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
    let (up, um) = weyl_spinors(k, true)?;
    for (u, h, name) in [(up, 1.0, "+"), (um, -1.0, "-")] {
        let sk = sigma_dot_apply(k, &u);
        let res = ((sk[0] - C64::new(h * kn, 0.0) * u[0]).norm_sqr()
            + (sk[1] - C64::new(h * kn, 0.0) * u[1]).norm_sqr())
        .sqrt();
        println!(
            "helicity {name}: u = ({:.4}{:+.4}i, {:.4}{:+.4}i), (sigma.k) u = {}|k| u, residual {res:.3e}",
            u[0].re, u[0].im, u[1].re, u[1].im, name
        );
    }

    // The -z axis is the singular direction of the closed form; the
    // limiting spinor is still well defined.
    let (_, um) = weyl_spinors([0.0, 0.0, -2.0], true)?;
    println!("\nlimit spinor at k = -z: ({:.1}, {:.1})", um[0].re, um[1].re);

    // Plane-wave residuals for both frequency signs.
    for h in [1i8, -1] {
        let r = weyl_plane_wave_residual(k, h)?;
        println!(
            "helicity {h:+}: omega sign {:+} solves (residual {:.1e}); opposite sign misses by {:.6} = 2|k| = {:.6}",
            r.solving_sign, r.residual_solving, r.residual_opposite, 2.0 * kn
        );
    }
    Ok(())
}
