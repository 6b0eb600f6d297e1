//! Randomized invariants over the basis indexing, phase states, and
//! evolution operators.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use proptest::prelude::*;

use onticqft::cogwheel::{self, CogwheelMode, PhaseLabel};
use onticqft::fock::{FockBasis, ModeKind};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// occupations() and index_of() are mutually inverse over mixed
    /// bosonic/fermionic mode lists.
    #[test]
    fn index_occupation_bijection(
        dims in prop::collection::vec(2usize..5, 1..4),
        fermions in 0usize..3,
    ) {
        let mut modes: Vec<ModeKind> =
            dims.iter().map(|&d| ModeKind::Bosonic { dim: d }).collect();
        modes.extend(std::iter::repeat(ModeKind::Fermionic).take(fermions));
        let basis = FockBasis::new(modes).unwrap();
        for idx in 0..basis.dim() {
            let occ = basis.occupations(idx);
            prop_assert_eq!(basis.index_of(&occ).unwrap(), idx);
            for (n, mode) in occ.iter().zip(basis.modes()) {
                prop_assert!(*n < mode.dim());
            }
        }
    }

    /// Phase states are unit-norm for any phase, on or off the lattice.
    #[test]
    fn phase_states_unit_norm(d in 2usize..24, phi in 0.0..TAU) {
        let s = cogwheel::phase_state(d, PhaseLabel::new(phi)).unwrap();
        prop_assert!((s.norm() - 1.0).abs() < 1e-12);
    }

    /// Lattice phase states at distinct teeth are exactly orthogonal.
    #[test]
    fn lattice_states_orthogonal(d in 2usize..16, a in 0usize..16, b in 0usize..16) {
        let (a, b) = (a % d, b % d);
        prop_assume!(a != b);
        let sa = cogwheel::phase_state(d, PhaseLabel::lattice(a, d)).unwrap();
        let sb = cogwheel::phase_state(d, PhaseLabel::lattice(b, d)).unwrap();
        prop_assert!(sa.inner(&sb).unwrap().norm() < 1e-12);
    }

    /// Evolution is unitary and composes additively in time.
    #[test]
    fn evolution_composes(d in 2usize..12, t1 in -5.0..5.0f64, t2 in -5.0..5.0f64, phi in 0.0..TAU) {
        let mode = CogwheelMode::new(d, 1.0).unwrap();
        let s = cogwheel::phase_state(d, PhaseLabel::new(phi)).unwrap();
        let u1 = cogwheel::evolve_mode(mode, t1).unwrap();
        let u2 = cogwheel::evolve_mode(mode, t2).unwrap();
        let u12 = cogwheel::evolve_mode(mode, t1 + t2).unwrap();
        let step = u2.apply(&u1.apply(&s).unwrap()).unwrap();
        let joint = u12.apply(&s).unwrap();
        prop_assert!(step.distance(&joint).unwrap() < 1e-12);
        prop_assert!((step.norm() - 1.0).abs() < 1e-12);
    }

    /// Full-period evolution is the identity on every phase state.
    #[test]
    fn evolution_periodic(d in 2usize..12, phi in 0.0..TAU) {
        let mode = CogwheelMode::new(d, 1.0).unwrap();
        let s = cogwheel::phase_state(d, PhaseLabel::new(phi)).unwrap();
        // t = 2 pi / omega: every e^{i omega t n} winds a whole number of turns.
        let u = cogwheel::evolve_mode(mode, TAU / mode.omega).unwrap();
        let back = u.apply(&s).unwrap();
        prop_assert!((back.inner(&s).unwrap() - C64::new(1.0, 0.0)).norm() < 1e-9);
    }

    /// Coherent-state overlap moduli match the closed form.
    #[test]
    fn coherent_overlap_matches_closed_form(
        r1 in 0.0..1.2f64, a1 in 0.0..TAU,
        r2 in 0.0..1.2f64, a2 in 0.0..TAU,
    ) {
        let d = 40;
        let z1 = C64::from_polar(r1, a1);
        let z2 = C64::from_polar(r2, a2);
        let s1 = cogwheel::coherent_state(d, z1).unwrap();
        let s2 = cogwheel::coherent_state(d, z2).unwrap();
        let measured = s1.inner(&s2).unwrap().norm();
        let exact = cogwheel::coherent_overlap_exact_modulus(z1, z2);
        prop_assert!((measured - exact).abs() < 1e-8);
    }
}
