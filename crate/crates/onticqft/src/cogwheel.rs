//! Single-mode ontic machinery: phase (cogwheel) states, the three
//! realizations of the beable operator, cogwheel evolution, Fock <-> ontic
//! transforms, and the coherent-state / fermionic-nilpotency demonstrators.
//!
//! The continuum phase family phi in [0, 2pi) with delta-orthogonality is
//! replaced by D lattice phases phi_m = 2 pi m / D with Kronecker
//! orthonormality; the correspondence is delta(phi - phi') <-> D delta_mm' / (2 pi).

use std::f64::consts::TAU;
use std::sync::Arc;

use crate::error::{EngineError, Result};
use crate::fock::{
    boson_lowering_matrix, fermion_lowering_matrix, FockBasis, LinearOperator, ModeKind,
    StateVector,
};
use crate::C64;

/// A cogwheel position in [0, 2pi), optionally on the D-point lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseLabel {
    phi: f64,
    lattice_index: Option<usize>,
}

impl PhaseLabel {
    pub fn new(phi: f64) -> Self {
        PhaseLabel {
            phi: phi.rem_euclid(TAU),
            lattice_index: None,
        }
    }

    /// phi_m = 2 pi m / D.
    pub fn lattice(m: usize, d: usize) -> Self {
        PhaseLabel {
            phi: TAU * (m % d) as f64 / d as f64,
            lattice_index: Some(m % d),
        }
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn lattice_index(&self) -> Option<usize> {
        self.lattice_index
    }

    /// Cogwheel advance phi -> phi + delta mod 2pi. Drops the lattice tag
    /// unless the advance is a whole number of teeth.
    pub fn advanced(&self, delta: f64, d: usize) -> Self {
        let steps = delta * d as f64 / TAU;
        let rounded = steps.round();
        if let (Some(m), true) = (self.lattice_index, (steps - rounded).abs() < 1e-9) {
            let shift = rounded.rem_euclid(d as f64) as usize;
            PhaseLabel::lattice((m + shift) % d, d)
        } else {
            PhaseLabel::new(self.phi + delta)
        }
    }
}

/// A single truncated mode viewed as a D-tooth cogwheel turning at `omega`.
#[derive(Debug, Clone, Copy)]
pub struct CogwheelMode {
    pub dim: usize,
    pub omega: f64,
}

impl CogwheelMode {
    pub fn new(dim: usize, omega: f64) -> Result<Self> {
        if dim < 2 {
            return Err(EngineError::InvalidDimension(
                "cogwheel dimension must be >= 2".into(),
            ));
        }
        if omega < 0.0 {
            return Err(EngineError::InvalidDimension(
                "cogwheel frequency must be >= 0".into(),
            ));
        }
        Ok(CogwheelMode { dim, omega })
    }
}

fn mode_basis(d: usize) -> Result<Arc<FockBasis>> {
    if d < 2 {
        return Err(EngineError::InvalidDimension(
            "phase-state dimension must be >= 2".into(),
        ));
    }
    FockBasis::single(ModeKind::Bosonic { dim: d })
}

/// |phi> = (1/sqrt(D)) sum_n e^{i phi n} |n>.
pub fn phase_state(d: usize, phi: PhaseLabel) -> Result<StateVector> {
    let basis = mode_basis(d)?;
    let norm = 1.0 / (d as f64).sqrt();
    let amps = (0..d)
        .map(|n| C64::from_polar(norm, phi.phi() * n as f64))
        .collect();
    StateVector::new(basis, amps)
}

/// The D lattice phase states |phi_m>, m = 0..D-1.
pub fn ontic_basis(d: usize) -> Result<Vec<StateVector>> {
    (0..d).map(|m| phase_state(d, PhaseLabel::lattice(m, d))).collect()
}

/// One-sided lowering beable (I + A†A)^{-1/2} A, evaluated by functional
/// calculus on the diagonal. Acts as |n> -> |n-1>, |0> -> 0.
pub fn beable_sg(d: usize) -> Result<LinearOperator> {
    let basis = mode_basis(d)?;
    let a = basis.lift(0, &boson_lowering_matrix(d)?, false)?;
    let diag: Vec<C64> = (0..d)
        .map(|n| C64::new(1.0 / ((1 + n) as f64).sqrt(), 0.0))
        .collect();
    let inv_sqrt = LinearOperator::from_diagonal(Arc::clone(&basis), &diag)?;
    inv_sqrt.mul(&a)
}

/// Exact cyclic shift sum_n |n-1 mod D><n|; unitary, with the lattice
/// phase states as eigenvectors.
pub fn beable_cyclic(d: usize) -> Result<LinearOperator> {
    let basis = mode_basis(d)?;
    let entries: Vec<_> = (0..d)
        .map(|n| ((n + d - 1) % d, n, C64::new(1.0, 0.0)))
        .collect();
    LinearOperator::from_triplets(basis, &entries)
}

/// sum_m e^{i phi_m} |phi_m><phi_m|.
pub fn beable_from_projectors(d: usize) -> Result<LinearOperator> {
    let basis = mode_basis(d)?;
    let states = ontic_basis(d)?;
    let mut entries = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let mut acc = C64::new(0.0, 0.0);
            for (m, s) in states.iter().enumerate() {
                let eig = C64::from_polar(1.0, TAU * m as f64 / d as f64);
                acc += eig * s.amplitudes()[i] * s.amplitudes()[j].conj();
            }
            if acc.norm() > 1e-16 {
                entries.push((i, j, acc));
            }
        }
    }
    LinearOperator::from_triplets(basis, &entries)
}

/// U(t) = exp(+i omega t N), diagonal in the number basis, advancing the
/// cogwheel as phi -> phi + omega t.
pub fn evolve_mode(mode: CogwheelMode, t: f64) -> Result<LinearOperator> {
    if !t.is_finite() {
        return Err(EngineError::InvalidDimension("time must be finite".into()));
    }
    let basis = mode_basis(mode.dim)?;
    let diag: Vec<C64> = (0..mode.dim)
        .map(|n| C64::from_polar(1.0, mode.omega * t * n as f64))
        .collect();
    LinearOperator::from_diagonal(basis, &diag)
}

/// Recovers |n> = (1/sqrt(D)) sum_m e^{-i phi_m n} |phi_m>.
pub fn fock_from_ontic(d: usize, n: usize) -> Result<StateVector> {
    if n >= d {
        return Err(EngineError::IndexOutOfRange(format!(
            "occupation {n} outside 0..{d}"
        )));
    }
    let states = ontic_basis(d)?;
    let mut acc = StateVector::zero(Arc::clone(states[0].basis()));
    let norm = 1.0 / (d as f64).sqrt();
    for (m, s) in states.iter().enumerate() {
        let w = C64::from_polar(norm, -(TAU * m as f64 / d as f64) * n as f64);
        acc = acc.add(&s.scale(w))?;
    }
    Ok(acc)
}

/// Truncated, renormalized coherent state |z> ~ sum_n z^n / sqrt(n!) |n>.
///
/// Requires |z|^2 <= D/4 so the truncation tail stays below ~1e-6.
pub fn coherent_state(d: usize, z: C64) -> Result<StateVector> {
    let basis = mode_basis(d)?;
    if z.norm_sqr() > d as f64 / 4.0 {
        return Err(EngineError::TruncationUnsound(format!(
            "|z|^2 = {:.3} exceeds D/4 = {:.3}",
            z.norm_sqr(),
            d as f64 / 4.0
        )));
    }
    let mut amps = Vec::with_capacity(d);
    let mut term = C64::new(1.0, 0.0); // z^n / sqrt(n!)
    for n in 0..d {
        if n > 0 {
            term = term * z / C64::new((n as f64).sqrt(), 0.0);
        }
        amps.push(term);
    }
    StateVector::new(basis, amps)?.normalized()
}

/// <z|z'> for the truncated, renormalized coherent states.
pub fn coherent_overlap(d: usize, z: C64, zp: C64) -> Result<C64> {
    let a = coherent_state(d, z)?;
    let b = coherent_state(d, zp)?;
    a.inner(&b)
}

/// Exact overlap modulus exp(-|z - z'|^2 / 2) of untruncated coherent states.
pub fn coherent_overlap_exact_modulus(z: C64, zp: C64) -> f64 {
    (-(z - zp).norm_sqr() / 2.0).exp()
}

/// Result of projecting fermionic phase states onto occupation `n`.
#[derive(Debug, Clone)]
pub struct NilpotencyReport {
    /// Projection norms indexed by target occupation n = 0..max_n.
    pub projection_norms: Vec<f64>,
    /// Number of lattice phases used for the Fourier projection.
    pub phase_count: usize,
}

/// Builds phase states from a single fermionic (nilpotent) creation
/// operator and Fourier-projects onto occupations n = 0..=max_n. The
/// projections vanish for n >= 2 because (c†)^2 = 0.
pub fn fermion_phase_constraint_demo(max_n: usize) -> Result<NilpotencyReport> {
    let phase_count = (max_n + 2).max(8);
    let basis = FockBasis::single(ModeKind::Fermionic)?;
    let cdag = basis.lift(0, &fermion_lowering_matrix(), true)?.adjoint();
    let vacuum = StateVector::basis_state(Arc::clone(&basis), &[0])?;

    // |phi> = (1/sqrt(2)) (1 + e^{i phi} c†) |0>, the two-level phase state.
    let phase_states: Vec<StateVector> = (0..phase_count)
        .map(|m| {
            let phi = TAU * m as f64 / phase_count as f64;
            let excited = cdag.apply(&vacuum)?;
            let s = vacuum.add(&excited.scale(C64::from_polar(1.0, phi)))?;
            Ok(s.scale(C64::new(1.0 / 2f64.sqrt(), 0.0)))
        })
        .collect::<Result<_>>()?;

    let mut projection_norms = Vec::with_capacity(max_n + 1);
    for n in 0..=max_n {
        let mut acc = StateVector::zero(Arc::clone(&basis));
        for (m, s) in phase_states.iter().enumerate() {
            let phi = TAU * m as f64 / phase_count as f64;
            let w = C64::from_polar(1.0 / phase_count as f64, -phi * n as f64);
            acc = acc.add(&s.scale(w))?;
        }
        projection_norms.push(acc.norm());
    }
    Ok(NilpotencyReport {
        projection_norms,
        phase_count,
    })
}

/// Residual ||b|phi> - e^{i phi}|phi>|| of the one-sided beable on a phase
/// state; equals 1/sqrt(D) exactly (the truncation tail).
pub fn sg_residual(d: usize, phi: PhaseLabel) -> Result<f64> {
    let b = beable_sg(d)?;
    let s = phase_state(d, phi)?;
    let lhs = b.apply(&s)?;
    let rhs = s.scale(C64::from_polar(1.0, phi.phi()));
    lhs.distance(&rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn phase_state_d2_uniform_and_alternating() {
        let plus = phase_state(2, PhaseLabel::new(0.0)).unwrap();
        let r = 1.0 / 2f64.sqrt();
        assert!((plus.amplitudes()[0] - c(r, 0.0)).norm() < 1e-15);
        assert!((plus.amplitudes()[1] - c(r, 0.0)).norm() < 1e-15);
        let minus = phase_state(2, PhaseLabel::new(PI)).unwrap();
        assert!((minus.amplitudes()[1] - c(-r, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn phase_state_d4_quarter_turn_amplitudes() {
        let s = phase_state(4, PhaseLabel::new(PI / 2.0)).unwrap();
        let expect = [c(0.5, 0.0), c(0.0, 0.5), c(-0.5, 0.0), c(0.0, -0.5)];
        for (a, e) in s.amplitudes().iter().zip(expect) {
            assert!((a - e).norm() < 1e-13);
        }
    }

    #[test]
    fn phase_state_unit_norm() {
        for d in 2..20 {
            let s = phase_state(d, PhaseLabel::new(1.234)).unwrap();
            assert!((s.norm() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn ontic_basis_orthonormal_small() {
        let states = ontic_basis(2).unwrap();
        assert!(states[0].inner(&states[1]).unwrap().norm() < 1e-15);
        let five = ontic_basis(5).unwrap();
        assert!(five[0].inner(&five[1]).unwrap().norm() < 1e-13);
    }

    #[test]
    fn ontic_basis_complete_d3() {
        let states = ontic_basis(3).unwrap();
        // sum_m |phi_m><phi_m| = I.
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = c(0.0, 0.0);
                for s in &states {
                    acc += s.amplitudes()[i] * s.amplitudes()[j].conj();
                }
                let expect = if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) };
                assert!((acc - expect).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn beable_sg_shifts_down_and_kills_vacuum() {
        let b = beable_sg(3).unwrap();
        let two = StateVector::basis_state(Arc::clone(b.basis()), &[2]).unwrap();
        let one = StateVector::basis_state(Arc::clone(b.basis()), &[1]).unwrap();
        assert!(b.apply(&two).unwrap().distance(&one).unwrap() < 1e-14);
        let vac = StateVector::basis_state(Arc::clone(b.basis()), &[0]).unwrap();
        assert!(b.apply(&vac).unwrap().norm() < 1e-15);
    }

    #[test]
    fn beable_sg_residual_is_inverse_sqrt_d() {
        for d in [2usize, 4, 9, 16] {
            for m in 0..d.min(5) {
                let r = sg_residual(d, PhaseLabel::lattice(m, d)).unwrap();
                assert!((r - 1.0 / (d as f64).sqrt()).abs() < 1e-12, "D={d} m={m}");
            }
        }
    }

    #[test]
    fn beable_cyclic_eigenrelation() {
        let b = beable_cyclic(4).unwrap();
        let s = phase_state(4, PhaseLabel::lattice(1, 4)).unwrap();
        let lhs = b.apply(&s).unwrap();
        let rhs = s.scale(c(0.0, 1.0)); // e^{i pi/2} = i
        assert!(lhs.distance(&rhs).unwrap() < 1e-13);

        let b2 = beable_cyclic(2).unwrap();
        let s0 = phase_state(2, PhaseLabel::lattice(0, 2)).unwrap();
        assert!(b2.apply(&s0).unwrap().distance(&s0).unwrap() < 1e-14);
    }

    #[test]
    fn beable_cyclic_is_unitary() {
        for d in [2usize, 3, 7] {
            let b = beable_cyclic(d).unwrap();
            assert!(b.mul(&b.adjoint()).unwrap().deviation_from_identity() < 1e-15);
        }
    }

    #[test]
    fn projector_beable_matches_cyclic() {
        for d in [2usize, 3, 4, 8] {
            let p = beable_from_projectors(d).unwrap();
            let cyc = beable_cyclic(d).unwrap();
            assert!(p.max_abs_diff(&cyc).unwrap() < 1e-12, "D={d}");
        }
    }

    #[test]
    fn projector_beable_vs_sg_wraparound_element() {
        // projector-sum = sg + |D-1><0|, a single wraparound entry.
        for d in [3usize, 4] {
            let p = beable_from_projectors(d).unwrap();
            let sg = beable_sg(d).unwrap();
            let diff = p.sub(&sg).unwrap();
            assert!((diff.frobenius_norm() - 1.0).abs() < 1e-12);
            assert!((diff.entry(d - 1, 0) - c(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn evolution_advances_lattice_index() {
        // D=4, omega=1, t=pi/2: |phi_0> -> |phi_1>; oracle by direct
        // diagonal phase multiplication.
        let mode = CogwheelMode::new(4, 1.0).unwrap();
        let u = evolve_mode(mode, PI / 2.0).unwrap();
        let s0 = phase_state(4, PhaseLabel::lattice(0, 4)).unwrap();
        let s1 = phase_state(4, PhaseLabel::lattice(1, 4)).unwrap();
        assert!(u.apply(&s0).unwrap().distance(&s1).unwrap() < 1e-13);
    }

    #[test]
    fn evolution_zero_time_is_identity() {
        let mode = CogwheelMode::new(6, 2.5).unwrap();
        let u = evolve_mode(mode, 0.0).unwrap();
        assert!(u.deviation_from_identity() < 1e-15);
    }

    #[test]
    fn evolution_full_period_returns_state_up_to_phase() {
        let mode = CogwheelMode::new(3, 2.0).unwrap();
        let u = evolve_mode(mode, PI).unwrap(); // omega t = 2 pi
        for m in 0..3 {
            let s = phase_state(3, PhaseLabel::lattice(m, 3)).unwrap();
            let overlap = s.inner(&u.apply(&s).unwrap()).unwrap();
            assert!((overlap.norm() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn evolution_arbitrary_time_phase_advance() {
        let mode = CogwheelMode::new(5, 1.7).unwrap();
        let t = 0.3721;
        let u = evolve_mode(mode, t).unwrap();
        let phi = PhaseLabel::new(2.1);
        let s = phase_state(5, phi).unwrap();
        let target = phase_state(5, PhaseLabel::new(phi.phi() + mode.omega * t)).unwrap();
        assert!(u.apply(&s).unwrap().distance(&target).unwrap() < 1e-12);
    }

    #[test]
    fn fock_from_ontic_recovers_number_states() {
        for (d, n) in [(3usize, 1usize), (2, 0), (5, 4)] {
            let got = fock_from_ontic(d, n).unwrap();
            let want = StateVector::basis_state(Arc::clone(got.basis()), &[n]).unwrap();
            assert!(got.distance(&want).unwrap() < 1e-13, "D={d} n={n}");
        }
        assert!(fock_from_ontic(3, 3).is_err());
    }

    #[test]
    fn coherent_overlap_gaussian_formula() {
        let ov = coherent_overlap(30, c(1.0, 0.0), c(-1.0, 0.0)).unwrap();
        assert!((ov.norm() - (-2.0f64).exp()).abs() < 1e-6);
    }

    #[test]
    fn coherent_self_overlap_and_vacuum() {
        let ov = coherent_overlap(20, c(0.7, 0.3), c(0.7, 0.3)).unwrap();
        assert!((ov.norm() - 1.0).abs() < 1e-13);
        let vac = coherent_state(30, c(0.0, 0.0)).unwrap();
        let zero = StateVector::basis_state(Arc::clone(vac.basis()), &[0]).unwrap();
        assert!(vac.distance(&zero).unwrap() < 1e-15);
    }

    #[test]
    fn coherent_truncation_guard() {
        assert!(matches!(
            coherent_state(4, c(2.0, 0.0)),
            Err(EngineError::TruncationUnsound(_))
        ));
    }

    #[test]
    fn nilpotency_projections_vanish_above_one() {
        let rep = fermion_phase_constraint_demo(3).unwrap();
        assert!(rep.projection_norms[0] > 0.1);
        assert!(rep.projection_norms[1] > 0.1);
        assert!(rep.projection_norms[2] < 1e-15);
        assert!(rep.projection_norms[3] < 1e-15);
    }
}
