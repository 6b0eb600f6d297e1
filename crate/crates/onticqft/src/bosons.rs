//! Multimode assembly for the bosonic theories: real scalar (one operator
//! family), complex scalar (two), massive real vector (three), massive
//! complex vector (six). Builds the momentum lattice, the composite Fock
//! basis with lifted per-(family, mode) operators, multimode ontic states,
//! evolution, beable families, and ontic-basis expansion of arbitrary
//! states.
//!
//! All engine operators are unit-normalized ([a, a†] = 1 below truncation);
//! the conversion factor to continuum-normalized operators is reported by
//! [`alpha_factor`] and never multiplied in.

use std::f64::consts::TAU;
use std::sync::Arc;

use crate::cogwheel::{beable_cyclic, beable_sg, PhaseLabel};
use crate::error::{EngineError, Result};
use crate::fock::{boson_lowering_matrix, FockBasis, LinearOperator, ModeKind, StateVector};
use crate::C64;

/// Cap on the number of states in a Gram / completeness computation.
pub const GRAM_CAP: usize = 4096;

/// Discretized momentum space: spacing, points, and per-point frequency.
#[derive(Debug, Clone)]
pub struct MomentumLattice {
    pub delta_k: f64,
    pub points: Vec<[f64; 3]>,
}

impl MomentumLattice {
    pub fn new(delta_k: f64, points: Vec<[f64; 3]>) -> Self {
        MomentumLattice { delta_k, points }
    }

    /// Evenly spaced points along the z axis, k_i = (i+1) delta_k.
    pub fn axis(delta_k: f64, count: usize) -> Self {
        let points = (1..=count)
            .map(|i| [0.0, 0.0, i as f64 * delta_k])
            .collect();
        MomentumLattice { delta_k, points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// omega = c sqrt(k^2 + mu^2).
pub fn dispersion(k: [f64; 3], c: f64, mu: f64) -> f64 {
    c * (k[0] * k[0] + k[1] * k[1] + k[2] * k[2] + mu * mu).sqrt()
}

/// Conversion factor between continuum-normalized and unit-normalized
/// operators: alpha = dk^{3/2} / ((2 pi)^{3/2} sqrt(c sqrt(k^2 + mu^2))).
pub fn alpha_factor(k: [f64; 3], dk: f64, c: f64, mu: f64) -> Result<f64> {
    if c <= 0.0 {
        return Err(EngineError::InvalidDimension("c must be > 0".into()));
    }
    let root = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2] + mu * mu).sqrt();
    if root == 0.0 {
        return Err(EngineError::SingularDenominator(
            "massless zero mode: k = 0 and mu = 0".into(),
        ));
    }
    Ok(dk.powf(1.5) / (TAU.powf(1.5) * (c * root).sqrt()))
}

/// Field content and discretization parameters of one bosonic theory.
#[derive(Debug, Clone)]
pub struct TheoryDescriptor {
    /// Operator family count: 1 real scalar, 2 complex scalar, 3 real
    /// massive vector, 6 complex massive vector.
    pub family_count: usize,
    pub lattice: MomentumLattice,
    pub c: f64,
    pub mu: f64,
    /// Per-mode truncation dimension.
    pub trunc_dim: usize,
    pub hbar: f64,
}

impl TheoryDescriptor {
    pub fn new(
        family_count: usize,
        lattice: MomentumLattice,
        c: f64,
        mu: f64,
        trunc_dim: usize,
    ) -> Self {
        TheoryDescriptor {
            family_count,
            lattice,
            c,
            mu,
            trunc_dim,
            hbar: 1.0,
        }
    }
}

/// Phase labels for all (family, mode) cogwheels of a theory.
#[derive(Debug, Clone)]
pub struct OnticLabelBosonic {
    /// phases[f][i] is the cogwheel position of family f at lattice point i.
    pub phases: Vec<Vec<PhaseLabel>>,
}

impl OnticLabelBosonic {
    pub fn lattice(indices: &[Vec<usize>], d: usize) -> Self {
        OnticLabelBosonic {
            phases: indices
                .iter()
                .map(|row| row.iter().map(|&m| PhaseLabel::lattice(m, d)).collect())
                .collect(),
        }
    }
}

/// A built bosonic theory: composite basis plus lifted operators.
pub struct Theory {
    pub desc: TheoryDescriptor,
    pub basis: Arc<FockBasis>,
    /// omega_i per lattice point.
    pub omegas: Vec<f64>,
    /// (A, A†, N) per flat mode index f * M + i.
    pub mode_ops: Vec<(LinearOperator, LinearOperator, LinearOperator)>,
    /// H = sum hbar omega_i N_{f,i}, diagonal.
    pub hamiltonian: LinearOperator,
}

/// Which single-mode realization a lifted beable uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeableVariant {
    /// (I + N)^{-1/2} A: the closed-form one-sided beable.
    SusskindGlogower,
    /// Exact cyclic cogwheel shift.
    Cyclic,
}

impl Theory {
    pub fn family_count(&self) -> usize {
        self.desc.family_count
    }

    pub fn mode_count(&self) -> usize {
        self.desc.lattice.len()
    }

    /// Flat index of (family, lattice point); mode 0 is fastest-varying
    /// in the composite mixed-radix index.
    pub fn flat_mode(&self, f: usize, i: usize) -> Result<usize> {
        if f >= self.family_count() || i >= self.mode_count() {
            return Err(EngineError::IndexOutOfRange(format!(
                "(family {f}, mode {i}) outside {}x{}",
                self.family_count(),
                self.mode_count()
            )));
        }
        Ok(f * self.mode_count() + i)
    }
}

/// Builds the composite basis, lifted per-(family, mode) operators, and the
/// diagonal Hamiltonian for a bosonic theory.
pub fn build_theory(desc: TheoryDescriptor) -> Result<Theory> {
    if desc.family_count == 0 || desc.lattice.is_empty() {
        return Err(EngineError::InvalidDimension(
            "theory needs at least one family and one lattice point".into(),
        ));
    }
    let f = desc.family_count;
    let m = desc.lattice.len();
    let d = desc.trunc_dim;
    let basis = FockBasis::new(vec![ModeKind::Bosonic { dim: d }; f * m])?;
    let omegas: Vec<f64> = desc
        .lattice
        .points
        .iter()
        .map(|&k| dispersion(k, desc.c, desc.mu))
        .collect();

    let lowering = boson_lowering_matrix(d)?;
    let mut mode_ops = Vec::with_capacity(f * m);
    for _fam in 0..f {
        for _i in 0..m {
            let flat = mode_ops.len();
            let a = basis.lift(flat, &lowering, false)?;
            let adag = a.adjoint();
            let n = adag.mul(&a)?;
            mode_ops.push((a, adag, n));
        }
    }

    // H is diagonal: sum over modes of hbar omega_i n_{f,i}.
    let diag: Vec<C64> = (0..basis.dim())
        .map(|idx| {
            let occ = basis.occupations(idx);
            let e: f64 = occ
                .iter()
                .enumerate()
                .map(|(flat, &n)| desc.hbar * omegas[flat % m] * n as f64)
                .sum();
            C64::new(e, 0.0)
        })
        .collect();
    let hamiltonian = LinearOperator::from_diagonal(Arc::clone(&basis), &diag)?;

    Ok(Theory {
        desc,
        basis,
        omegas,
        mode_ops,
        hamiltonian,
    })
}

/// Tensor product of single-mode phase states over all (family, mode)
/// cogwheels: amplitude on occupation tuple {n} is
/// prod e^{i phi_{f,i} n_{f,i}} / sqrt(D^{FM}).
pub fn ontic_state(theory: &Theory, label: &OnticLabelBosonic) -> Result<StateVector> {
    let f = theory.family_count();
    let m = theory.mode_count();
    if label.phases.len() != f || label.phases.iter().any(|row| row.len() != m) {
        return Err(EngineError::LabelShape {
            expected: format!("{f}x{m} phases"),
            got: format!(
                "{}x{:?}",
                label.phases.len(),
                label.phases.iter().map(|r| r.len()).collect::<Vec<_>>()
            ),
        });
    }
    let dim = theory.basis.dim();
    let norm = 1.0 / (dim as f64).sqrt();
    let mut amps = Vec::with_capacity(dim);
    for idx in 0..dim {
        let occ = theory.basis.occupations(idx);
        let mut phase = 0.0;
        for (flat, &n) in occ.iter().enumerate() {
            let (fam, i) = (flat / m, flat % m);
            phase += label.phases[fam][i].phi() * n as f64;
        }
        amps.push(C64::from_polar(norm, phase));
    }
    StateVector::new(Arc::clone(&theory.basis), amps)
}

/// All D^{FM} lattice labels, ordered so that label index j enumerates the
/// per-mode lattice positions mixed-radix with mode (0,0) fastest.
pub fn lattice_labels(theory: &Theory) -> Result<Vec<OnticLabelBosonic>> {
    let f = theory.family_count();
    let m = theory.mode_count();
    let d = theory.desc.trunc_dim;
    let total = d.checked_pow((f * m) as u32).ok_or(EngineError::CapacityExceeded {
        what: "ontic lattice size",
        attempted: usize::MAX,
        cap: GRAM_CAP,
    })?;
    if total > GRAM_CAP {
        return Err(EngineError::CapacityExceeded {
            what: "ontic lattice size",
            attempted: total,
            cap: GRAM_CAP,
        });
    }
    let mut labels = Vec::with_capacity(total);
    for mut j in 0..total {
        let mut rows = vec![vec![0usize; m]; f];
        for fam in 0..f {
            for i in 0..m {
                rows[fam][i] = j % d;
                j /= d;
            }
        }
        labels.push(OnticLabelBosonic::lattice(&rows, d));
    }
    Ok(labels)
}

/// The full family of lattice ontic states, in [`lattice_labels`] order.
pub fn ontic_lattice_basis(theory: &Theory) -> Result<Vec<StateVector>> {
    lattice_labels(theory)?
        .iter()
        .map(|l| ontic_state(theory, l))
        .collect()
}

/// U(t) = exp(+i t sum omega_i N_{f,i}); diagonal, advancing every cogwheel
/// of lattice point i by omega_i t.
pub fn evolve(theory: &Theory, t: f64) -> Result<LinearOperator> {
    if !t.is_finite() {
        return Err(EngineError::InvalidDimension("time must be finite".into()));
    }
    let m = theory.mode_count();
    let diag: Vec<C64> = (0..theory.basis.dim())
        .map(|idx| {
            let occ = theory.basis.occupations(idx);
            let phase: f64 = occ
                .iter()
                .enumerate()
                .map(|(flat, &n)| theory.omegas[flat % m] * t * n as f64)
                .sum();
            C64::from_polar(1.0, phase)
        })
        .collect();
    LinearOperator::from_diagonal(Arc::clone(&theory.basis), &diag)
}

/// Predicted label map under evolution: phi_{f,i} -> phi_{f,i} + omega_i t,
/// the same shift for every family at a fixed lattice point.
pub fn evolved_label(theory: &Theory, label: &OnticLabelBosonic, t: f64) -> OnticLabelBosonic {
    let d = theory.desc.trunc_dim;
    OnticLabelBosonic {
        phases: label
            .phases
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(i, p)| p.advanced(theory.omegas[i] * t, d))
                    .collect()
            })
            .collect(),
    }
}

/// Lifted single-mode beable pair (b, b†) acting on factor (family, mode).
pub fn beable_family(
    theory: &Theory,
    f: usize,
    i: usize,
    variant: BeableVariant,
) -> Result<(LinearOperator, LinearOperator)> {
    let flat = theory.flat_mode(f, i)?;
    let local = match variant {
        BeableVariant::SusskindGlogower => beable_sg(theory.desc.trunc_dim)?,
        BeableVariant::Cyclic => beable_cyclic(theory.desc.trunc_dim)?,
    };
    let b = lift_dense_local(theory, flat, &local)?;
    let bdag = b.adjoint();
    Ok((b, bdag))
}

fn lift_dense_local(theory: &Theory, flat: usize, local: &LinearOperator) -> Result<LinearOperator> {
    let d = theory.desc.trunc_dim;
    let mut tri = Vec::new();
    for r in 0..d {
        for c in 0..d {
            let v = local.entry(r, c);
            if v.norm() > 0.0 {
                tri.push((r, c, v));
            }
        }
    }
    let mut t = sprs::TriMat::new((d, d));
    for (r, c, v) in tri {
        t.add_triplet(r, c, v);
    }
    theory.basis.lift(flat, &t.to_csr(), false)
}

/// Expansion of a state over the ontic lattice basis.
pub struct Expansion {
    /// One coefficient per lattice label, in [`lattice_labels`] order.
    pub coefficients: Vec<C64>,
    /// Squared magnitudes.
    pub probabilities: Vec<f64>,
}

impl Expansion {
    pub fn total_probability(&self) -> f64 {
        self.probabilities.iter().sum()
    }
}

/// Coefficients c_L = <ontic(L)|state> over the full ontic lattice.
pub fn expand_in_ontic(theory: &Theory, state: &StateVector) -> Result<Expansion> {
    if state.basis() != &theory.basis {
        return Err(EngineError::BasisMismatch(
            "state does not live on the theory basis".into(),
        ));
    }
    let basis_states = ontic_lattice_basis(theory)?;
    let coefficients: Vec<C64> = basis_states
        .iter()
        .map(|s| s.inner(state))
        .collect::<Result<_>>()?;
    let probabilities = coefficients.iter().map(|c| c.norm_sqr()).collect();
    Ok(Expansion {
        coefficients,
        probabilities,
    })
}

/// Reconstructs sum_L c_L |ontic(L)> from an expansion.
pub fn reconstruct(theory: &Theory, expansion: &Expansion) -> Result<StateVector> {
    let basis_states = ontic_lattice_basis(theory)?;
    let mut acc = StateVector::zero(Arc::clone(&theory.basis));
    for (c, s) in expansion.coefficients.iter().zip(&basis_states) {
        acc = acc.add(&s.scale(*c))?;
    }
    Ok(acc)
}
