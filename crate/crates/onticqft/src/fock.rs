//! Operator kernel: per-mode creation/annihilation operators, tensor
//! composition of modes (with Jordan-Wigner sign strings for fermions),
//! and sparse operator arithmetic.

use std::sync::Arc;

use sprs::{CsMat, TriMat};

use crate::error::{EngineError, Result};
use crate::C64;

/// Default cap on the number of amplitudes in a composite basis.
pub const DIM_CAP: usize = 1 << 20;
/// Default cap on the number of fermionic modes in one basis.
pub const FERMION_MODE_CAP: usize = 14;

/// Entries with modulus below this are dropped after arithmetic.
const PRUNE_EPS: f64 = 1e-15;

/// A single mode of the composite basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeKind {
    /// Truncated harmonic mode with `dim` levels (occupations 0..dim-1).
    Bosonic { dim: usize },
    /// Two-level mode obeying canonical anticommutation relations.
    Fermionic,
}

impl ModeKind {
    pub fn dim(&self) -> usize {
        match self {
            ModeKind::Bosonic { dim } => *dim,
            ModeKind::Fermionic => 2,
        }
    }

    pub fn is_fermionic(&self) -> bool {
        matches!(self, ModeKind::Fermionic)
    }
}

/// Ordered list of modes with a mixed-radix occupation index.
///
/// Mode 0 is the fastest-varying digit: the composite index of an
/// occupation tuple (n_0, n_1, ...) is n_0 + d_0*(n_1 + d_1*(...)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockBasis {
    modes: Vec<ModeKind>,
    dim: usize,
}

impl FockBasis {
    pub fn new(modes: Vec<ModeKind>) -> Result<Arc<Self>> {
        let mut dim: usize = 1;
        let mut fermion_count = 0;
        for m in &modes {
            if m.dim() == 0 {
                return Err(EngineError::InvalidDimension(
                    "bosonic mode dimension must be >= 1".into(),
                ));
            }
            if m.is_fermionic() {
                fermion_count += 1;
            }
            dim = dim.checked_mul(m.dim()).ok_or(EngineError::CapacityExceeded {
                what: "composite basis dimension",
                attempted: usize::MAX,
                cap: DIM_CAP,
            })?;
        }
        if dim > DIM_CAP {
            return Err(EngineError::CapacityExceeded {
                what: "composite basis dimension",
                attempted: dim,
                cap: DIM_CAP,
            });
        }
        if fermion_count > FERMION_MODE_CAP {
            return Err(EngineError::CapacityExceeded {
                what: "fermionic mode count",
                attempted: fermion_count,
                cap: FERMION_MODE_CAP,
            });
        }
        Ok(Arc::new(FockBasis { modes, dim }))
    }

    pub fn single(mode: ModeKind) -> Result<Arc<Self>> {
        FockBasis::new(vec![mode])
    }

    /// Concatenates the mode lists of several bases into one composite.
    pub fn compose(parts: &[Arc<FockBasis>]) -> Result<Arc<Self>> {
        let modes = parts
            .iter()
            .flat_map(|p| p.modes.iter().copied())
            .collect::<Vec<_>>();
        FockBasis::new(modes)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modes(&self) -> &[ModeKind] {
        &self.modes
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    /// Decodes a composite index into the occupation tuple.
    pub fn occupations(&self, mut index: usize) -> Vec<usize> {
        let mut occ = Vec::with_capacity(self.modes.len());
        for m in &self.modes {
            let d = m.dim();
            occ.push(index % d);
            index /= d;
        }
        occ
    }

    /// Encodes an occupation tuple back into the composite index.
    pub fn index_of(&self, occ: &[usize]) -> Result<usize> {
        if occ.len() != self.modes.len() {
            return Err(EngineError::LabelShape {
                expected: format!("{} occupations", self.modes.len()),
                got: format!("{}", occ.len()),
            });
        }
        let mut index = 0usize;
        for (m, &n) in self.modes.iter().zip(occ).rev() {
            let d = m.dim();
            if n >= d {
                return Err(EngineError::IndexOutOfRange(format!(
                    "occupation {n} exceeds mode dimension {d}"
                )));
            }
            index = index * d + n;
        }
        Ok(index)
    }

    /// Lifts a single-mode operator to the composite basis.
    ///
    /// `fermionic_parity` inserts the Jordan-Wigner sign string on all
    /// fermionic modes below `mode`; set it for operators that change
    /// fermion number by an odd amount.
    pub fn lift(
        self: &Arc<Self>,
        mode: usize,
        local: &CsMat<C64>,
        fermionic_parity: bool,
    ) -> Result<LinearOperator> {
        if mode >= self.modes.len() {
            return Err(EngineError::IndexOutOfRange(format!(
                "mode {mode} of {}",
                self.modes.len()
            )));
        }
        let d = self.modes[mode].dim();
        if local.rows() != d || local.cols() != d {
            return Err(EngineError::BasisMismatch(format!(
                "local operator is {}x{}, mode dimension is {d}",
                local.rows(),
                local.cols()
            )));
        }
        // kron(high, low) makes the low factor fastest-varying, matching
        // the mixed-radix index with mode 0 fastest.
        let mut acc: Option<CsMat<C64>> = None;
        for (j, mk) in self.modes.iter().enumerate() {
            let part: CsMat<C64> = if j == mode {
                local.clone()
            } else if fermionic_parity && j < mode && mk.is_fermionic() {
                jw_sign_matrix()
            } else {
                identity_csmat(mk.dim())
            };
            acc = Some(match acc {
                None => part,
                Some(lower) => sprs::kronecker_product(part.view(), lower.view()),
            });
        }
        let mat = acc.unwrap_or_else(|| identity_csmat(1));
        Ok(LinearOperator {
            basis: Arc::clone(self),
            mat,
        })
    }
}

fn identity_csmat(d: usize) -> CsMat<C64> {
    let mut t = TriMat::new((d, d));
    for i in 0..d {
        t.add_triplet(i, i, C64::new(1.0, 0.0));
    }
    t.to_csr()
}

fn jw_sign_matrix() -> CsMat<C64> {
    let mut t = TriMat::new((2, 2));
    t.add_triplet(0, 0, C64::new(1.0, 0.0));
    t.add_triplet(1, 1, C64::new(-1.0, 0.0));
    t.to_csr()
}

/// Single-mode lowering matrix A with A|n> = sqrt(n)|n-1>.
pub fn boson_lowering_matrix(d: usize) -> Result<CsMat<C64>> {
    if d == 0 {
        return Err(EngineError::InvalidDimension(
            "bosonic truncation dimension must be >= 1".into(),
        ));
    }
    let mut t = TriMat::new((d, d));
    for n in 1..d {
        t.add_triplet(n - 1, n, C64::new((n as f64).sqrt(), 0.0));
    }
    Ok(t.to_csr())
}

/// Single fermionic-mode annihilation matrix in the basis (|0>, |1>).
pub fn fermion_lowering_matrix() -> CsMat<C64> {
    let mut t = TriMat::new((2, 2));
    t.add_triplet(0, 1, C64::new(1.0, 0.0));
    t.to_csr()
}

/// Builds (A, A†, N) for one truncated bosonic mode of dimension `d`.
pub fn make_boson_mode(d: usize) -> Result<(LinearOperator, LinearOperator, LinearOperator)> {
    let basis = FockBasis::single(ModeKind::Bosonic { dim: d })?;
    let a = basis.lift(0, &boson_lowering_matrix(d)?, false)?;
    let adag = a.adjoint();
    let n = adag.mul(&a)?;
    Ok((a, adag, n))
}

/// Builds Jordan-Wigner (C_i, C†_i) pairs for `m` fermionic modes on the
/// 2^m-dimensional composite basis.
pub fn make_fermion_modes(m: usize) -> Result<(Arc<FockBasis>, Vec<(LinearOperator, LinearOperator)>)> {
    if m == 0 {
        return Err(EngineError::InvalidDimension(
            "fermionic mode count must be >= 1".into(),
        ));
    }
    let basis = FockBasis::new(vec![ModeKind::Fermionic; m])?;
    let lowering = fermion_lowering_matrix();
    let mut ops = Vec::with_capacity(m);
    for i in 0..m {
        let c = basis.lift(i, &lowering, true)?;
        let cdag = c.adjoint();
        ops.push((c, cdag));
    }
    Ok((basis, ops))
}

/// Complex sparse matrix over a [`FockBasis`].
#[derive(Debug, Clone)]
pub struct LinearOperator {
    basis: Arc<FockBasis>,
    mat: CsMat<C64>,
}

impl LinearOperator {
    pub fn from_triplets(
        basis: Arc<FockBasis>,
        entries: &[(usize, usize, C64)],
    ) -> Result<Self> {
        let d = basis.dim();
        let mut t = TriMat::new((d, d));
        for &(i, j, v) in entries {
            if i >= d || j >= d {
                return Err(EngineError::IndexOutOfRange(format!(
                    "entry ({i},{j}) outside {d}x{d}"
                )));
            }
            t.add_triplet(i, j, v);
        }
        Ok(LinearOperator { basis, mat: t.to_csr() })
    }

    pub fn from_diagonal(basis: Arc<FockBasis>, diag: &[C64]) -> Result<Self> {
        if diag.len() != basis.dim() {
            return Err(EngineError::BasisMismatch(format!(
                "diagonal length {} vs basis dimension {}",
                diag.len(),
                basis.dim()
            )));
        }
        let entries: Vec<_> = diag
            .iter()
            .enumerate()
            .map(|(i, &v)| (i, i, v))
            .collect();
        LinearOperator::from_triplets(basis, &entries)
    }

    pub fn identity(basis: Arc<FockBasis>) -> Self {
        let mat = identity_csmat(basis.dim());
        LinearOperator { basis, mat }
    }

    pub fn zero(basis: Arc<FockBasis>) -> Self {
        let d = basis.dim();
        LinearOperator {
            basis,
            mat: CsMat::zero((d, d)),
        }
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    fn check_same_basis(&self, other: &Self) -> Result<()> {
        if self.basis != other.basis {
            return Err(EngineError::BasisMismatch(
                "operators live on different bases".into(),
            ));
        }
        Ok(())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut t = TriMat::new((self.dim(), self.dim()));
        for (&v, (i, j)) in self.mat.iter() {
            t.add_triplet(j, i, v.conj());
        }
        LinearOperator {
            basis: Arc::clone(&self.basis),
            mat: t.to_csr(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_basis(other)?;
        let mat = &self.mat * &other.mat;
        Ok(LinearOperator {
            basis: Arc::clone(&self.basis),
            mat: prune(mat),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_basis(other)?;
        let mat = &self.mat + &other.mat;
        Ok(LinearOperator {
            basis: Arc::clone(&self.basis),
            mat: prune(mat),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, factor: C64) -> Self {
        LinearOperator {
            basis: Arc::clone(&self.basis),
            mat: self.mat.map(|v| v * factor),
        }
    }

    /// [X, Y] = XY - YX.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// {X, Y} = XY + YX.
    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.add(&other.mul(self)?)
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.mat.get(i, j).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    /// Largest entry modulus.
    pub fn max_abs_entry(&self) -> f64 {
        self.mat.data().iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// max_ij |self - other|.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_abs_entry())
    }

    /// Deviation from the identity, as a max-entry norm.
    pub fn deviation_from_identity(&self) -> f64 {
        self.sub(&LinearOperator::identity(Arc::clone(&self.basis)))
            .expect("same basis")
            .max_abs_entry()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat
            .data()
            .iter()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn nnz(&self) -> usize {
        self.mat.nnz()
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if self.basis != state.basis {
            return Err(EngineError::BasisMismatch(
                "operator and state live on different bases".into(),
            ));
        }
        let mut out = vec![C64::new(0.0, 0.0); self.dim()];
        for (row, vec) in self.mat.outer_iterator().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for (col, &v) in vec.iter() {
                acc += v * state.amplitudes[col];
            }
            out[row] = acc;
        }
        Ok(StateVector {
            basis: Arc::clone(&self.basis),
            amplitudes: out,
        })
    }
}

fn prune(mat: CsMat<C64>) -> CsMat<C64> {
    let (rows, cols) = (mat.rows(), mat.cols());
    let mut t = TriMat::new((rows, cols));
    let mut dirty = false;
    for (&v, (i, j)) in mat.iter() {
        if v.norm() >= PRUNE_EPS {
            t.add_triplet(i, j, v);
        } else {
            dirty = true;
        }
    }
    if dirty {
        t.to_csr()
    } else {
        mat
    }
}

/// Complex amplitude vector over a [`FockBasis`].
#[derive(Debug, Clone)]
pub struct StateVector {
    basis: Arc<FockBasis>,
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn new(basis: Arc<FockBasis>, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(EngineError::BasisMismatch(format!(
                "amplitude count {} vs basis dimension {}",
                amplitudes.len(),
                basis.dim()
            )));
        }
        Ok(StateVector { basis, amplitudes })
    }

    pub fn zero(basis: Arc<FockBasis>) -> Self {
        let d = basis.dim();
        StateVector {
            basis,
            amplitudes: vec![C64::new(0.0, 0.0); d],
        }
    }

    /// Number basis vector |occ>.
    pub fn basis_state(basis: Arc<FockBasis>, occ: &[usize]) -> Result<Self> {
        let idx = basis.index_of(occ)?;
        let mut s = StateVector::zero(basis);
        s.amplitudes[idx] = C64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amplitudes
    }

    /// <self|other>, with compensated (Kahan) summation.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.basis != other.basis {
            return Err(EngineError::BasisMismatch(
                "states live on different bases".into(),
            ));
        }
        let mut sum = C64::new(0.0, 0.0);
        let mut comp = C64::new(0.0, 0.0);
        for (a, b) in self.amplitudes.iter().zip(&other.amplitudes) {
            let term = a.conj() * b - comp;
            let next = sum + term;
            comp = (next - sum) - term;
            sum = next;
        }
        Ok(sum)
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).expect("same basis").re.sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(EngineError::InvalidDimension(
                "cannot normalize the zero vector".into(),
            ));
        }
        Ok(self.scale(C64::new(1.0 / n, 0.0)))
    }

    pub fn scale(&self, factor: C64) -> Self {
        StateVector {
            basis: Arc::clone(&self.basis),
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.basis != other.basis {
            return Err(EngineError::BasisMismatch(
                "states live on different bases".into(),
            ));
        }
        Ok(StateVector {
            basis: Arc::clone(&self.basis),
            amplitudes: self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.norm())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn boson_mode_d2_lowering_entry() {
        let (a, _, _) = make_boson_mode(2).unwrap();
        assert_eq!(a.entry(0, 1), c(1.0, 0.0));
        assert_eq!(a.nnz(), 1);
    }

    #[test]
    fn boson_mode_d4_number_operator() {
        let (_, _, n) = make_boson_mode(4).unwrap();
        for k in 0..4 {
            assert!((n.entry(k, k) - c(k as f64, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn boson_mode_d4_truncated_commutator() {
        // [A, A†] = diag(1,1,1,1-D): direct matrix arithmetic oracle.
        let (a, adag, _) = make_boson_mode(4).unwrap();
        let comm = a.commutator(&adag).unwrap();
        for k in 0..3 {
            assert!((comm.entry(k, k) - c(1.0, 0.0)).norm() < 1e-14);
        }
        assert!((comm.entry(3, 3) - c(-3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn boson_mode_rejects_zero_dimension() {
        assert!(matches!(
            make_boson_mode(0),
            Err(EngineError::InvalidDimension(_))
        ));
    }

    #[test]
    fn single_fermion_mode_matrix() {
        let (_, ops) = make_fermion_modes(1).unwrap();
        let (c0, _) = &ops[0];
        assert_eq!(c0.entry(0, 1), c(1.0, 0.0));
        assert_eq!(c0.entry(0, 0), c(0.0, 0.0));
        assert_eq!(c0.entry(1, 0), c(0.0, 0.0));
        assert_eq!(c0.entry(1, 1), c(0.0, 0.0));
    }

    #[test]
    fn two_fermion_modes_mixed_anticommutator_vanishes() {
        let (_, ops) = make_fermion_modes(2).unwrap();
        let anti = ops[0].0.anticommutator(&ops[1].1).unwrap();
        assert!(anti.max_abs_entry() < 1e-15);
    }

    #[test]
    fn three_fermion_modes_full_car_algebra() {
        let (basis, ops) = make_fermion_modes(3).unwrap();
        let id = LinearOperator::identity(Arc::clone(&basis));
        for i in 0..3 {
            for j in 0..3 {
                let cc = ops[i].0.anticommutator(&ops[j].0).unwrap();
                assert!(cc.max_abs_entry() < 1e-14, "{{C_{i}, C_{j}}} != 0");
                let dd = ops[i].1.anticommutator(&ops[j].1).unwrap();
                assert!(dd.max_abs_entry() < 1e-14);
                let cd = ops[i].0.anticommutator(&ops[j].1).unwrap();
                let expect = if i == j {
                    id.clone()
                } else {
                    LinearOperator::zero(Arc::clone(&basis))
                };
                assert!(cd.max_abs_diff(&expect).unwrap() < 1e-14);
            }
        }
    }

    #[test]
    fn fermion_mode_cap_enforced() {
        assert!(matches!(
            make_fermion_modes(FERMION_MODE_CAP + 1),
            Err(EngineError::CapacityExceeded { cap: 14, .. })
        ));
    }

    #[test]
    fn composite_distinct_boson_modes_commute() {
        let basis = FockBasis::new(vec![ModeKind::Bosonic { dim: 2 }; 2]).unwrap();
        assert_eq!(basis.dim(), 4);
        let low = boson_lowering_matrix(2).unwrap();
        let a0 = basis.lift(0, &low, false).unwrap();
        let a1dag = basis.lift(1, &low, false).unwrap().adjoint();
        assert!(a0.commutator(&a1dag).unwrap().max_abs_entry() < 1e-15);
    }

    #[test]
    fn mixed_composite_index_round_trip() {
        let basis =
            FockBasis::new(vec![ModeKind::Bosonic { dim: 3 }, ModeKind::Fermionic]).unwrap();
        assert_eq!(basis.dim(), 6);
        for i in 0..6 {
            let occ = basis.occupations(i);
            assert_eq!(basis.index_of(&occ).unwrap(), i);
        }
    }

    #[test]
    fn lifted_fermion_pair_anticommutator_is_identity() {
        let (basis, ops) = make_fermion_modes(2).unwrap();
        let anti = ops[0].0.anticommutator(&ops[0].1).unwrap();
        let id = LinearOperator::identity(basis);
        assert!(anti.max_abs_diff(&id).unwrap() < 1e-15);
    }

    #[test]
    fn mixed_composite_boson_fermion_commute() {
        let basis =
            FockBasis::new(vec![ModeKind::Fermionic, ModeKind::Bosonic { dim: 3 }]).unwrap();
        let c0 = basis.lift(0, &fermion_lowering_matrix(), true).unwrap();
        let a1 = basis.lift(1, &boson_lowering_matrix(3).unwrap(), false).unwrap();
        assert!(c0.commutator(&a1).unwrap().max_abs_entry() < 1e-15);
        assert!(c0.commutator(&a1.adjoint()).unwrap().max_abs_entry() < 1e-15);
    }

    #[test]
    fn adjoint_involution_and_product_rule() {
        let (a, adag, n) = make_boson_mode(5).unwrap();
        assert!(a.adjoint().adjoint().max_abs_diff(&a).unwrap() < 1e-15);
        let prod = a.mul(&n).unwrap();
        let rule = n.adjoint().mul(&a.adjoint()).unwrap();
        assert!(prod.adjoint().max_abs_diff(&rule).unwrap() < 1e-13 * 5.0);
        let _ = adag;
    }

    #[test]
    fn dimension_cap_error_reports_attempt() {
        let res = FockBasis::new(vec![ModeKind::Bosonic { dim: 1 << 21 }]);
        match res {
            Err(EngineError::CapacityExceeded { attempted, cap, .. }) => {
                assert_eq!(attempted, 1 << 21);
                assert_eq!(cap, DIM_CAP);
            }
            other => panic!("expected capacity error, got {other:?}"),
        }
    }
}
