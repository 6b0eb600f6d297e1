//! Massless Weyl-fermion ontic construction: gamma matrices, helicity
//! spinors, the (direction, sign, ring-site) lattice, site operators as a
//! unitary Bogoliubov-type transform of the momentum modes, the filled-sea
//! reference state, ontic occupation states, shift evolution, and the
//! occupation-number beables.
//!
//! Each (direction, sign) block is simulated independently on a ring of
//! 2K sites with the antiperiodic momentum grid |k|_n = (2 pi / L)(n + 1/2),
//! L = 2K * delta_r. The grid has exactly 2K distinct characters, which
//! makes the site transform unitary and the anticommutator table exact.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use crate::error::{EngineError, Result};
use crate::fock::{
    boson_lowering_matrix, make_fermion_modes, FockBasis, LinearOperator, ModeKind, StateVector,
};
use crate::C64;

// ---------------------------------------------------------------------------
// Gamma matrices and spinors
// ---------------------------------------------------------------------------

pub type Mat4 = [[C64; 4]; 4];
pub type Spinor2 = [C64; 2];

/// The four gamma matrices in the chiral (Weyl) representation.
#[derive(Debug, Clone)]
pub struct GammaSet {
    pub matrices: [Mat4; 4],
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// The chiral-representation gamma matrices, entry by entry.
pub fn gamma_chiral() -> GammaSet {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let mone = c(-1.0, 0.0);
    let i = c(0.0, 1.0);
    let mi = c(0.0, -1.0);
    let g0 = [
        [z, z, mone, z],
        [z, z, z, mone],
        [mone, z, z, z],
        [z, mone, z, z],
    ];
    let g1 = [
        [z, z, z, one],
        [z, z, one, z],
        [z, mone, z, z],
        [mone, z, z, z],
    ];
    let g2 = [
        [z, z, z, mi],
        [z, z, i, z],
        [z, i, z, z],
        [mi, z, z, z],
    ];
    let g3 = [
        [z, z, one, z],
        [z, z, z, mone],
        [mone, z, z, z],
        [z, one, z, z],
    ];
    GammaSet {
        matrices: [g0, g1, g2, g3],
    }
}

fn mat4_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let z = c(0.0, 0.0);
    let mut out = [[z; 4]; 4];
    for r in 0..4 {
        for cc in 0..4 {
            let mut acc = z;
            for k in 0..4 {
                acc += a[r][k] * b[k][cc];
            }
            out[r][cc] = acc;
        }
    }
    out
}

/// One entry of the anticommutator table.
#[derive(Debug, Clone, Copy)]
pub struct CliffordEntry {
    /// tr({g_mu, g_nu}) / 4, the would-be scalar coefficient.
    pub coefficient: C64,
    /// max entry |{g_mu, g_nu} - coefficient * I|.
    pub residual: f64,
}

/// Computes all 16 anticommutators {g_mu, g_nu} and reports, for each,
/// the scalar coefficient and the deviation from a multiple of I. The
/// metric signature is read off the diagonal, not assumed.
pub fn clifford_check(g: &GammaSet) -> [[CliffordEntry; 4]; 4] {
    let mut table = [[CliffordEntry {
        coefficient: c(0.0, 0.0),
        residual: 0.0,
    }; 4]; 4];
    for mu in 0..4 {
        for nu in 0..4 {
            let ab = mat4_mul(&g.matrices[mu], &g.matrices[nu]);
            let ba = mat4_mul(&g.matrices[nu], &g.matrices[mu]);
            let mut trace = c(0.0, 0.0);
            for r in 0..4 {
                trace += ab[r][r] + ba[r][r];
            }
            let coeff = trace / c(4.0, 0.0);
            let mut residual = 0.0f64;
            for r in 0..4 {
                for cc in 0..4 {
                    let mut v = ab[r][cc] + ba[r][cc];
                    if r == cc {
                        v -= coeff;
                    }
                    residual = residual.max(v.norm());
                }
            }
            table[mu][nu] = CliffordEntry {
                coefficient: coeff,
                residual,
            };
        }
    }
    table
}

fn k_norm(k: [f64; 3]) -> f64 {
    (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt()
}

/// Helicity spinors u±(k), unit-normalized eigenvectors of sigma.k_hat.
///
/// The closed form is singular where |k| -+ k_z vanishes; with
/// `limit_mode` the continuity value (0, 1) is returned there, otherwise
/// that spinor is an error.
pub fn weyl_spinors(k: [f64; 3], limit_mode: bool) -> Result<(Spinor2, Spinor2)> {
    let kn = k_norm(k);
    if kn == 0.0 {
        return Err(EngineError::UndefinedDirection);
    }
    let u_plus = weyl_spinor(k, 1, limit_mode)?;
    let u_minus = weyl_spinor(k, -1, limit_mode)?;
    Ok((u_plus, u_minus))
}

/// A single helicity spinor u^h(k), h = +1 or -1.
pub fn weyl_spinor(k: [f64; 3], helicity: i8, limit_mode: bool) -> Result<Spinor2> {
    let kn = k_norm(k);
    if kn == 0.0 {
        return Err(EngineError::UndefinedDirection);
    }
    let h = helicity as f64;
    let denom_sq = 2.0 * kn * (kn + h * k[2]);
    if denom_sq <= kn * kn * 1e-28 {
        if limit_mode {
            // Continuity along any path into k = -h * z_hat |k| gives (0, 1).
            return Ok([c(0.0, 0.0), c(1.0, 0.0)]);
        }
        return Err(EngineError::SingularDenominator(format!(
            "u{} at k_z = {}|k|: denominator 2|k|(|k| {} k_z) vanishes; \
             enable limit mode for the continuity value (0, 1)",
            if helicity > 0 { "+" } else { "-" },
            if helicity > 0 { "-" } else { "+" },
            if helicity > 0 { "+" } else { "-" },
        )));
    }
    let norm = 1.0 / denom_sq.sqrt();
    Ok([
        c(norm * (h * kn + k[2]), 0.0),
        c(norm * k[0], norm * k[1]),
    ])
}

/// sigma . k applied to a 2-spinor.
pub fn sigma_dot_apply(k: [f64; 3], u: &Spinor2) -> Spinor2 {
    let kz = c(k[2], 0.0);
    let kminus = c(k[0], -k[1]); // k_x - i k_y
    let kplus = c(k[0], k[1]);
    [kz * u[0] + kminus * u[1], kplus * u[0] - kz * u[1]]
}

/// Residuals of the Weyl plane wave u^h e^{i(k.x - w t)} for both
/// frequency signs w = ±c|k|; the solving sign is determined numerically.
#[derive(Debug, Clone, Copy)]
pub struct WeylResidual {
    /// +1 if w = +c|k| solves the equation for this helicity, else -1.
    pub solving_sign: i8,
    pub residual_solving: f64,
    pub residual_opposite: f64,
}

/// Evaluates the 2x2 Weyl operator symbol on the plane wave and reports
/// which frequency sign annihilates it.
pub fn weyl_plane_wave_residual(k: [f64; 3], helicity: i8) -> Result<WeylResidual> {
    let kn = k_norm(k);
    if kn == 0.0 {
        return Err(EngineError::UndefinedDirection);
    }
    let u = weyl_spinor(k, helicity, true)?;
    // Symbol of the Weyl operator on e^{i(k.x - w t)}: i (sigma.k - (w/c) I)
    // (an overall i; the residual is ||(sigma.k - (w/c)) u||).
    let residual_for = |omega_over_c: f64| -> f64 {
        let sk = sigma_dot_apply(k, &u);
        let r0 = sk[0] - c(omega_over_c, 0.0) * u[0];
        let r1 = sk[1] - c(omega_over_c, 0.0) * u[1];
        (r0.norm_sqr() + r1.norm_sqr()).sqrt()
    };
    let plus = residual_for(kn);
    let minus = residual_for(-kn);
    if plus <= minus {
        Ok(WeylResidual {
            solving_sign: 1,
            residual_solving: plus,
            residual_opposite: minus,
        })
    } else {
        Ok(WeylResidual {
            solving_sign: -1,
            residual_solving: minus,
            residual_opposite: plus,
        })
    }
}

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

/// One discretized direction q_hat with its polar volume weights.
#[derive(Debug, Clone, Copy)]
pub struct Direction {
    pub q_hat: [f64; 3],
    pub theta: f64,
    pub dtheta: f64,
    pub dphi: f64,
}

impl Direction {
    pub fn new(q_hat: [f64; 3], theta: f64, dtheta: f64, dphi: f64) -> Result<Self> {
        let n = k_norm(q_hat);
        if (n - 1.0).abs() > 1e-12 {
            return Err(EngineError::InvalidDimension(format!(
                "direction must be a unit vector, |q| = {n}"
            )));
        }
        if q_hat[2] < 0.0 {
            return Err(EngineError::InvalidDimension(
                "direction must have q_z >= 0".into(),
            ));
        }
        Ok(Direction {
            q_hat,
            theta,
            dtheta,
            dphi,
        })
    }

    pub fn z_axis() -> Self {
        Direction {
            q_hat: [0.0, 0.0, 1.0],
            theta: PI / 2.0,
            dtheta: PI,
            dphi: TAU,
        }
    }

    /// beta = sin(theta) dtheta dphi dr, the conversion constant between
    /// the continuum beable normalization and the unit-normalized engine.
    pub fn beta(&self, delta_r: f64) -> f64 {
        self.theta.sin() * self.dtheta * self.dphi * delta_r
    }
}

/// Discretization of the fermionic ontic label space (q_hat, s, r).
#[derive(Debug, Clone)]
pub struct FermionGeometry {
    pub directions: Vec<Direction>,
    /// Momenta per (direction, sign); the ring has 2K sites.
    pub k_count: usize,
    pub delta_r: f64,
    pub c: f64,
}

impl FermionGeometry {
    pub fn new(directions: Vec<Direction>, k_count: usize, delta_r: f64, c: f64) -> Result<Self> {
        if k_count == 0 {
            return Err(EngineError::InvalidDimension("K must be >= 1".into()));
        }
        if delta_r <= 0.0 || c <= 0.0 {
            return Err(EngineError::InvalidDimension(
                "delta_r and c must be > 0".into(),
            ));
        }
        Ok(FermionGeometry {
            directions,
            k_count,
            delta_r,
            c,
        })
    }

    /// Single direction along z, unit spacing.
    pub fn ring(k_count: usize, delta_r: f64, c: f64) -> Result<Self> {
        FermionGeometry::new(vec![Direction::z_axis()], k_count, delta_r, c)
    }

    pub fn ring_length(&self) -> f64 {
        2.0 * self.k_count as f64 * self.delta_r
    }

    pub fn site_count(&self) -> usize {
        2 * self.k_count
    }

    /// Antiperiodic momentum grid |k|_n = (2 pi / L)(n + 1/2), n = 0..K-1.
    pub fn momenta(&self) -> Vec<f64> {
        let l = self.ring_length();
        (0..self.k_count)
            .map(|n| TAU / l * (n as f64 + 0.5))
            .collect()
    }

    /// Ring sites r_j = j delta_r - L/2, j = 0..2K-1.
    pub fn sites(&self) -> Vec<f64> {
        let l = self.ring_length();
        (0..self.site_count())
            .map(|j| j as f64 * self.delta_r - l / 2.0)
            .collect()
    }
}

// ---------------------------------------------------------------------------
// One (direction, sign) block
// ---------------------------------------------------------------------------

/// The Fock-space machinery of one (q_hat, s) block: 2K fermionic momentum
/// modes (a1 then a2 in mode order), the ring-site operators, and the sea.
pub struct FermionBlock {
    pub geometry: FermionGeometry,
    pub direction: usize,
    /// s = +1 or -1.
    pub sign: i8,
    pub basis: Arc<FockBasis>,
    /// (a1_n, a1†_n) for n = 0..K-1.
    pub a1: Vec<(LinearOperator, LinearOperator)>,
    /// (a2_n, a2†_n) for n = 0..K-1.
    pub a2: Vec<(LinearOperator, LinearOperator)>,
    /// (Psi_j, Psi†_j) per ring site j = 0..2K-1.
    pub psi: Vec<(LinearOperator, LinearOperator)>,
}

impl FermionBlock {
    pub fn new(geometry: FermionGeometry, direction: usize, sign: i8) -> Result<Self> {
        if direction >= geometry.directions.len() {
            return Err(EngineError::IndexOutOfRange(format!(
                "direction {direction} of {}",
                geometry.directions.len()
            )));
        }
        if sign != 1 && sign != -1 {
            return Err(EngineError::InvalidDimension("sign must be +1 or -1".into()));
        }
        let k = geometry.k_count;
        let (basis, modes) = make_fermion_modes(2 * k)?;
        let a1: Vec<_> = modes[..k].to_vec();
        let a2: Vec<_> = modes[k..].to_vec();

        let t = site_transform(&geometry, sign);
        let mut psi = Vec::with_capacity(2 * k);
        for row in &t {
            let mut op = LinearOperator::zero(Arc::clone(&basis));
            for n in 0..k {
                op = op.add(&a1[n].0.scale(row[n]))?;
                op = op.add(&a2[n].1.scale(row[k + n]))?;
            }
            let opdag = op.adjoint();
            psi.push((op, opdag));
        }
        Ok(FermionBlock {
            geometry,
            direction,
            sign,
            basis,
            a1,
            a2,
            psi,
        })
    }

    pub fn site_count(&self) -> usize {
        self.geometry.site_count()
    }

    /// The 2K x 2K matrix mapping (a1_n, a2†_n) to Psi_j; unitary by
    /// construction of the antiperiodic grid.
    pub fn transform_matrix(&self) -> Vec<Vec<C64>> {
        site_transform(&self.geometry, self.sign)
    }

    /// All a2 momentum modes filled, in ascending-n application order.
    pub fn sea_state(&self) -> Result<StateVector> {
        let vacuum = StateVector::basis_state(
            Arc::clone(&self.basis),
            &vec![0; 2 * self.geometry.k_count],
        )?;
        let mut s = vacuum;
        for (_, a2dag) in &self.a2 {
            s = a2dag.apply(&s)?;
        }
        Ok(s)
    }

    /// Ontic occupation state: Psi†_j factors applied in ascending site
    /// order to the sea (which all Psi_j annihilate).
    pub fn ontic_state(&self, label: &[usize]) -> Result<StateVector> {
        if label.len() != self.site_count() {
            return Err(EngineError::LabelShape {
                expected: format!("{} site occupations", self.site_count()),
                got: format!("{}", label.len()),
            });
        }
        if label.iter().any(|&n| n > 1) {
            return Err(EngineError::IndexOutOfRange(
                "fermionic occupations must be 0 or 1".into(),
            ));
        }
        let mut s = self.sea_state()?;
        for (j, &n) in label.iter().enumerate() {
            if n == 1 {
                s = self.psi[j].1.apply(&s)?;
            }
        }
        Ok(s)
    }

    /// All 2^{2K} ontic occupation states, label bits in site order
    /// (site 0 is the least significant bit).
    pub fn ontic_basis(&self) -> Result<Vec<StateVector>> {
        let sites = self.site_count();
        (0..1usize << sites)
            .map(|bits| {
                let label: Vec<usize> = (0..sites).map(|j| (bits >> j) & 1).collect();
                self.ontic_state(&label)
            })
            .collect()
    }

    /// U(t) = exp(-i t sum_n c|k|_n (a1†a1 + a2†a2 - 1)); diagonal, with
    /// the normal-ordering shift making the sea an eigenstate of phase 1.
    pub fn evolution_operator(&self, t: f64) -> Result<LinearOperator> {
        if !t.is_finite() {
            return Err(EngineError::InvalidDimension("time must be finite".into()));
        }
        let momenta = self.geometry.momenta();
        let cc = self.geometry.c;
        let k = self.geometry.k_count;
        let diag: Vec<C64> = (0..self.basis.dim())
            .map(|idx| {
                let occ = self.basis.occupations(idx);
                let e: f64 = (0..k)
                    .map(|n| cc * momenta[n] * (occ[n] as f64 + occ[k + n] as f64 - 1.0))
                    .sum();
                C64::from_polar(1.0, -e * t)
            })
            .collect();
        LinearOperator::from_diagonal(Arc::clone(&self.basis), &diag)
    }

    /// Checks that `t` is an integer number of site steps delta_r / c and
    /// returns that integer.
    pub fn commensurate_steps(&self, t: f64) -> Result<i64> {
        let step = self.geometry.delta_r / self.geometry.c;
        let m = t / step;
        let rounded = m.round();
        if (m - rounded).abs() > 1e-9 {
            return Err(EngineError::Commensurability { t, step });
        }
        Ok(rounded as i64)
    }

    /// Site permutation realized by `m` steps of the evolution: under
    /// U(m delta_r / c) the occupation at site j moves to this site.
    pub fn shifted_site(&self, j: usize, m: i64) -> usize {
        let sites = self.site_count() as i64;
        let shift = -(self.sign as i64) * m;
        (j as i64 + shift).rem_euclid(sites) as usize
    }

    /// Predicted label after `m` steps, plus the number of occupied sites
    /// that wrap the ring boundary (each contributing an antiperiodic sign).
    pub fn shifted_label(&self, label: &[usize], m: i64) -> (Vec<usize>, usize) {
        let sites = self.site_count();
        let mut out = vec![0usize; sites];
        let mut wraps = 0usize;
        for (j, &n) in label.iter().enumerate() {
            if n == 1 {
                let target = self.shifted_site(j, m);
                out[target] = 1;
                // Wrapped iff the unreduced shift leaves the ring range.
                let raw = j as i64 - (self.sign as i64) * m;
                if raw < 0 || raw >= sites as i64 {
                    wraps += 1;
                }
            }
        }
        (out, wraps)
    }

    /// Occupation beable n_op(j) = Psi†_j Psi_j, a projector commuting
    /// with all its siblings.
    pub fn n_op(&self, j: usize) -> Result<LinearOperator> {
        if j >= self.site_count() {
            return Err(EngineError::IndexOutOfRange(format!(
                "site {j} of {}",
                self.site_count()
            )));
        }
        self.psi[j].1.mul(&self.psi[j].0)
    }
}

fn site_transform(geometry: &FermionGeometry, sign: i8) -> Vec<Vec<C64>> {
    let k = geometry.k_count;
    let momenta = geometry.momenta();
    let sites = geometry.sites();
    let norm = 1.0 / (2.0 * k as f64).sqrt();
    let s = sign as f64;
    sites
        .iter()
        .map(|&r| {
            let mut row = vec![c(0.0, 0.0); 2 * k];
            for n in 0..k {
                row[n] = C64::from_polar(norm, -s * momenta[n] * r);
                row[k + n] = C64::from_polar(norm, s * momenta[n] * r);
            }
            row
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Bosonic counterexample
// ---------------------------------------------------------------------------

/// Measured values of the bosonic Dirac-style construction failure.
#[derive(Debug, Clone)]
pub struct DiracFailureReport {
    /// max over (i, j) of the max-entry norm of {B_i, B†_j} - delta_ij I.
    pub max_anticommutator_deviation: f64,
    /// Largest off-diagonal Gram entry of the would-be states B†_j |0>.
    pub max_offdiagonal_gram: f64,
    /// Same anticommutator deviation for the fermionic control block.
    pub fermionic_control_deviation: f64,
}

/// Builds the site combination from bosonic modes and shows the
/// anticommutator is not delta_ij and the would-be states overlap; the
/// fermionic control with identical geometry passes.
pub fn bosonic_dirac_failure_demo(trunc_dim: usize, k_count: usize) -> Result<DiracFailureReport> {
    let geometry = FermionGeometry::ring(k_count, 1.0, 1.0)?;
    let t = site_transform(&geometry, 1);
    let k = k_count;
    let sites = 2 * k;

    // Bosonic copy of the block: 2K truncated modes.
    let basis = FockBasis::new(vec![ModeKind::Bosonic { dim: trunc_dim }; sites])?;
    let lowering = boson_lowering_matrix(trunc_dim)?;
    let modes: Vec<(LinearOperator, LinearOperator)> = (0..sites)
        .map(|i| {
            let a = basis.lift(i, &lowering, false)?;
            let adag = a.adjoint();
            Ok((a, adag))
        })
        .collect::<Result<_>>()?;
    let mut b_ops = Vec::with_capacity(sites);
    for row in &t {
        let mut op = LinearOperator::zero(Arc::clone(&basis));
        for n in 0..k {
            op = op.add(&modes[n].0.scale(row[n]))?;
            op = op.add(&modes[k + n].1.scale(row[k + n]))?;
        }
        let opdag = op.adjoint();
        b_ops.push((op, opdag));
    }
    let id = LinearOperator::identity(Arc::clone(&basis));
    let mut max_dev = 0.0f64;
    for i in 0..sites {
        for j in 0..sites {
            let anti = b_ops[i].0.anticommutator(&b_ops[j].1)?;
            let dev = if i == j {
                anti.max_abs_diff(&id)?
            } else {
                anti.max_abs_entry()
            };
            max_dev = max_dev.max(dev);
        }
    }

    let vacuum = StateVector::basis_state(Arc::clone(&basis), &vec![0; sites])?;
    let would_be: Vec<StateVector> = b_ops
        .iter()
        .map(|(_, bdag)| bdag.apply(&vacuum)?.normalized())
        .collect::<Result<_>>()?;
    let mut max_gram = 0.0f64;
    for i in 0..sites {
        for j in 0..sites {
            if i != j {
                max_gram = max_gram.max(would_be[i].inner(&would_be[j])?.norm());
            }
        }
    }

    // Fermionic control: same transform, CAR modes.
    let block = FermionBlock::new(geometry, 0, 1)?;
    let fid = LinearOperator::identity(Arc::clone(&block.basis));
    let mut control_dev = 0.0f64;
    for i in 0..sites {
        for j in 0..sites {
            let anti = block.psi[i].0.anticommutator(&block.psi[j].1)?;
            let dev = if i == j {
                anti.max_abs_diff(&fid)?
            } else {
                anti.max_abs_entry()
            };
            control_dev = control_dev.max(dev);
        }
    }

    Ok(DiracFailureReport {
        max_anticommutator_deviation: max_dev,
        max_offdiagonal_gram: max_gram,
        fermionic_control_deviation: control_dev,
    })
}
