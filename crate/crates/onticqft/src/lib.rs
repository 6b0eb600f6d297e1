//! Truncated Fock-space engine for ontological ("cogwheel") states and
//! beable operators in non-interacting quantum field theories.
//!
//! The crate builds finite-dimensional mode bases for real scalar, complex
//! scalar, massive vector, and massless Weyl-fermion theories, constructs
//! the phase-state basis and the three beable realizations on each mode,
//! and numerically certifies the identities those constructions satisfy:
//! orthonormality and completeness of the ontic basis, permutation of
//! ontic states under commensurate time evolution, eigenrelations of the
//! cyclic beables, and the deliberate failures (coherent-state overlaps,
//! truncated commutators, bosonic Dirac-style building blocks) that mark
//! the boundaries of the construction.
//!
//! Layout:
//! - [`fock`]: mixed-radix occupation bases, sparse operators, states
//! - [`cogwheel`]: single-mode phase states, beables, periodic evolution
//! - [`bosons`]: multimode theories over momentum lattices (1/2/3/6 families)
//! - [`fermions`]: gamma matrices, helicity spinors, and the fermion ring
//!   with its sea state and shift evolution
//! - [`verify`]: named checks, suites, and deterministic JSON reports
pub mod bosons;
pub mod cogwheel;
pub mod error;
pub mod fermions;
pub mod fock;
pub mod verify;

pub use error::{EngineError, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Crate version stamped into reports.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
