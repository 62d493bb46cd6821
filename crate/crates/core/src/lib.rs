//! Entanglement entropy and logarithmic negativity of bosonic Gaussian states.
//!
//! Exact values come from symplectic spectra of contraction matrices; the
//! `weak` and `closed_form` modules give the weak-coupling approximations and
//! lattice asymptotics they are compared against.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closed_form;
pub mod error;
pub mod harness;
pub mod lattice;
pub mod linalg;
pub mod model;
pub mod symplectic;
pub mod weak;

pub use error::{Error, Result};
pub use lattice::{Boundary, Lattice2D, Region};
pub use model::{solve_ground_state, QuadraticHamiltonian};
pub use symplectic::{ContractionMatrix, LogBase, SpectrumKind, SymplecticSpectrum, Tolerances};
