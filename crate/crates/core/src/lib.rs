//! Selected configuration interaction over bit-mask Slater determinants.
//!
//! This crate holds the numerical core: integrals with 8-fold symmetry,
//! Slater–Condon matrix elements, sparse Hamiltonian assembly with a Davidson
//! eigensolver, heat-bath CI selection, an excitation-preserving ansatz
//! simulator with shot sampling, configuration recovery, and the hybrid
//! sample/diagonalize/optimize loop that ties them together.
//!
//! It is `no_std` with `alloc`. The `std` feature only unlocks the `parallel`
//! feature (rayon-backed Hamiltonian assembly); results are identical either way.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod ansatz;
pub mod civector;
pub mod davidson;
pub mod dense;
pub mod determinant;
pub mod error;
pub mod hamiltonian;
pub mod hci;
pub mod hivqe;
pub mod integrals;
pub mod rdm;
pub mod recovery;
pub mod rng;
pub mod spsa;

mod math;

pub use ansatz::{AnsatzCircuit, Bitstring, SampleBatch};
pub use civector::CIVector;
pub use determinant::{Determinant, ExcitationInfo};
pub use error::{Error, Result};
pub use hamiltonian::SparseHamiltonian;
pub use hci::{HCIConfig, HeatBathTable};
pub use hivqe::{HIVQEConfig, HIVQETrace};
pub use integrals::IntegralSet;
pub use recovery::ReferenceOccupations;
pub use spsa::SpsaSettings;

/// Ground-state eigenpair of a determinant subspace.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceResult {
    /// Lowest eigenvalue in Hartree.
    pub energy: f64,
    pub civector: CIVector,
    pub occ_alpha: alloc::vec::Vec<f64>,
    pub occ_beta: alloc::vec::Vec<f64>,
    /// Final residual norm (0 for the dense solver).
    pub residual: f64,
}

impl SubspaceResult {
    pub fn n_dets(&self) -> usize {
        self.civector.len()
    }
}
