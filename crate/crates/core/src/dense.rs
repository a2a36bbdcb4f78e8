//! Exact ground state by dense symmetric diagonalization.

use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::civector::CIVector;
use crate::determinant::Determinant;
use crate::error::{Error, Result};
use crate::hamiltonian::build_hamiltonian;
use crate::integrals::IntegralSet;
use crate::rdm::occupations;
use crate::SubspaceResult;

/// Largest determinant count the dense solver accepts.
pub const DENSE_LIMIT: usize = 20_000;

/// Flip the sign of `v` so that its largest-magnitude component (first on ties) is positive.
pub fn fix_sign(v: &mut [f64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v.get(best).is_some_and(|x| *x < 0.0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Lowest eigenpair of a dense symmetric row-major `n x n` matrix.
pub fn lowest_eigenpair(n: usize, dense: Vec<f64>) -> (f64, Vec<f64>) {
    let m = DMatrix::from_row_slice(n, n, &dense);
    let eig = SymmetricEigen::new(m);
    let mut k = 0;
    for i in 1..n {
        if eig.eigenvalues[i] < eig.eigenvalues[k] {
            k = i;
        }
    }
    let mut v: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
    fix_sign(&mut v);
    (eig.eigenvalues[k], v)
}

/// All eigenvalues ascending.
pub fn eigenvalues(n: usize, dense: Vec<f64>) -> Vec<f64> {
    let m = DMatrix::from_row_slice(n, n, &dense);
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Exact lowest eigenpair of `H` over `dets`.
pub fn dense_fci_oracle(dets: &[Determinant], s: &IntegralSet) -> Result<SubspaceResult> {
    if dets.is_empty() {
        return Err(Error::Input("empty determinant list"));
    }
    if dets.len() > DENSE_LIMIT {
        return Err(Error::Capacity {
            what: "dense determinant count",
            size: dets.len(),
            limit: DENSE_LIMIT,
        });
    }
    let h = build_hamiltonian(dets, s)?;
    let (energy, coeffs) = lowest_eigenpair(dets.len(), h.to_dense());
    let civector = CIVector::new(dets.to_vec(), coeffs)?;
    let (occ_alpha, occ_beta) = occupations(&civector, s.n_orb());
    Ok(SubspaceResult {
        energy,
        civector,
        occ_alpha,
        occ_beta,
        residual: 0.0,
    })
}
