use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::determinant::Determinant;
use crate::error::{Error, Result};
use crate::math;

/// Determinants with real amplitudes, aligned by position.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CIVector {
    dets: Vec<Determinant>,
    coeffs: Vec<f64>,
}

impl CIVector {
    pub fn new(dets: Vec<Determinant>, coeffs: Vec<f64>) -> Result<Self> {
        if dets.len() != coeffs.len() {
            return Err(Error::Input("determinant and coefficient counts differ"));
        }
        check_unique(&dets)?;
        Ok(CIVector { dets, coeffs })
    }

    pub fn single(det: Determinant) -> Self {
        CIVector {
            dets: vec![det],
            coeffs: vec![1.0],
        }
    }

    pub fn len(&self) -> usize {
        self.dets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dets.is_empty()
    }

    pub fn dets(&self) -> &[Determinant] {
        &self.dets
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Determinant, f64)> {
        self.dets.iter().zip(self.coeffs.iter().copied())
    }

    pub fn norm(&self) -> f64 {
        math::sqrt(self.coeffs.iter().map(|c| c * c).sum())
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            self.coeffs.iter_mut().for_each(|c| *c /= n);
        }
    }

    /// Restrict to `keep`, preserving this vector's order, and renormalize.
    pub fn restricted_to(&self, keep: &BTreeSet<Determinant>) -> CIVector {
        let (dets, coeffs) = self
            .iter()
            .filter(|(d, _)| keep.contains(d))
            .map(|(d, c)| (*d, c))
            .unzip();
        let mut v = CIVector { dets, coeffs };
        v.normalize();
        v
    }

    pub fn det_set(&self) -> BTreeSet<Determinant> {
        self.dets.iter().copied().collect()
    }

    pub fn into_parts(self) -> (Vec<Determinant>, Vec<f64>) {
        (self.dets, self.coeffs)
    }
}

pub(crate) fn check_unique(dets: &[Determinant]) -> Result<()> {
    let mut order: Vec<usize> = (0..dets.len()).collect();
    order.sort_unstable_by_key(|&i| (dets[i], i));
    for w in order.windows(2) {
        if dets[w[0]] == dets[w[1]] {
            return Err(Error::DuplicateDeterminant {
                first: w[0],
                second: w[1],
            });
        }
    }
    Ok(())
}
