//! Slater–Condon matrix elements and sparse Hamiltonian assembly.

use alloc::vec::Vec;

use crate::civector::check_unique;
use crate::determinant::{channel_phase, hop_sign, Bits, Determinant};
use crate::error::Result;
use crate::integrals::IntegralSet;

/// Diagonal element `<D|H|D>`.
pub fn diagonal_element(d: &Determinant, s: &IntegralSet) -> f64 {
    let mut e = s.core_energy();
    for p in Bits(d.alpha) {
        e += s.one_body(p, p);
    }
    for p in Bits(d.beta) {
        e += s.one_body(p, p);
    }
    for mask in [d.alpha, d.beta] {
        for p in Bits(mask) {
            for q in Bits(mask & !crate::determinant::low_bits(p + 1)) {
                e += s.coulomb(p, q) - s.exchange(p, q);
            }
        }
    }
    for p in Bits(d.alpha) {
        for q in Bits(d.beta) {
            e += s.coulomb(p, q);
        }
    }
    e
}

/// Unsigned single-excitation element `i -> a` in a channel whose occupied
/// orbitals other than `i` are `same`, with `other` the opposite-spin mask.
#[inline]
pub(crate) fn single_value(s: &IntegralSet, i: usize, a: usize, same: u64, other: u64) -> f64 {
    let mut v = s.one_body(i, a);
    for k in Bits(same) {
        v += s.two_body(i, a, k, k) - s.two_body(i, k, k, a);
    }
    for k in Bits(other) {
        v += s.two_body(i, a, k, k);
    }
    v
}

/// Unsigned same-spin double element `(i,j) -> (a,b)`.
#[inline]
pub fn same_spin_double_value(s: &IntegralSet, i: usize, j: usize, a: usize, b: usize) -> f64 {
    s.two_body(i, a, j, b) - s.two_body(i, b, j, a)
}

/// `<d1|H|d2>` by the Slater–Condon rules. Exactly symmetric in its arguments.
pub fn matrix_element(d1: &Determinant, d2: &Determinant, s: &IntegralSet) -> f64 {
    let (d1, d2) = if d2 < d1 { (d2, d1) } else { (d1, d2) };
    let xa = d1.alpha ^ d2.alpha;
    let xb = d1.beta ^ d2.beta;
    match (xa.count_ones(), xb.count_ones()) {
        (0, 0) => diagonal_element(d1, s),
        (2, 0) => {
            let i = (d1.alpha & xa).trailing_zeros() as usize;
            let a = (d2.alpha & xa).trailing_zeros() as usize;
            hop_sign(d1.alpha, i, a) * single_value(s, i, a, d1.alpha & d2.alpha, d1.beta)
        }
        (0, 2) => {
            let i = (d1.beta & xb).trailing_zeros() as usize;
            let a = (d2.beta & xb).trailing_zeros() as usize;
            hop_sign(d1.beta, i, a) * single_value(s, i, a, d1.beta & d2.beta, d1.alpha)
        }
        (4, 0) => same_spin_double(d1.alpha, d2.alpha, s),
        (0, 4) => same_spin_double(d1.beta, d2.beta, s),
        (2, 2) => {
            let i = (d1.alpha & xa).trailing_zeros() as usize;
            let a = (d2.alpha & xa).trailing_zeros() as usize;
            let j = (d1.beta & xb).trailing_zeros() as usize;
            let b = (d2.beta & xb).trailing_zeros() as usize;
            hop_sign(d1.alpha, i, a) * hop_sign(d1.beta, j, b) * s.two_body(i, a, j, b)
        }
        _ => 0.0,
    }
}

fn same_spin_double(m1: u64, m2: u64, s: &IntegralSet) -> f64 {
    let mut holes = Bits(m1 & !m2);
    let mut parts = Bits(m2 & !m1);
    let (i, j) = (holes.next().unwrap(), holes.next().unwrap());
    let (a, b) = (parts.next().unwrap(), parts.next().unwrap());
    channel_phase(m1, &[i, j], &[a, b]) * same_spin_double_value(s, i, j, a, b)
}

/// Real symmetric sparse matrix; the diagonal is dense and off-diagonal
/// entries are held once, in the upper triangle, row-compressed.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseHamiltonian {
    diag: Vec<f64>,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseHamiltonian {
    /// From a diagonal and off-diagonal `(row, col, value)` triplets with `row < col`.
    /// Triplets may come in any order; repeated positions are summed.
    pub fn from_parts(diag: Vec<f64>, mut upper: Vec<(usize, usize, f64)>) -> Self {
        let n = diag.len();
        upper.sort_by_key(|a| (a.0, a.1));
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols: Vec<usize> = Vec::with_capacity(upper.len());
        let mut vals: Vec<f64> = Vec::with_capacity(upper.len());
        let mut rows: Vec<usize> = Vec::with_capacity(upper.len());
        for (r, c, v) in upper {
            assert!(
                r < c && c < n,
                "off-diagonal triplet ({r},{c}) outside upper triangle"
            );
            if rows.last() == Some(&r) && cols.last() == Some(&c) {
                *vals.last_mut().unwrap() += v;
            } else {
                rows.push(r);
                cols.push(c);
                vals.push(v);
            }
        }
        let mut k = 0;
        for r in 0..n {
            row_ptr.push(k);
            while k < rows.len() && rows[k] == r {
                k += 1;
            }
        }
        row_ptr.push(k);
        SparseHamiltonian {
            diag,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn dimension(&self) -> usize {
        self.diag.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// Stored off-diagonal entry count (upper triangle).
    pub fn off_diagonal_len(&self) -> usize {
        self.vals.len()
    }

    /// All stored entries `(row, col, value)` with `row <= col`, row-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dimension()).flat_map(move |r| {
            core::iter::once((r, r, self.diag[r])).chain(
                (self.row_ptr[r]..self.row_ptr[r + 1])
                    .map(move |k| (r, self.cols[k], self.vals[k])),
            )
        })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return self.diag[i];
        }
        let (r, c) = if i < j { (i, j) } else { (j, i) };
        let row = &self.cols[self.row_ptr[r]..self.row_ptr[r + 1]];
        match row.binary_search(&c) {
            Ok(k) => self.vals[self.row_ptr[r] + k],
            Err(_) => 0.0,
        }
    }

    /// `y = H x`.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.dimension());
        assert_eq!(y.len(), self.dimension());
        for (yi, (d, xi)) in y.iter_mut().zip(self.diag.iter().zip(x)) {
            *yi = d * xi;
        }
        for r in 0..self.dimension() {
            let xr = x[r];
            let mut acc = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.cols[k];
                let v = self.vals[k];
                acc += v * x[c];
                y[c] += v * xr;
            }
            y[r] += acc;
        }
    }

    /// Dense row-major copy; small matrices only.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dimension();
        let mut m = alloc::vec![0.0; n * n];
        for (r, c, v) in self.entries() {
            m[r * n + c] = v;
            m[c * n + r] = v;
        }
        m
    }
}

fn row_entries(dets: &[Determinant], r: usize, s: &IntegralSet) -> Vec<(usize, usize, f64)> {
    let dr = &dets[r];
    let mut out = Vec::new();
    for (c, dc) in dets.iter().enumerate().skip(r + 1) {
        if (dr.alpha ^ dc.alpha).count_ones() + (dr.beta ^ dc.beta).count_ones() > 4 {
            continue;
        }
        let v = matrix_element(dr, dc, s);
        if v != 0.0 {
            out.push((r, c, v));
        }
    }
    out
}

/// Hamiltonian over `dets` (in the given order). Rejects duplicates.
pub fn build_hamiltonian(dets: &[Determinant], s: &IntegralSet) -> Result<SparseHamiltonian> {
    check_unique(dets)?;
    let n = dets.len();

    #[cfg(feature = "parallel")]
    let (diag, upper) = {
        use rayon::prelude::*;
        let diag: Vec<f64> = dets.par_iter().map(|d| diagonal_element(d, s)).collect();
        let rows: Vec<Vec<(usize, usize, f64)>> = (0..n)
            .into_par_iter()
            .map(|r| row_entries(dets, r, s))
            .collect();
        (diag, rows.into_iter().flatten().collect::<Vec<_>>())
    };

    #[cfg(not(feature = "parallel"))]
    let (diag, upper) = {
        let diag: Vec<f64> = dets.iter().map(|d| diagonal_element(d, s)).collect();
        let upper: Vec<_> = (0..n).flat_map(|r| row_entries(dets, r, s)).collect();
        (diag, upper)
    };

    Ok(SparseHamiltonian::from_parts(diag, upper))
}
