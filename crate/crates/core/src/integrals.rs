//! One- and two-electron integrals over spatial orbitals.
//!
//! Orbital indices are 0-based throughout the crate; the FCIDUMP reader in the
//! companion crate shifts the 1-based file indices. Two-electron integrals are
//! in chemists' notation `(pq|rs)` and are stored once per 8-fold symmetry
//! class, so every lookup resolves through the same slot.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Largest orbital count a [`crate::Determinant`] can represent.
pub const MAX_ORBITALS: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct IntegralSet {
    n_orb: usize,
    n_elec: usize,
    ms2: i32,
    core_energy: f64,
    one_body: Vec<f64>,
    two_body: Vec<f64>,
}

#[inline]
fn pair(i: usize, j: usize) -> usize {
    let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
    hi * (hi + 1) / 2 + lo
}

/// Lexicographically smallest member of the 8-fold permutation class of `(p,q,r,s)`.
pub fn canonical_index(p: usize, q: usize, r: usize, s: usize) -> (usize, usize, usize, usize) {
    let a = if p <= q { (p, q) } else { (q, p) };
    let b = if r <= s { (r, s) } else { (s, r) };
    if a <= b {
        (a.0, a.1, b.0, b.1)
    } else {
        (b.0, b.1, a.0, a.1)
    }
}

impl IntegralSet {
    /// All-zero integral set.
    pub fn new(n_orb: usize, n_elec: usize, ms2: i32) -> Result<Self> {
        let domain = Error::Domain {
            n_orb,
            n_alpha: (n_elec + ms2.max(0) as usize) / 2,
            n_beta: n_elec.saturating_sub((n_elec + ms2.max(0) as usize) / 2),
        };
        if n_orb == 0 || n_orb > MAX_ORBITALS {
            return Err(domain);
        }
        if ms2.unsigned_abs() as usize > n_elec || (n_elec as i64 + ms2 as i64) % 2 != 0 {
            return Err(domain);
        }
        let n_alpha = (n_elec as i64 + ms2 as i64) as usize / 2;
        let n_beta = n_elec - n_alpha;
        if n_alpha > n_orb || n_beta > n_orb {
            return Err(domain);
        }
        let npair = n_orb * (n_orb + 1) / 2;
        Ok(IntegralSet {
            n_orb,
            n_elec,
            ms2,
            core_energy: 0.0,
            one_body: vec![0.0; n_orb * n_orb],
            two_body: vec![0.0; npair * (npair + 1) / 2],
        })
    }

    pub fn n_orb(&self) -> usize {
        self.n_orb
    }

    pub fn n_elec(&self) -> usize {
        self.n_elec
    }

    pub fn ms2(&self) -> i32 {
        self.ms2
    }

    pub fn n_alpha(&self) -> usize {
        (self.n_elec as i64 + self.ms2 as i64) as usize / 2
    }

    pub fn n_beta(&self) -> usize {
        self.n_elec - self.n_alpha()
    }

    pub fn core_energy(&self) -> f64 {
        self.core_energy
    }

    pub fn set_core_energy(&mut self, e: f64) {
        self.core_energy = e;
    }

    #[inline]
    pub fn one_body(&self, p: usize, q: usize) -> f64 {
        self.one_body[p * self.n_orb + q]
    }

    /// Sets `h(p,q)` and `h(q,p)`.
    pub fn set_one_body(&mut self, p: usize, q: usize, v: f64) {
        assert!(
            p < self.n_orb && q < self.n_orb,
            "orbital index out of range"
        );
        self.one_body[p * self.n_orb + q] = v;
        self.one_body[q * self.n_orb + p] = v;
    }

    #[inline]
    pub fn two_body(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        let a = pair(p, q);
        let b = pair(r, s);
        self.two_body[pair(a, b)]
    }

    /// Sets the whole symmetry class of `(pq|rs)`.
    pub fn set_two_body(&mut self, p: usize, q: usize, r: usize, s: usize, v: f64) {
        let n = self.n_orb;
        assert!(
            p < n && q < n && r < n && s < n,
            "orbital index out of range"
        );
        let a = pair(p, q);
        let b = pair(r, s);
        self.two_body[pair(a, b)] = v;
    }

    /// Nonzero one-body entries with `p <= q`, row-major.
    pub fn one_body_entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.n_orb;
        (0..n)
            .flat_map(move |p| (p..n).map(move |q| (p, q)))
            .map(move |(p, q)| (p, q, self.one_body(p, q)))
            .filter(|&(_, _, v)| v != 0.0)
    }

    /// Nonzero two-body entries under their canonical index, in lexicographic order.
    pub fn two_body_entries(
        &self,
    ) -> impl Iterator<Item = ((usize, usize, usize, usize), f64)> + '_ {
        let n = self.n_orb;
        (0..n)
            .flat_map(move |p| (p..n).map(move |q| (p, q)))
            .flat_map(move |(p, q)| {
                (p..n).flat_map(move |r| {
                    let s0 = if r == p { q } else { r };
                    (s0..n).map(move |s| (p, q, r, s))
                })
            })
            .map(move |idx| (idx, self.two_body(idx.0, idx.1, idx.2, idx.3)))
            .filter(|&(_, v)| v != 0.0)
    }

    /// Coulomb integral `(pp|qq)`.
    #[inline]
    pub fn coulomb(&self, p: usize, q: usize) -> f64 {
        self.two_body(p, p, q, q)
    }

    /// Exchange integral `(pq|qp)`.
    #[inline]
    pub fn exchange(&self, p: usize, q: usize) -> f64 {
        self.two_body(p, q, q, p)
    }
}
