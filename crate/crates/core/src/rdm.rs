//! Orbital occupations and spin-resolved one-particle density matrices.

use alloc::vec;
use alloc::vec::Vec;

use crate::civector::CIVector;
use crate::determinant::{hop_sign, low_bits, Bits, Determinant, Spin};

/// `(occ_alpha, occ_beta)` with `occ_σ(p) = Σ_i c_i² n_pσ(D_i)`.
pub fn occupations(v: &CIVector, n_orb: usize) -> (Vec<f64>, Vec<f64>) {
    let mut oa = vec![0.0; n_orb];
    let mut ob = vec![0.0; n_orb];
    for (d, c) in v.iter() {
        let w = c * c;
        for p in Bits(d.alpha) {
            oa[p] += w;
        }
        for p in Bits(d.beta) {
            ob[p] += w;
        }
    }
    (oa, ob)
}

/// Row-major `n_orb x n_orb` matrix `γ_pq = Σ_ij c_i c_j <D_i| a†_p a_q |D_j>` for one spin.
pub fn one_rdm(v: &CIVector, n_orb: usize, spin: Spin) -> Vec<f64> {
    let mut gamma = vec![0.0; n_orb * n_orb];
    let mut index: Vec<(Determinant, f64)> = v.iter().map(|(d, c)| (*d, c)).collect();
    index.sort_by_key(|a| a.0);
    let lookup = |d: &Determinant| {
        index
            .binary_search_by(|e| e.0.cmp(d))
            .ok()
            .map(|k| index[k].1)
    };

    for (dj, cj) in v.iter() {
        let m = dj.mask(spin);
        for q in Bits(m) {
            gamma[q * n_orb + q] += cj * cj;
            for p in Bits(low_bits(n_orb) & !m) {
                let moved = m ^ (1 << q) ^ (1 << p);
                let di = match spin {
                    Spin::Alpha => Determinant::new(moved, dj.beta),
                    Spin::Beta => Determinant::new(dj.alpha, moved),
                };
                if let Some(ci) = lookup(&di) {
                    gamma[p * n_orb + q] += ci * cj * hop_sign(m, q, p);
                }
            }
        }
    }
    gamma
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math;

    #[test]
    fn single_determinant_is_projector() {
        let v = CIVector::single(Determinant::new(0b0101, 0b0011));
        let (oa, ob) = occupations(&v, 4);
        assert_eq!(oa, vec![1.0, 0.0, 1.0, 0.0]);
        assert_eq!(ob, vec![1.0, 1.0, 0.0, 0.0]);
        let g = one_rdm(&v, 4, Spin::Alpha);
        for p in 0..4 {
            for q in 0..4 {
                let want = if p == q { oa[p] } else { 0.0 };
                assert_eq!(g[p * 4 + q], want);
            }
        }
    }

    #[test]
    fn half_mixture() {
        let h = 1.0 / math::sqrt(2.0);
        let v = CIVector::new(
            vec![Determinant::new(0b01, 0b01), Determinant::new(0b10, 0b01)],
            vec![h, h],
        )
        .unwrap();
        let (oa, ob) = occupations(&v, 2);
        assert!((oa[0] - 0.5).abs() < 1e-15 && (oa[1] - 0.5).abs() < 1e-15);
        assert!((ob[0] - 1.0).abs() < 1e-15 && ob[1] == 0.0);
        let g = one_rdm(&v, 2, Spin::Alpha);
        assert!((g[1] - 0.5).abs() < 1e-15 && (g[2] - 0.5).abs() < 1e-15);
        let trace = g[0] + g[3];
        assert!((trace - 1.0).abs() < 1e-15);
    }
}
