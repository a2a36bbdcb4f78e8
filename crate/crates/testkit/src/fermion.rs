//! Second quantization on explicit occupation vectors.
//!
//! Spin orbital `k < n` is α orbital `k`; spin orbital `n + k` is β orbital
//! `k`. A determinant is `a†_{k1} a†_{k2} … |0⟩` with `k1 < k2 < …`.

use std::collections::BTreeMap;

/// Full (non-packed) integral tables.
#[derive(Clone, Debug)]
pub struct DenseIntegrals {
    pub n: usize,
    pub core: f64,
    /// `h[p * n + q]`
    pub h: Vec<f64>,
    /// `g[((p * n + q) * n + r) * n + s]` = `(pq|rs)`
    pub g: Vec<f64>,
}

impl DenseIntegrals {
    pub fn h(&self, p: usize, q: usize) -> f64 {
        self.h[p * self.n + q]
    }

    pub fn g(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        let n = self.n;
        self.g[((p * n + q) * n + r) * n + s]
    }
}

pub type Occ = Vec<bool>;

pub fn occ_from_masks(alpha: u64, beta: u64, n: usize) -> Occ {
    (0..2 * n)
        .map(|k| {
            if k < n {
                alpha >> k & 1 == 1
            } else {
                beta >> (k - n) & 1 == 1
            }
        })
        .collect()
}

pub fn annihilate(k: usize, occ: &Occ) -> Option<(f64, Occ)> {
    if !occ[k] {
        return None;
    }
    let below = occ[..k].iter().filter(|&&b| b).count();
    let mut out = occ.clone();
    out[k] = false;
    Some((if below % 2 == 0 { 1.0 } else { -1.0 }, out))
}

pub fn create(k: usize, occ: &Occ) -> Option<(f64, Occ)> {
    if occ[k] {
        return None;
    }
    let below = occ[..k].iter().filter(|&&b| b).count();
    let mut out = occ.clone();
    out[k] = true;
    Some((if below % 2 == 0 { 1.0 } else { -1.0 }, out))
}

/// Apply a product of operators, rightmost first. `(true, k)` is `a†_k`.
pub fn apply_string(ops: &[(bool, usize)], occ: &Occ) -> Option<(f64, Occ)> {
    let mut sign = 1.0;
    let mut state = occ.clone();
    for &(dagger, k) in ops.iter().rev() {
        let (s, next) = if dagger {
            create(k, &state)?
        } else {
            annihilate(k, &state)?
        };
        sign *= s;
        state = next;
    }
    Some((sign, state))
}

/// `H |occ⟩` as a map from occupation vectors to coefficients.
pub fn apply_hamiltonian(ints: &DenseIntegrals, occ: &Occ) -> BTreeMap<Occ, f64> {
    let n = ints.n;
    let mut out: BTreeMap<Occ, f64> = BTreeMap::new();
    *out.entry(occ.clone()).or_insert(0.0) += ints.core;
    let spin_of = |k: usize| k / n;
    let orb = |k: usize| k % n;
    for p in 0..2 * n {
        for q in 0..2 * n {
            if spin_of(p) != spin_of(q) {
                continue;
            }
            let v = ints.h(orb(p), orb(q));
            if v == 0.0 {
                continue;
            }
            if let Some((s, st)) = apply_string(&[(true, p), (false, q)], occ) {
                *out.entry(st).or_insert(0.0) += v * s;
            }
        }
    }
    for p in 0..2 * n {
        for q in 0..2 * n {
            if spin_of(p) != spin_of(q) {
                continue;
            }
            for r in 0..2 * n {
                for s in 0..2 * n {
                    if spin_of(r) != spin_of(s) {
                        continue;
                    }
                    let v = ints.g(orb(p), orb(q), orb(r), orb(s));
                    if v == 0.0 {
                        continue;
                    }
                    if let Some((sg, st)) =
                        apply_string(&[(true, p), (true, r), (false, s), (false, q)], occ)
                    {
                        *out.entry(st).or_insert(0.0) += 0.5 * v * sg;
                    }
                }
            }
        }
    }
    out
}

/// `<bra| H |ket>` by explicit operator application.
pub fn matrix_element(ints: &DenseIntegrals, bra: &Occ, ket: &Occ) -> f64 {
    apply_hamiltonian(ints, ket)
        .get(bra)
        .copied()
        .unwrap_or(0.0)
}

/// Full matrix over the given determinants, row-major.
pub fn hamiltonian_matrix(ints: &DenseIntegrals, dets: &[Occ]) -> Vec<f64> {
    let m = dets.len();
    let mut out = vec![0.0; m * m];
    for (j, ket) in dets.iter().enumerate() {
        let col = apply_hamiltonian(ints, ket);
        for (i, bra) in dets.iter().enumerate() {
            out[i * m + j] = col.get(bra).copied().unwrap_or(0.0);
        }
    }
    out
}

/// `γ_pq = Σ_ij c_i c_j <D_i| a†_p a_q |D_j>` over spin orbitals `p, q` of one spin block.
pub fn one_rdm(dets: &[Occ], coeffs: &[f64], n: usize, beta: bool) -> Vec<f64> {
    let off = if beta { n } else { 0 };
    let index: BTreeMap<&Occ, usize> = dets.iter().enumerate().map(|(i, d)| (d, i)).collect();
    let mut gamma = vec![0.0; n * n];
    for (j, ket) in dets.iter().enumerate() {
        for p in 0..n {
            for q in 0..n {
                if let Some((s, st)) = apply_string(&[(true, off + p), (false, off + q)], ket) {
                    if let Some(&i) = index.get(&st) {
                        gamma[p * n + q] += coeffs[i] * coeffs[j] * s;
                    }
                }
            }
        }
    }
    gamma
}
