#![allow(dead_code)]

use hivqe_core::determinant::Determinant;
use hivqe_core::IntegralSet;
use hivqe_testkit::fermion::{occ_from_masks, DenseIntegrals, Occ};
use hivqe_testkit::random::random_integrals;

pub fn to_integral_set(d: &DenseIntegrals, n_alpha: usize, n_beta: usize) -> IntegralSet {
    let n = d.n;
    let mut s = IntegralSet::new(n, n_alpha + n_beta, n_alpha as i32 - n_beta as i32).unwrap();
    s.set_core_energy(d.core);
    for p in 0..n {
        for q in 0..n {
            s.set_one_body(p, q, d.h(p, q));
            for r in 0..n {
                for t in 0..n {
                    s.set_two_body(p, q, r, t, d.g(p, q, r, t));
                }
            }
        }
    }
    s
}

pub fn random_system(
    n: usize,
    n_alpha: usize,
    n_beta: usize,
    seed: u64,
) -> (DenseIntegrals, IntegralSet) {
    let d = random_integrals(n, seed);
    let s = to_integral_set(&d, n_alpha, n_beta);
    (d, s)
}

pub fn occ(d: &Determinant, n: usize) -> Occ {
    occ_from_masks(d.alpha, d.beta, n)
}

/// Hubbard-like chain with long-range decaying Coulomb, a cheap molecular stand-in.
pub fn model_chain(n: usize, n_alpha: usize, n_beta: usize, t: f64, u: f64) -> IntegralSet {
    let mut s = IntegralSet::new(n, n_alpha + n_beta, n_alpha as i32 - n_beta as i32).unwrap();
    for p in 0..n {
        s.set_one_body(p, p, -0.5 * (n - p) as f64 / n as f64);
        if p + 1 < n {
            s.set_one_body(p, p + 1, -t);
        }
        for q in p..n {
            let d = (q - p) as f64;
            s.set_two_body(p, p, q, q, u / (1.0 + d));
            if q > p {
                s.set_two_body(p, q, p, q, 0.1 * u / (1.0 + d * d));
            }
        }
    }
    s
}
