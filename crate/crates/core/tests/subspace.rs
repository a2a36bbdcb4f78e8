mod common;

use common::{model_chain, occ, random_system};
use hivqe_core::davidson::{davidson, default_guess, solve_subspace, DavidsonOptions};
use hivqe_core::dense::{dense_fci_oracle, eigenvalues, lowest_eigenpair};
use hivqe_core::determinant::{full_cas, Determinant, Spin};
use hivqe_core::hamiltonian::{build_hamiltonian, SparseHamiltonian};
use hivqe_core::rdm::{occupations, one_rdm};
use hivqe_core::{CIVector, Error};
use hivqe_testkit::fermion::{hamiltonian_matrix, one_rdm as oracle_rdm};
use hivqe_testkit::random::random_sparse_symmetric;
use proptest::prelude::*;

fn sparse_from_dense(n: usize, m: &[f64]) -> SparseHamiltonian {
    let diag = (0..n).map(|i| m[i * n + i]).collect();
    let mut upper = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if m[i * n + j] != 0.0 {
                upper.push((i, j, m[i * n + j]));
            }
        }
    }
    SparseHamiltonian::from_parts(diag, upper)
}

#[test]
fn cas_matrix_matches_dense_oracle() {
    let (dense, s) = random_system(2, 1, 1, 77);
    let dets = full_cas(2, 1, 1);
    let h = build_hamiltonian(&dets, &s).unwrap();
    assert_eq!(h.dimension(), 4);
    let occs: Vec<_> = dets.iter().map(|d| occ(d, 2)).collect();
    let want = hamiltonian_matrix(&dense, &occs);
    let got = h.to_dense();
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() < 1e-12);
    }
}

#[test]
fn davidson_matches_dense_on_random_sparse_200() {
    let n = 200;
    let m = random_sparse_symmetric(n, 0.05, 5.0, 2024);
    let h = sparse_from_dense(n, &m);
    let p = davidson(&h, &default_guess(&h), &DavidsonOptions::default()).unwrap();
    let (exact, _) = lowest_eigenpair(n, m);
    assert!((p.value - exact).abs() < 1e-9, "{} vs {}", p.value, exact);
    assert!(p.residual <= 1e-8);
}

#[test]
fn davidson_matches_dense_fci_on_toy_cas() {
    for (n, na, nb, seed) in [(2, 1, 1, 5), (4, 1, 1, 6), (4, 2, 2, 7)] {
        let (_, s) = random_system(n, na, nb, seed);
        let dets = full_cas(n, na, nb);
        let exact = dense_fci_oracle(&dets, &s).unwrap();
        let it = solve_subspace(&dets, &s, None, &DavidsonOptions::default()).unwrap();
        assert!((exact.energy - it.energy).abs() < 1e-10, "({n},{na},{nb})");
        assert!((it.civector.norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn davidson_leaves_the_block_of_its_guess() {
    // two disconnected blocks; the lowest diagonal sits in the upper one
    let (a, b) = (-1.0, -0.9);
    let m = vec![
        a, 0.0, 0.0, 0.0, //
        0.0, b, 0.5, 0.0, //
        0.0, 0.5, b, 0.0, //
        0.0, 0.0, 0.0, 2.0,
    ];
    let h = sparse_from_dense(4, &m);
    let p = davidson(&h, &default_guess(&h), &DavidsonOptions::default()).unwrap();
    assert!((p.value - (b - 0.5)).abs() < 1e-10, "{}", p.value);
}

#[test]
fn singlet_guess_still_finds_high_spin_ground_state() {
    for seed in 0..20 {
        let (_, s) = random_system(4, 2, 2, seed);
        let dets = full_cas(4, 2, 2);
        let hf = CIVector::single(Determinant::hf(2, 2, 4).unwrap());
        let iter = solve_subspace(&dets, &s, Some(&hf), &DavidsonOptions::default()).unwrap();
        let dense = dense_fci_oracle(&dets, &s).unwrap();
        assert!((iter.energy - dense.energy).abs() < 1e-9, "seed {seed}");
    }
}

#[test]
fn one_by_one_oracle() {
    let (_, s) = random_system(3, 1, 1, 8);
    let d = Determinant::hf(1, 1, 3).unwrap();
    let r = dense_fci_oracle(&[d], &s).unwrap();
    assert_eq!(
        r.energy,
        hivqe_core::hamiltonian::matrix_element(&d, &d, &s)
    );
    assert_eq!(r.civector.coeffs(), &[1.0]);
}

#[test]
fn dense_guard() {
    let (_, s) = random_system(3, 1, 1, 8);
    let many: Vec<_> = (0..20_001u64).map(|k| Determinant::new(k + 1, 1)).collect();
    assert!(matches!(
        dense_fci_oracle(&many, &s),
        Err(Error::Capacity { .. })
    ));
}

#[test]
fn interlacing_on_nested_subspaces() {
    let s = model_chain(6, 3, 3, 0.4, 0.8);
    let cas = full_cas(6, 3, 3);
    let fci = dense_fci_oracle(&cas, &s).unwrap().energy;
    let hf = Determinant::hf(3, 3, 6).unwrap();
    let mut space = vec![hf];
    let mut prev = f64::INFINITY;
    for d in cas.iter().filter(|d| **d != hf).step_by(7) {
        space.push(*d);
        let e = solve_subspace(&space, &s, None, &DavidsonOptions::default())
            .unwrap()
            .energy;
        assert!(e <= prev + 1e-10, "energy rose: {e} > {prev}");
        assert!(e >= fci - 1e-10);
        prev = e;
    }
}

#[test]
fn one_rdm_matches_oracle_and_is_psd() {
    for (n, na, nb, seed) in [(3, 2, 1, 11), (4, 2, 2, 12)] {
        let (_dense, s) = random_system(n, na, nb, seed);
        let dets = full_cas(n, na, nb);
        let r = dense_fci_oracle(&dets, &s).unwrap();
        let occs: Vec<_> = dets.iter().map(|d| occ(d, n)).collect();
        for (spin, beta) in [(Spin::Alpha, false), (Spin::Beta, true)] {
            let got = one_rdm(&r.civector, n, spin);
            let want = oracle_rdm(&occs, r.civector.coeffs(), n, beta);
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).abs() < 1e-12);
            }
            let occ_diag = if beta { &r.occ_beta } else { &r.occ_alpha };
            for p in 0..n {
                assert!((got[p * n + p] - occ_diag[p]).abs() < 1e-12);
                for q in 0..n {
                    assert!((got[p * n + q] - got[q * n + p]).abs() < 1e-12);
                }
            }
            let ev = eigenvalues(n, got);
            assert!(
                ev.iter().all(|&x| (-1e-10..=1.0 + 1e-10).contains(&x)),
                "{ev:?}"
            );
            let trace: f64 = ev.iter().sum();
            assert!((trace - if beta { nb } else { na } as f64).abs() < 1e-10);
        }
    }
}

proptest! {
    #[test]
    fn occupations_sum_to_electron_counts(raw in prop::collection::vec(-1.0f64..1.0, 36)) {
        let dets = full_cas(4, 2, 2);
        let mut v = CIVector::new(dets, raw).unwrap();
        prop_assume!(v.norm() > 1e-3);
        v.normalize();
        let (oa, ob) = occupations(&v, 4);
        prop_assert!((oa.iter().sum::<f64>() - 2.0).abs() < 1e-12);
        prop_assert!((ob.iter().sum::<f64>() - 2.0).abs() < 1e-12);
        prop_assert!(oa.iter().chain(&ob).all(|&x| (0.0..=1.0 + 1e-12).contains(&x)));
    }
}
