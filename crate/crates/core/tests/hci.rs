mod common;

use std::collections::BTreeSet;

use common::{model_chain, random_system};
use hivqe_core::dense::dense_fci_oracle;
use hivqe_core::determinant::{full_cas, singles_and_doubles, Determinant};
use hivqe_core::hamiltonian::{matrix_element, same_spin_double_value};
use hivqe_core::hci::{hci_expand, hci_run, HCIConfig, HeatBathTable};
use hivqe_core::CIVector;
use proptest::prelude::*;

#[test]
fn table_matches_exhaustive_enumeration() {
    let (_, s) = random_system(2, 1, 1, 3);
    let t = HeatBathTable::build(&s);
    // only the opposite-spin lists can be populated with two orbitals
    for p in 0..2 {
        for q in 0..2 {
            let mut want: Vec<(u8, u8)> = Vec::new();
            for r in 0..2 {
                for u in 0..2 {
                    if r != p && u != q && s.two_body(p, r, q, u) != 0.0 {
                        want.push((r as u8, u as u8));
                    }
                }
            }
            let got: Vec<(u8, u8)> = t.opposite_spin(p, q).iter().map(|e| (e.r, e.s)).collect();
            assert_eq!(got, want);
        }
    }
    assert!(t.same_spin(0, 1).is_empty());

    let (_, s) = random_system(4, 2, 2, 4);
    let t = HeatBathTable::build(&s);
    let list = t.same_spin(0, 1);
    assert_eq!(list.len(), 1);
    assert_eq!((list[0].r, list[0].s), (2, 3));
    assert_eq!(
        list[0].magnitude,
        same_spin_double_value(&s, 0, 1, 2, 3).abs()
    );
}

proptest! {
    #[test]
    fn table_lists_sorted(seed in 0u64..500) {
        let (_, s) = random_system(5, 2, 2, seed);
        let t = HeatBathTable::build(&s);
        for p in 0..5 {
            for q in 0..5 {
                let lists: Vec<_> = if p < q {
                    vec![t.same_spin(p, q), t.opposite_spin(p, q)]
                } else {
                    vec![t.opposite_spin(p, q)]
                };
                for l in lists {
                    prop_assert!(l.windows(2).all(|w| w[0].magnitude >= w[1].magnitude));
                    prop_assert!(l.iter().all(|e| e.magnitude > 0.0));
                }
            }
        }
    }

    #[test]
    fn expansion_nests_in_epsilon(seed in 0u64..200) {
        let (_, s) = random_system(5, 2, 2, seed);
        let t = HeatBathTable::build(&s);
        let dets = full_cas(5, 2, 2);
        let v = CIVector::new(dets[..4].to_vec(), vec![0.8, -0.4, 0.3, 0.33]).unwrap();
        let coarse = hci_expand(&v, 1e-2, &t, &s);
        let fine = hci_expand(&v, 1e-4, &t, &s);
        prop_assert!(coarse.is_subset(&fine));
    }
}

#[test]
fn tiny_epsilon_reaches_all_connected() {
    let (_, s) = random_system(4, 1, 1, 21);
    let t = HeatBathTable::build(&s);
    let hf = Determinant::hf(1, 1, 4).unwrap();
    let v = CIVector::single(hf);
    let got = hci_expand(&v, 1e-300, &t, &s);
    let want: BTreeSet<_> = singles_and_doubles(&hf, 4)
        .into_iter()
        .filter(|d| matrix_element(&hf, d, &s) != 0.0)
        .collect();
    assert_eq!(got, want);
}

#[test]
fn exact_threshold_is_included() {
    let (_, s) = random_system(3, 1, 1, 22);
    let t = HeatBathTable::build(&s);
    let hf = Determinant::hf(1, 1, 3).unwrap();
    let v = CIVector::single(hf);
    let target = Determinant::new(0b010, 0b010);
    let eps = matrix_element(&hf, &target, &s).abs();
    assert!(hci_expand(&v, eps, &t, &s).contains(&target));
}

#[test]
fn two_orbital_run_reaches_fci() {
    let (_, s) = random_system(2, 1, 1, 31);
    let fci = dense_fci_oracle(&full_cas(2, 1, 1), &s).unwrap().energy;
    let out = hci_run(
        &s,
        &HCIConfig::new(1e-12),
        Determinant::hf(1, 1, 2).unwrap(),
    )
    .unwrap();
    assert!(out.trace.len() <= 3);
    assert!((out.result.energy - fci).abs() < 1e-9);
}

#[test]
fn epsilon_ladder_is_variational_and_monotone() {
    let s = model_chain(7, 3, 3, 0.5, 1.0);
    let fci = dense_fci_oracle(&full_cas(7, 3, 3), &s).unwrap().energy;
    let hf = Determinant::hf(3, 3, 7).unwrap();
    let mut prev = f64::INFINITY;
    for eps in [1e-2, 1e-3, 1e-4, 1e-5] {
        let out = hci_run(&s, &HCIConfig::new(eps), hf).unwrap();
        let e = out.result.energy;
        assert!(e >= fci - 1e-10, "eps {eps}: {e} below FCI {fci}");
        assert!(e <= prev + 1e-10, "eps {eps}: {e} above coarser {prev}");
        for w in out.trace.windows(2) {
            assert!(w[1].energy <= w[0].energy + 1e-10);
            assert!(w[1].n_dets >= w[0].n_dets);
        }
        prev = e;
    }
}
