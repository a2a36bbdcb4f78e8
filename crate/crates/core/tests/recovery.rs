mod common;

use std::collections::BTreeSet;

use common::random_system;
use hivqe_core::ansatz::{apply_bitflip_noise, build_epa, initial_parameters, sample};
use hivqe_core::determinant::{full_cas, singles_and_doubles, Determinant};
use hivqe_core::hamiltonian::matrix_element;
use hivqe_core::hci::HeatBathTable;
use hivqe_core::recovery::{
    classical_expand, recover, tensor_product_expand, ReferenceOccupations,
};
use hivqe_core::{CIVector, SampleBatch};
use proptest::prelude::*;

fn noisy_batch() -> SampleBatch {
    let c = build_epa(4, 1, 1, 2).unwrap();
    let r = Determinant::hf(1, 1, 4).unwrap();
    let b = sample(&c, &initial_parameters(c.n_params, 0.6, 1), &r, 4000, 2).unwrap();
    apply_bitflip_noise(&b, 0.05, 3).unwrap()
}

#[test]
fn noisy_batch_fully_recovered_and_reproducible() {
    let b = noisy_batch();
    assert!(b.counts.keys().any(|s| !s.in_sector(1, 1)));
    let occ = ReferenceOccupations::new(
        &[0.9, 0.05, 0.03, 0.02],
        &[0.9, 0.05, 0.03, 0.02],
        hivqe_core::recovery::OccupationSource::Designated,
    );
    let out = recover(&b, &occ, 1, 1, 77).unwrap();
    assert_eq!(out.n_valid + out.n_repaired, b.shots);
    assert!(out.counts.keys().all(|d| d.is_valid(4, 1, 1)));
    assert_eq!(out, recover(&b, &occ, 1, 1, 77).unwrap());
    assert!(out.n_repaired > 0);
}

#[test]
fn recovery_is_idempotent() {
    let b = noisy_batch();
    let occ = ReferenceOccupations::hartree_fock(4, 1, 1);
    let once = recover(&b, &occ, 1, 1, 5).unwrap();
    let as_batch = SampleBatch {
        n_orb: 4,
        shots: b.shots,
        counts: once
            .counts
            .iter()
            .map(|(d, k)| (hivqe_core::Bitstring::from_det(d), *k))
            .collect(),
        seed: 0,
    };
    let twice = recover(&as_batch, &occ, 1, 1, 6).unwrap();
    assert_eq!(twice.counts, once.counts);
    assert_eq!(twice.n_repaired, 0);
}

#[test]
fn correct_channel_untouched() {
    // α is fine, β has an extra electron: α must survive repair unchanged
    let b = SampleBatch {
        n_orb: 4,
        shots: 200,
        counts: [(
            hivqe_core::Bitstring {
                alpha: 0b1010,
                beta: 0b0111,
            },
            200,
        )]
        .into_iter()
        .collect(),
        seed: 0,
    };
    let out = recover(&b, &ReferenceOccupations::hartree_fock(4, 2, 2), 2, 2, 9).unwrap();
    assert!(out
        .counts
        .keys()
        .all(|d| d.alpha == 0b1010 && d.beta.count_ones() == 2));
}

#[test]
fn classical_expand_limits() {
    let (_, s) = random_system(4, 1, 1, 40);
    let t = HeatBathTable::build(&s);
    let hf = Determinant::hf(1, 1, 4).unwrap();
    let v = CIVector::single(hf);
    assert_eq!(classical_expand(&v, 1e9, &t, &s), v.det_set());
    let mut want: BTreeSet<_> = singles_and_doubles(&hf, 4)
        .into_iter()
        .filter(|d| matrix_element(&hf, d, &s) != 0.0)
        .collect();
    want.insert(hf);
    assert_eq!(classical_expand(&v, 1e-300, &t, &s), want);
}

fn det_subset() -> impl Strategy<Value = BTreeSet<Determinant>> {
    let cas = full_cas(5, 2, 2);
    prop::collection::btree_set(0..cas.len(), 1..12)
        .prop_map(move |ix| ix.into_iter().map(|i| cas[i]).collect())
}

proptest! {
    #[test]
    fn tensor_product_closure(dets in det_subset()) {
        let tp = tensor_product_expand(&dets);
        prop_assert!(dets.is_subset(&tp));
        let na = dets.iter().map(|d| d.alpha).collect::<BTreeSet<_>>().len();
        let nb = dets.iter().map(|d| d.beta).collect::<BTreeSet<_>>().len();
        prop_assert_eq!(tp.len(), na * nb);
        prop_assert_eq!(tensor_product_expand(&tp), tp);
    }

    #[test]
    fn classical_expand_nests(seed in 0u64..100, dets in det_subset()) {
        let (_, s) = random_system(5, 2, 2, seed);
        let t = HeatBathTable::build(&s);
        let n = dets.len();
        let mut v = CIVector::new(dets.into_iter().collect(), (0..n).map(|i| 1.0 + i as f64).collect()).unwrap();
        v.normalize();
        let loose = classical_expand(&v, 1e-2, &t, &s);
        let tight = classical_expand(&v, 1e-4, &t, &s);
        prop_assert!(v.det_set().is_subset(&loose));
        prop_assert!(loose.is_subset(&tight));
    }
}
