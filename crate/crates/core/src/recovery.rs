//! Configuration recovery and subspace enrichment for sampled determinants.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use rand::Rng;

use crate::ansatz::SampleBatch;
use crate::civector::CIVector;
use crate::determinant::{low_bits, Bits, Determinant};
use crate::error::{Error, Result};
use crate::hci::{hci_expand, HeatBathTable};
use crate::integrals::IntegralSet;
use crate::rng;
use crate::SubspaceResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OccupationSource {
    HartreeFock,
    PreviousIteration,
    Designated,
}

/// Per-orbital occupation numbers the repair step draws its weights from.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceOccupations {
    pub occ_alpha: Vec<f64>,
    pub occ_beta: Vec<f64>,
    pub source: OccupationSource,
}

fn clamp(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| x.clamp(0.0, 1.0)).collect()
}

impl ReferenceOccupations {
    pub fn new(occ_alpha: &[f64], occ_beta: &[f64], source: OccupationSource) -> Self {
        ReferenceOccupations {
            occ_alpha: clamp(occ_alpha),
            occ_beta: clamp(occ_beta),
            source,
        }
    }

    /// 1 on the lowest `n_σ` orbitals, 0 elsewhere.
    pub fn hartree_fock(n_orb: usize, n_alpha: usize, n_beta: usize) -> Self {
        let fill = |k: usize| {
            (0..n_orb)
                .map(|p| if p < k { 1.0 } else { 0.0 })
                .collect::<Vec<_>>()
        };
        ReferenceOccupations {
            occ_alpha: fill(n_alpha),
            occ_beta: fill(n_beta),
            source: OccupationSource::HartreeFock,
        }
    }

    pub fn from_result(r: &SubspaceResult) -> Self {
        Self::new(
            &r.occ_alpha,
            &r.occ_beta,
            OccupationSource::PreviousIteration,
        )
    }

    pub fn n_orb(&self) -> usize {
        self.occ_alpha.len()
    }
}

/// Recovered determinants with per-shot bookkeeping.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RecoveryOutcome {
    pub counts: BTreeMap<Determinant, u64>,
    /// Shots that were already in the sector.
    pub n_valid: u64,
    /// Shots that needed repair (including fallbacks).
    pub n_repaired: u64,
    /// Repaired shots where some step had all-zero weights and chose uniformly.
    pub n_fallback: u64,
}

impl RecoveryOutcome {
    pub fn dets(&self) -> BTreeSet<Determinant> {
        self.counts.keys().copied().collect()
    }
}

fn pick(candidates: u64, weight: impl Fn(usize) -> f64, rng: &mut impl Rng) -> (usize, bool) {
    let total: f64 = Bits(candidates).map(&weight).sum();
    if total > 0.0 {
        let u = rng.random::<f64>() * total;
        let mut acc = 0.0;
        let mut last = 0;
        for p in Bits(candidates) {
            let w = weight(p);
            if w <= 0.0 {
                continue;
            }
            acc += w;
            last = p;
            if u < acc {
                return (p, false);
            }
        }
        (last, false)
    } else {
        let n = candidates.count_ones() as usize;
        let k = rng.random_range(0..n);
        (Bits(candidates).nth(k).unwrap(), true)
    }
}

/// Bring one channel's popcount to `target`. Returns the repaired mask and
/// whether a uniform fallback was needed.
fn repair_channel(
    mut mask: u64,
    target: usize,
    occ: &[f64],
    n_orb: usize,
    rng: &mut impl Rng,
) -> (u64, bool) {
    let mut fallback = false;
    while mask.count_ones() as usize > target {
        let (p, fb) = pick(mask, |p| 1.0 - occ[p], rng);
        mask &= !(1 << p);
        fallback |= fb;
    }
    while (mask.count_ones() as usize) < target {
        let (p, fb) = pick(low_bits(n_orb) & !mask, |p| occ[p], rng);
        mask |= 1 << p;
        fallback |= fb;
    }
    (mask, fallback)
}

/// Repair every out-of-sector shot against `reference`.
///
/// Too many electrons in a channel: clear an occupied orbital with weight
/// `1 − occ(p)`. Too few: fill an empty orbital with weight `occ(p)`. α is
/// repaired before β. Shot `k` (in histogram order) draws from its own stream
/// derived from `(seed, k)`.
pub fn recover(
    raw: &SampleBatch,
    reference: &ReferenceOccupations,
    n_alpha: usize,
    n_beta: usize,
    seed: u64,
) -> Result<RecoveryOutcome> {
    let n = raw.n_orb;
    if reference.occ_alpha.len() != n || reference.occ_beta.len() != n {
        return Err(Error::Input(
            "reference occupations do not match the orbital count",
        ));
    }
    if n_alpha > n || n_beta > n {
        return Err(Error::Domain {
            n_orb: n,
            n_alpha,
            n_beta,
        });
    }
    let mut out = RecoveryOutcome::default();
    let mut shot: u64 = 0;
    for (bits, &mult) in &raw.counts {
        if bits.in_sector(n_alpha, n_beta) {
            *out.counts.entry(bits.as_det()).or_insert(0) += mult;
            out.n_valid += mult;
            shot += mult;
            continue;
        }
        for _ in 0..mult {
            let mut rng = rng::stream(seed, &[shot]);
            let (a, fa) = repair_channel(bits.alpha, n_alpha, &reference.occ_alpha, n, &mut rng);
            let (b, fb) = repair_channel(bits.beta, n_beta, &reference.occ_beta, n, &mut rng);
            if fa || fb {
                log::debug!("configuration recovery fell back to uniform choice on shot {shot}");
                out.n_fallback += 1;
            }
            out.n_repaired += 1;
            *out.counts.entry(Determinant::new(a, b)).or_insert(0) += 1;
            shot += 1;
        }
    }
    Ok(out)
}

/// Keep only in-sector shots. Returns the surviving histogram and the discarded count.
pub fn discard_invalid(raw: &SampleBatch, n_alpha: usize, n_beta: usize) -> RecoveryOutcome {
    let mut out = RecoveryOutcome::default();
    for (bits, &mult) in &raw.counts {
        if bits.in_sector(n_alpha, n_beta) {
            *out.counts.entry(bits.as_det()).or_insert(0) += mult;
            out.n_valid += mult;
        }
    }
    out
}

/// All recombinations of the distinct α and β strings in `dets`.
pub fn tensor_product_expand(dets: &BTreeSet<Determinant>) -> BTreeSet<Determinant> {
    let alphas: BTreeSet<u64> = dets.iter().map(|d| d.alpha).collect();
    let betas: BTreeSet<u64> = dets.iter().map(|d| d.beta).collect();
    alphas
        .iter()
        .flat_map(|&a| betas.iter().map(move |&b| Determinant::new(a, b)))
        .collect()
}

/// `dets(v)` plus one heat-bath expansion step from `v` at `epsilon_ce`.
pub fn classical_expand(
    v: &CIVector,
    epsilon_ce: f64,
    table: &HeatBathTable,
    s: &IntegralSet,
) -> BTreeSet<Determinant> {
    let mut out = v.det_set();
    out.extend(hci_expand(v, epsilon_ce, table, s));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::Bitstring;

    fn batch(n_orb: usize, entries: &[(Bitstring, u64)]) -> SampleBatch {
        SampleBatch {
            n_orb,
            shots: entries.iter().map(|e| e.1).sum(),
            counts: entries.iter().copied().collect(),
            seed: 0,
        }
    }

    #[test]
    fn valid_strings_pass_through() {
        let b = batch(
            4,
            &[
                (
                    Bitstring {
                        alpha: 0b0011,
                        beta: 0b0101,
                    },
                    3,
                ),
                (
                    Bitstring {
                        alpha: 0b1001,
                        beta: 0b0011,
                    },
                    2,
                ),
            ],
        );
        let r = ReferenceOccupations::hartree_fock(4, 2, 2);
        let out = recover(&b, &r, 2, 2, 11).unwrap();
        assert_eq!(out.n_valid, 5);
        assert_eq!(out.n_repaired, 0);
        assert_eq!(out.counts[&Determinant::new(0b0011, 0b0101)], 3);
        assert_eq!(out.counts[&Determinant::new(0b1001, 0b0011)], 2);
    }

    #[test]
    fn certain_fill() {
        // α has one electron, needs two; only orbital 2 has weight among empty orbitals.
        let b = batch(
            4,
            &[(
                Bitstring {
                    alpha: 0b0001,
                    beta: 0b0011,
                },
                10,
            )],
        );
        let r = ReferenceOccupations::new(
            &[1.0, 0.0, 1.0, 0.0],
            &[1.0, 1.0, 0.0, 0.0],
            OccupationSource::Designated,
        );
        let out = recover(&b, &r, 2, 2, 5).unwrap();
        assert_eq!(out.n_repaired, 10);
        assert_eq!(out.n_fallback, 0);
        assert_eq!(out.counts.len(), 1);
        assert_eq!(out.counts[&Determinant::new(0b0101, 0b0011)], 10);
    }

    #[test]
    fn zero_weights_fall_back_to_uniform() {
        let b = batch(
            3,
            &[(
                Bitstring {
                    alpha: 0b000,
                    beta: 0b001,
                },
                4,
            )],
        );
        let r =
            ReferenceOccupations::new(&[0.0; 3], &[1.0, 0.0, 0.0], OccupationSource::Designated);
        let out = recover(&b, &r, 1, 1, 2).unwrap();
        assert_eq!(out.n_fallback, 4);
        assert!(out.counts.keys().all(|d| d.is_valid(3, 1, 1)));
    }

    #[test]
    fn mismatched_reference_rejected() {
        let b = batch(3, &[(Bitstring { alpha: 1, beta: 1 }, 1)]);
        let r = ReferenceOccupations::hartree_fock(4, 1, 1);
        assert!(recover(&b, &r, 1, 1, 0).is_err());
    }

    #[test]
    fn tensor_product_cases() {
        let d = Determinant::new(0b01, 0b10);
        let one: BTreeSet<_> = [d].into_iter().collect();
        assert_eq!(tensor_product_expand(&one), one);
        let two: BTreeSet<_> = [Determinant::new(0b01, 0b01), Determinant::new(0b10, 0b10)]
            .into_iter()
            .collect();
        assert_eq!(tensor_product_expand(&two).len(), 4);
    }
}
