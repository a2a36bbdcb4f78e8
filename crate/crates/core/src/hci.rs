//! Heat-bath configuration interaction.
//!
//! A determinant `a` outside the current space is admitted when some member
//! `i` couples to it strongly enough, `|H_ai c_i| >= ε`. Double excitations
//! are screened through [`HeatBathTable`], whose per-pair lists are sorted by
//! coupling magnitude so the scan stops at the first entry below `ε / |c_i|`.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::civector::CIVector;
use crate::davidson::{solve_subspace, DavidsonOptions};
use crate::determinant::{low_bits, Bits, Determinant};
use crate::error::{Error, Result};
use crate::hamiltonian::{matrix_element, same_spin_double_value};
use crate::integrals::IntegralSet;
use crate::SubspaceResult;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HeatBathEntry {
    pub r: u8,
    pub s: u8,
    pub magnitude: f64,
}

/// Candidate double excitations per occupied orbital pair, strongest first.
#[derive(Clone, Debug, PartialEq)]
pub struct HeatBathTable {
    n_orb: usize,
    same: Vec<Vec<HeatBathEntry>>,
    opposite: Vec<Vec<HeatBathEntry>>,
    max_magnitude: f64,
}

fn sort_desc(list: &mut [HeatBathEntry]) {
    list.sort_by(|x, y| {
        y.magnitude
            .total_cmp(&x.magnitude)
            .then((x.r, x.s).cmp(&(y.r, y.s)))
    });
}

impl HeatBathTable {
    pub fn build(s: &IntegralSet) -> Self {
        let n = s.n_orb();
        let mut same = vec![Vec::new(); n * n];
        let mut opposite = vec![Vec::new(); n * n];
        let mut max_magnitude: f64 = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p < q {
                    let list = &mut same[p * n + q];
                    for r in (0..n).filter(|&r| r != p && r != q) {
                        for t in ((r + 1)..n).filter(|&t| t != p && t != q) {
                            let m = same_spin_double_value(s, p, q, r, t).abs();
                            if m > 0.0 {
                                list.push(HeatBathEntry {
                                    r: r as u8,
                                    s: t as u8,
                                    magnitude: m,
                                });
                            }
                        }
                    }
                    sort_desc(list);
                }
                let list = &mut opposite[p * n + q];
                for r in (0..n).filter(|&r| r != p) {
                    for t in (0..n).filter(|&t| t != q) {
                        let m = s.two_body(p, r, q, t).abs();
                        if m > 0.0 {
                            list.push(HeatBathEntry {
                                r: r as u8,
                                s: t as u8,
                                magnitude: m,
                            });
                        }
                    }
                }
                sort_desc(list);
            }
        }
        for l in same.iter().chain(opposite.iter()) {
            if let Some(e) = l.first() {
                max_magnitude = max_magnitude.max(e.magnitude);
            }
        }
        HeatBathTable {
            n_orb: n,
            same,
            opposite,
            max_magnitude,
        }
    }

    pub fn n_orb(&self) -> usize {
        self.n_orb
    }

    /// Same-spin targets `(r < s)` for occupied `p < q`.
    pub fn same_spin(&self, p: usize, q: usize) -> &[HeatBathEntry] {
        let (p, q) = if p < q { (p, q) } else { (q, p) };
        &self.same[p * self.n_orb + q]
    }

    /// Opposite-spin targets `(r α, s β)` for occupied `p α, q β`.
    pub fn opposite_spin(&self, p: usize, q: usize) -> &[HeatBathEntry] {
        &self.opposite[p * self.n_orb + q]
    }

    pub fn max_magnitude(&self) -> f64 {
        self.max_magnitude
    }
}

pub fn build_heatbath_table(s: &IntegralSet) -> HeatBathTable {
    HeatBathTable::build(s)
}

fn expand_one(
    d: &Determinant,
    c: f64,
    epsilon: f64,
    table: &HeatBathTable,
    s: &IntegralSet,
    existing: &BTreeSet<Determinant>,
    out: &mut Vec<Determinant>,
) {
    let ac = c.abs();
    if ac == 0.0 {
        return;
    }
    let n = s.n_orb();
    let full = low_bits(n);
    let consider = |new: Determinant, out: &mut Vec<Determinant>| {
        if !existing.contains(&new) && matrix_element(d, &new, s).abs() * ac >= epsilon {
            out.push(new);
        }
    };

    // singles
    for (mask, is_alpha) in [(d.alpha, true), (d.beta, false)] {
        for i in Bits(mask) {
            for a in Bits(full & !mask) {
                let m = mask ^ (1 << i) ^ (1 << a);
                let new = if is_alpha {
                    Determinant::new(m, d.beta)
                } else {
                    Determinant::new(d.alpha, m)
                };
                consider(new, out);
            }
        }
    }

    if table.max_magnitude() * ac < epsilon {
        return;
    }

    // same-spin doubles
    for (mask, is_alpha) in [(d.alpha, true), (d.beta, false)] {
        for p in Bits(mask) {
            for q in Bits(mask & !low_bits(p + 1)) {
                for e in table.same_spin(p, q) {
                    if e.magnitude * ac < epsilon {
                        break;
                    }
                    let target = (1u64 << e.r) | (1u64 << e.s);
                    if mask & target != 0 {
                        continue;
                    }
                    let m = mask ^ (1 << p) ^ (1 << q) ^ target;
                    let new = if is_alpha {
                        Determinant::new(m, d.beta)
                    } else {
                        Determinant::new(d.alpha, m)
                    };
                    consider(new, out);
                }
            }
        }
    }

    // opposite-spin doubles
    for p in Bits(d.alpha) {
        for q in Bits(d.beta) {
            for e in table.opposite_spin(p, q) {
                if e.magnitude * ac < epsilon {
                    break;
                }
                let (r, t) = (e.r as usize, e.s as usize);
                if d.alpha >> r & 1 == 1 || d.beta >> t & 1 == 1 {
                    continue;
                }
                let new =
                    Determinant::new(d.alpha ^ (1 << p) ^ (1 << r), d.beta ^ (1 << q) ^ (1 << t));
                consider(new, out);
            }
        }
    }
}

/// Determinants outside `v` with `|H_ai c_i| >= epsilon` for some `i` in `v`.
pub fn hci_expand(
    v: &CIVector,
    epsilon: f64,
    table: &HeatBathTable,
    s: &IntegralSet,
) -> BTreeSet<Determinant> {
    let existing = v.det_set();

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let parts: Vec<Vec<Determinant>> = v
            .dets()
            .par_iter()
            .zip(v.coeffs().par_iter())
            .map(|(d, &c)| {
                let mut out = Vec::new();
                expand_one(d, c, epsilon, table, s, &existing, &mut out);
                out
            })
            .collect();
        parts.into_iter().flatten().collect()
    }

    #[cfg(not(feature = "parallel"))]
    {
        let mut out = Vec::new();
        for (d, c) in v.iter() {
            expand_one(d, c, epsilon, table, s, &existing, &mut out);
        }
        out.into_iter().collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HCIConfig {
    pub epsilon: f64,
    pub max_iterations: usize,
    pub energy_tol: f64,
    pub davidson: DavidsonOptions,
}

impl HCIConfig {
    pub fn new(epsilon: f64) -> Self {
        HCIConfig {
            epsilon,
            max_iterations: 50,
            energy_tol: 1e-8,
            davidson: DavidsonOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(Error::Input("epsilon must be positive"));
        }
        if self.energy_tol.is_nan() || self.energy_tol <= 0.0 {
            return Err(Error::Input("energy_tol must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(Error::Input("max_iterations must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HciStep {
    pub iteration: usize,
    pub energy: f64,
    pub n_dets: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HciOutcome {
    pub trace: Vec<HciStep>,
    pub result: SubspaceResult,
    /// False when the loop stopped on `max_iterations`.
    pub converged: bool,
}

/// Iterate expand/diagonalize from `start` until nothing new is selected,
/// the energy change drops below `energy_tol`, or `max_iterations` is hit.
pub fn hci_run(s: &IntegralSet, cfg: &HCIConfig, start: Determinant) -> Result<HciOutcome> {
    cfg.validate()?;
    if !start.is_valid(s.n_orb(), s.n_alpha(), s.n_beta()) {
        return Err(Error::Input(
            "start determinant does not match the integral set",
        ));
    }
    let table = HeatBathTable::build(s);
    let mut space: BTreeSet<Determinant> = BTreeSet::new();
    space.insert(start);
    let mut result = solve_subspace(&[start], s, None, &cfg.davidson)?;
    let mut trace = Vec::new();
    let mut converged = false;

    for iteration in 1..=cfg.max_iterations {
        let new = hci_expand(&result.civector, cfg.epsilon, &table, s);
        if new.is_empty() {
            trace.push(HciStep {
                iteration,
                energy: result.energy,
                n_dets: space.len(),
            });
            converged = true;
            break;
        }
        space.extend(new);
        let dets: Vec<Determinant> = space.iter().copied().collect();
        let next = solve_subspace(&dets, s, Some(&result.civector), &cfg.davidson)?;
        let delta = next.energy - result.energy;
        result = next;
        trace.push(HciStep {
            iteration,
            energy: result.energy,
            n_dets: space.len(),
        });
        if delta.abs() < cfg.energy_tol {
            converged = true;
            break;
        }
    }
    Ok(HciOutcome {
        trace,
        result,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_two_body_gives_empty_lists() {
        let mut s = IntegralSet::new(3, 2, 0).unwrap();
        s.set_one_body(0, 1, 0.3);
        let t = HeatBathTable::build(&s);
        for p in 0..3 {
            for q in 0..3 {
                assert!(t.opposite_spin(p, q).is_empty());
                if p != q {
                    assert!(t.same_spin(p, q).is_empty());
                }
            }
        }
        assert_eq!(t.max_magnitude(), 0.0);
    }

    #[test]
    fn huge_epsilon_selects_nothing() {
        let mut s = IntegralSet::new(2, 2, 0).unwrap();
        s.set_one_body(0, 0, -1.0);
        s.set_two_body(0, 1, 0, 1, 0.2);
        let t = HeatBathTable::build(&s);
        let v = CIVector::single(Determinant::hf(1, 1, 2).unwrap());
        assert!(hci_expand(&v, 10.0, &t, &s).is_empty());
        let out = hci_run(&s, &HCIConfig::new(10.0), Determinant::hf(1, 1, 2).unwrap()).unwrap();
        assert_eq!(out.trace.len(), 1);
        assert_eq!(out.trace[0].n_dets, 1);
        assert!(out.converged);
    }

    #[test]
    fn config_validation() {
        assert!(HCIConfig::new(0.0).validate().is_err());
        let mut c = HCIConfig::new(1e-4);
        c.energy_tol = -1.0;
        assert!(c.validate().is_err());
    }
}
