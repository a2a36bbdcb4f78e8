//! Slater determinants as a pair of 64-bit occupation masks.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::integrals::MAX_ORBITALS;

/// Bit `p` of `alpha` (`beta`) is set when spatial orbital `p` holds an α (β) electron.
///
/// Ordering is lexicographic on `(alpha, beta)`, which is the canonical order
/// used for every determinant set in the crate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Determinant {
    pub alpha: u64,
    pub beta: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spin {
    Alpha,
    Beta,
}

/// Iterator over the set bit positions of a mask, ascending.
#[derive(Clone, Copy, Debug)]
pub struct Bits(pub u64);

impl Iterator for Bits {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let i = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(i)
        }
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Bits {}

/// Mask with the lowest `n` bits set.
#[inline]
pub fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Mask of the bits strictly between positions `i` and `j`.
#[inline]
pub(crate) fn between(i: usize, j: usize) -> u64 {
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    low_bits(hi) & !low_bits(lo + 1)
}

/// Sign of `a†_to a_from` acting on `mask` (which must hold `from`).
#[inline]
pub(crate) fn hop_sign(mask: u64, from: usize, to: usize) -> f64 {
    if (mask & between(from, to)).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

impl Determinant {
    pub const fn new(alpha: u64, beta: u64) -> Self {
        Determinant { alpha, beta }
    }

    /// Aufbau reference: the lowest `n_alpha` and `n_beta` orbitals filled.
    pub fn hf(n_alpha: usize, n_beta: usize, n_orb: usize) -> Result<Self> {
        if n_orb > MAX_ORBITALS || n_alpha > n_orb || n_beta > n_orb {
            return Err(Error::Domain {
                n_orb,
                n_alpha,
                n_beta,
            });
        }
        Ok(Determinant::new(low_bits(n_alpha), low_bits(n_beta)))
    }

    #[inline]
    pub fn mask(&self, spin: Spin) -> u64 {
        match spin {
            Spin::Alpha => self.alpha,
            Spin::Beta => self.beta,
        }
    }

    pub fn n_alpha(&self) -> usize {
        self.alpha.count_ones() as usize
    }

    pub fn n_beta(&self) -> usize {
        self.beta.count_ones() as usize
    }

    pub fn is_valid(&self, n_orb: usize, n_alpha: usize, n_beta: usize) -> bool {
        let allowed = low_bits(n_orb);
        self.alpha & !allowed == 0
            && self.beta & !allowed == 0
            && self.n_alpha() == n_alpha
            && self.n_beta() == n_beta
    }

    /// Number of orbitals that differ in each channel, `(degree_alpha, degree_beta)`.
    #[inline]
    pub fn degrees(&self, other: &Determinant) -> (u32, u32) {
        (
            (self.alpha ^ other.alpha).count_ones() / 2,
            (self.beta ^ other.beta).count_ones() / 2,
        )
    }

    /// Total excitation degree between two determinants with equal per-spin counts.
    #[inline]
    pub fn degree(&self, other: &Determinant) -> u32 {
        let (a, b) = self.degrees(other);
        a + b
    }

    /// Occupation string such as `a:1100|b:1100`, orbital 0 leftmost.
    pub fn render(&self, n_orb: usize) -> String {
        let mut s = String::with_capacity(2 * n_orb + 5);
        s.push_str("a:");
        push_bits(&mut s, self.alpha, n_orb);
        s.push_str("|b:");
        push_bits(&mut s, self.beta, n_orb);
        s
    }
}

fn push_bits(s: &mut String, mask: u64, n: usize) {
    for p in 0..n {
        s.push(if mask >> p & 1 == 1 { '1' } else { '0' });
    }
}

fn parse_bits(s: &str) -> Option<u64> {
    if s.is_empty() || s.len() > MAX_ORBITALS {
        return None;
    }
    let mut m = 0u64;
    for (p, c) in s.chars().enumerate() {
        match c {
            '1' => m |= 1 << p,
            '0' => {}
            _ => return None,
        }
    }
    Some(m)
}

impl FromStr for Determinant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = Error::Input("determinant string must look like a:1100|b:1100");
        let (a, b) = s.split_once('|').ok_or(bad.clone())?;
        let a = a.strip_prefix("a:").ok_or(bad.clone())?;
        let b = b.strip_prefix("b:").ok_or(bad.clone())?;
        if a.len() != b.len() {
            return Err(bad);
        }
        match (parse_bits(a), parse_bits(b)) {
            (Some(alpha), Some(beta)) => Ok(Determinant::new(alpha, beta)),
            _ => Err(bad),
        }
    }
}

impl fmt::Display for Determinant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = (64 - (self.alpha | self.beta).leading_zeros()) as usize;
        f.write_str(&self.render(n.max(1)))
    }
}

/// Holes and particles of one spin channel, ascending.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChannelExcitation {
    pub holes: Vec<usize>,
    pub particles: Vec<usize>,
}

impl ChannelExcitation {
    fn from_masks(from: u64, to: u64) -> Self {
        ChannelExcitation {
            holes: Bits(from & !to).collect(),
            particles: Bits(to & !from).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.holes.len()
    }
}

/// How `d2` is reached from `d1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcitationInfo {
    pub alpha: ChannelExcitation,
    pub beta: ChannelExcitation,
    /// Sign of `d2` in `(∏ a†_particle a_hole) d1`, holes and particles paired in
    /// ascending order, α block applied before β.
    pub phase: i8,
}

impl ExcitationInfo {
    pub fn degree_alpha(&self) -> usize {
        self.alpha.degree()
    }

    pub fn degree_beta(&self) -> usize {
        self.beta.degree()
    }

    /// Replay the hole/particle lists on `d`.
    pub fn apply(&self, d: &Determinant) -> Determinant {
        let flip = |mask: u64, ex: &ChannelExcitation| {
            let mut m = mask;
            for &h in &ex.holes {
                m &= !(1u64 << h);
            }
            for &p in &ex.particles {
                m |= 1u64 << p;
            }
            m
        };
        Determinant::new(flip(d.alpha, &self.alpha), flip(d.beta, &self.beta))
    }
}

/// Phase of moving electrons `holes[k] -> particles[k]` one at a time in `mask`.
pub(crate) fn channel_phase(mut mask: u64, holes: &[usize], particles: &[usize]) -> f64 {
    let mut sign = 1.0;
    for (&h, &p) in holes.iter().zip(particles) {
        sign *= hop_sign(mask, h, p);
        mask = (mask & !(1u64 << h)) | (1u64 << p);
    }
    sign
}

pub fn excitation_info(d1: &Determinant, d2: &Determinant) -> ExcitationInfo {
    let alpha = ChannelExcitation::from_masks(d1.alpha, d2.alpha);
    let beta = ChannelExcitation::from_masks(d1.beta, d2.beta);
    let phase = channel_phase(d1.alpha, &alpha.holes, &alpha.particles)
        * channel_phase(d1.beta, &beta.holes, &beta.particles);
    ExcitationInfo {
        alpha,
        beta,
        phase: if phase > 0.0 { 1 } else { -1 },
    }
}

fn channel_singles(mask: u64, n_orb: usize) -> impl Iterator<Item = u64> {
    let virt = low_bits(n_orb) & !mask;
    Bits(mask).flat_map(move |i| Bits(virt).map(move |a| mask ^ (1 << i) ^ (1 << a)))
}

fn channel_doubles(mask: u64, n_orb: usize) -> impl Iterator<Item = u64> {
    let virt = low_bits(n_orb) & !mask;
    Bits(mask).flat_map(move |i| {
        Bits(mask & !low_bits(i + 1)).flat_map(move |j| {
            Bits(virt).flat_map(move |a| {
                Bits(virt & !low_bits(a + 1))
                    .map(move |b| mask ^ (1 << i) ^ (1 << j) ^ (1 << a) ^ (1 << b))
            })
        })
    })
}

/// Every determinant one or two excitations away from `d`, each once.
///
/// Order: α singles, β singles, αα doubles, ββ doubles, αβ doubles.
pub fn singles_and_doubles(d: &Determinant, n_orb: usize) -> Vec<Determinant> {
    let mut out = Vec::new();
    out.extend(channel_singles(d.alpha, n_orb).map(|a| Determinant::new(a, d.beta)));
    out.extend(channel_singles(d.beta, n_orb).map(|b| Determinant::new(d.alpha, b)));
    out.extend(channel_doubles(d.alpha, n_orb).map(|a| Determinant::new(a, d.beta)));
    out.extend(channel_doubles(d.beta, n_orb).map(|b| Determinant::new(d.alpha, b)));
    for a in channel_singles(d.alpha, n_orb) {
        out.extend(channel_singles(d.beta, n_orb).map(|b| Determinant::new(a, b)));
    }
    out
}

/// Every determinant with `n_alpha`/`n_beta` electrons in `n_orb` orbitals, canonical order.
pub fn full_cas(n_orb: usize, n_alpha: usize, n_beta: usize) -> Vec<Determinant> {
    let alphas = strings(n_orb, n_alpha);
    let betas = strings(n_orb, n_beta);
    let mut out = Vec::with_capacity(alphas.len() * betas.len());
    for &a in &alphas {
        out.extend(betas.iter().map(|&b| Determinant::new(a, b)));
    }
    out
}

/// All masks over `n_orb` bits with `k` bits set, ascending.
pub fn strings(n_orb: usize, k: usize) -> Vec<u64> {
    let mut out = Vec::new();
    if k > n_orb {
        return out;
    }
    if k == 0 {
        out.push(0);
        return out;
    }
    let limit = low_bits(n_orb);
    let mut m = low_bits(k);
    loop {
        out.push(m);
        // Gosper's hack
        let c = m & m.wrapping_neg();
        let r = m.wrapping_add(c);
        if r == 0 || r & !limit != 0 {
            break;
        }
        m = (((r ^ m) >> 2) / c) | r;
        if m & !limit != 0 {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hf_masks() {
        assert_eq!(
            Determinant::hf(1, 1, 2).unwrap(),
            Determinant::new(0b01, 0b01)
        );
        let n2 = Determinant::hf(7, 7, 28).unwrap();
        assert_eq!(n2.alpha, 0x7f);
        assert_eq!(n2.beta, 0x7f);
        assert_eq!(Determinant::hf(0, 0, 5).unwrap(), Determinant::new(0, 0));
        assert!(Determinant::hf(3, 1, 2).is_err());
        assert!(Determinant::hf(1, 1, 65).is_err());
        assert_eq!(Determinant::hf(64, 64, 64).unwrap().alpha, u64::MAX);
    }

    #[test]
    fn identity_excitation() {
        let d = Determinant::new(0b0101, 0b0011);
        let e = excitation_info(&d, &d);
        assert_eq!((e.degree_alpha(), e.degree_beta()), (0, 0));
        assert_eq!(e.phase, 1);
    }

    #[test]
    fn single_excitation_phases() {
        // hole/particle indices below are 0-based: orbital 2 -> bit 1
        let e = excitation_info(&Determinant::new(0b0011, 0), &Determinant::new(0b0101, 0));
        assert_eq!((e.degree_alpha(), e.degree_beta()), (1, 0));
        assert_eq!(e.alpha.holes, vec![1]);
        assert_eq!(e.alpha.particles, vec![2]);
        assert_eq!(e.phase, 1);

        let e = excitation_info(&Determinant::new(0b0111, 0), &Determinant::new(0b1101, 0));
        assert_eq!(e.alpha.holes, vec![1]);
        assert_eq!(e.alpha.particles, vec![3]);
        assert_eq!(e.phase, -1);
    }

    #[test]
    fn render_round_trip() {
        let d = Determinant::new(0b0011, 0b0101);
        assert_eq!(d.render(4), "a:1100|b:1010");
        assert_eq!("a:1100|b:1010".parse::<Determinant>().unwrap(), d);
        assert!("a:110|b:1010".parse::<Determinant>().is_err());
        assert!("a:11x0|b:1010".parse::<Determinant>().is_err());
        assert!("1100|1010".parse::<Determinant>().is_err());
    }

    #[test]
    fn singles_doubles_counts() {
        let d = Determinant::hf(1, 0, 2).unwrap();
        let ex = singles_and_doubles(&d, 2);
        assert_eq!(ex, vec![Determinant::new(0b10, 0)]);

        let full = Determinant::hf(3, 3, 3).unwrap();
        assert!(singles_and_doubles(&full, 3).is_empty());
    }

    #[test]
    fn strings_enumeration() {
        assert_eq!(
            strings(4, 2),
            vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]
        );
        assert_eq!(strings(3, 0), vec![0]);
        assert_eq!(strings(3, 3), vec![0b111]);
        assert_eq!(strings(64, 64).len(), 1);
        assert_eq!(strings(64, 63).len(), 64);
        assert_eq!(full_cas(4, 2, 2).len(), 36);
    }
}
