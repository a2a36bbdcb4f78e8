//! Excitation-preserving ansatz simulated inside fixed particle-number sectors.
//!
//! Qubits `0..n_orb` are the α spin orbitals, `n_orb..2·n_orb` the β ones.
//! Every gate is a real Givens rotation between adjacent qubits of the same
//! spin block, so the α and β registers never entangle and the state is the
//! product of two chain states, each over the `C(n_orb, n_σ)` occupation
//! strings of its spin.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::determinant::{low_bits, strings, Determinant};
use crate::error::{Error, Result};
use crate::math;
use crate::rng;

/// Largest `n_orb` accepted by [`build_epa`].
pub const MAX_ANSATZ_ORBITALS: usize = 32;
/// Largest number of occupation strings simulated per spin chain.
pub const MAX_CHAIN_STRINGS: usize = 1 << 24;

/// Givens rotation between qubits `a < b = a + 1` driven by `theta[param]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GivensGate {
    pub a: usize,
    pub b: usize,
    pub param: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnsatzCircuit {
    pub n_orb: usize,
    pub n_alpha: usize,
    pub n_beta: usize,
    pub reps: usize,
    pub gates: Vec<GivensGate>,
    pub n_params: usize,
}

impl AnsatzCircuit {
    pub fn n_qubits(&self) -> usize {
        2 * self.n_orb
    }

    /// Whether `reps` lies in the 2–4 range the linear EPA was studied with.
    pub fn reps_in_studied_range(&self) -> bool {
        (2..=4).contains(&self.reps)
    }
}

/// Linear-entanglement excitation-preserving ansatz with `reps` repetitions.
///
/// Each repetition applies blocks on `(0,1), (1,2), …, (n−2,n−1)` of the α
/// register, then the same ladder on the β register; every block gets its
/// own parameter.
pub fn build_epa(
    n_orb: usize,
    n_alpha: usize,
    n_beta: usize,
    reps: usize,
) -> Result<AnsatzCircuit> {
    if n_orb > MAX_ANSATZ_ORBITALS {
        return Err(Error::Capacity {
            what: "ansatz orbital count",
            size: n_orb,
            limit: MAX_ANSATZ_ORBITALS,
        });
    }
    if n_orb == 0 || n_alpha > n_orb || n_beta > n_orb {
        return Err(Error::Domain {
            n_orb,
            n_alpha,
            n_beta,
        });
    }
    if !(2..=4).contains(&reps) {
        log::warn!("EPA with {reps} repetitions is outside the studied 2-4 range");
    }
    let mut gates = Vec::with_capacity(reps * 2 * n_orb.saturating_sub(1));
    for _ in 0..reps {
        for offset in [0, n_orb] {
            for k in 0..n_orb.saturating_sub(1) {
                let param = gates.len();
                gates.push(GivensGate {
                    a: offset + k,
                    b: offset + k + 1,
                    param,
                });
            }
        }
    }
    let n_params = gates.len();
    Ok(AnsatzCircuit {
        n_orb,
        n_alpha,
        n_beta,
        reps,
        gates,
        n_params,
    })
}

/// Amplitudes of one spin register over its occupation strings.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainState {
    pub strings: Vec<u64>,
    pub amps: Vec<f64>,
}

impl ChainState {
    fn basis(n_orb: usize, k: usize, reference: u64) -> Result<Self> {
        let strings = strings(n_orb, k);
        if strings.len() > MAX_CHAIN_STRINGS {
            return Err(Error::Capacity {
                what: "sector strings per spin",
                size: strings.len(),
                limit: MAX_CHAIN_STRINGS,
            });
        }
        let mut amps = vec![0.0; strings.len()];
        let idx = strings
            .binary_search(&reference)
            .map_err(|_| Error::Input("reference is outside the circuit's particle sector"))?;
        amps[idx] = 1.0;
        Ok(ChainState { strings, amps })
    }

    fn index(&self, s: u64) -> Option<usize> {
        self.strings.binary_search(&s).ok()
    }

    /// Rotate the `{|01⟩, |10⟩}` subspace of local qubits `(a, b)`, where
    /// `|01⟩` has `a` empty and `b` filled.
    fn apply_givens(&mut self, a: usize, b: usize, theta: f64) {
        let (c, s) = (math::cos(theta), math::sin(theta));
        let (ma, mb) = (1u64 << a, 1u64 << b);
        for i in 0..self.strings.len() {
            let st = self.strings[i];
            if st & ma == 0 && st & mb != 0 {
                let j = self.index(st ^ ma ^ mb).expect("partner string in sector");
                let x01 = self.amps[i];
                let x10 = self.amps[j];
                self.amps[i] = c * x01 - s * x10;
                self.amps[j] = s * x01 + c * x10;
            }
        }
    }

    pub fn amplitude(&self, s: u64) -> f64 {
        self.index(s).map_or(0.0, |i| self.amps[i])
    }

    fn cumulative(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.amps
            .iter()
            .map(|a| {
                acc += a * a;
                acc
            })
            .collect()
    }
}

/// Product state `ψ_α ⊗ ψ_β` in the circuit's sector.
#[derive(Clone, Debug, PartialEq)]
pub struct SectorState {
    pub alpha: ChainState,
    pub beta: ChainState,
}

impl SectorState {
    pub fn amplitude(&self, d: &Determinant) -> f64 {
        self.alpha.amplitude(d.alpha) * self.beta.amplitude(d.beta)
    }

    pub fn dimension(&self) -> usize {
        self.alpha.strings.len() * self.beta.strings.len()
    }

    /// Every sector determinant with its amplitude, canonical order.
    pub fn amplitudes(&self) -> Vec<(Determinant, f64)> {
        let mut out = Vec::with_capacity(self.dimension());
        for (&a, &ca) in self.alpha.strings.iter().zip(&self.alpha.amps) {
            for (&b, &cb) in self.beta.strings.iter().zip(&self.beta.amps) {
                out.push((Determinant::new(a, b), ca * cb));
            }
        }
        out
    }

    pub fn norm_sq(&self) -> f64 {
        let na: f64 = self.alpha.amps.iter().map(|x| x * x).sum();
        let nb: f64 = self.beta.amps.iter().map(|x| x * x).sum();
        na * nb
    }
}

pub fn statevector(
    c: &AnsatzCircuit,
    theta: &[f64],
    reference: &Determinant,
) -> Result<SectorState> {
    if theta.len() != c.n_params {
        return Err(Error::ParameterLength {
            expected: c.n_params,
            got: theta.len(),
        });
    }
    if !reference.is_valid(c.n_orb, c.n_alpha, c.n_beta) {
        return Err(Error::Input(
            "reference is outside the circuit's particle sector",
        ));
    }
    let mut alpha = ChainState::basis(c.n_orb, c.n_alpha, reference.alpha)?;
    let mut beta = ChainState::basis(c.n_orb, c.n_beta, reference.beta)?;
    for g in &c.gates {
        let t = theta[g.param];
        if g.a < c.n_orb {
            alpha.apply_givens(g.a, g.b, t);
        } else {
            beta.apply_givens(g.a - c.n_orb, g.b - c.n_orb, t);
        }
    }
    Ok(SectorState { alpha, beta })
}

/// A raw measured bitstring over `2·n_orb` qubits, split by spin block.
/// Unlike [`Determinant`] its popcounts are unconstrained.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bitstring {
    pub alpha: u64,
    pub beta: u64,
}

impl Bitstring {
    pub fn from_det(d: &Determinant) -> Self {
        Bitstring {
            alpha: d.alpha,
            beta: d.beta,
        }
    }

    pub fn as_det(&self) -> Determinant {
        Determinant::new(self.alpha, self.beta)
    }

    pub fn in_sector(&self, n_alpha: usize, n_beta: usize) -> bool {
        self.alpha.count_ones() as usize == n_alpha && self.beta.count_ones() as usize == n_beta
    }

    /// Little-endian rendering: character `k` is qubit `k` (α block first).
    pub fn render(&self, n_orb: usize) -> String {
        let mut s = String::with_capacity(2 * n_orb);
        for mask in [self.alpha, self.beta] {
            for p in 0..n_orb {
                s.push(if mask >> p & 1 == 1 { '1' } else { '0' });
            }
        }
        s
    }

    pub fn parse(s: &str) -> Option<Self> {
        if !s.len().is_multiple_of(2) || s.len() > 2 * 64 {
            return None;
        }
        let n = s.len() / 2;
        let mut out = Bitstring::default();
        for (k, ch) in s.chars().enumerate() {
            let bit = match ch {
                '1' => 1u64,
                '0' => 0,
                _ => return None,
            };
            if k < n {
                out.alpha |= bit << k;
            } else {
                out.beta |= bit << (k - n);
            }
        }
        Some(out)
    }
}

/// Shot histogram from one sampling call.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleBatch {
    pub n_orb: usize,
    pub shots: u64,
    pub counts: BTreeMap<Bitstring, u64>,
    pub seed: u64,
}

impl SampleBatch {
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }
}

fn draw(cum: &[f64], rng: &mut impl Rng) -> usize {
    let total = *cum.last().unwrap();
    let u = rng.random::<f64>() * total;
    cum.partition_point(|&c| c <= u).min(cum.len() - 1)
}

/// I.i.d. measurements of the circuit state in the computational basis.
pub fn sample(
    c: &AnsatzCircuit,
    theta: &[f64],
    reference: &Determinant,
    shots: u64,
    seed: u64,
) -> Result<SampleBatch> {
    if shots == 0 {
        return Err(Error::Input("shots must be positive"));
    }
    let state = statevector(c, theta, reference)?;
    Ok(sample_state(&state, c.n_orb, shots, seed))
}

pub fn sample_state(state: &SectorState, n_orb: usize, shots: u64, seed: u64) -> SampleBatch {
    let ca = state.alpha.cumulative();
    let cb = state.beta.cumulative();
    let mut rng = rng::stream(seed, &[0x5a4d_504c]);
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        let a = state.alpha.strings[draw(&ca, &mut rng)];
        let b = state.beta.strings[draw(&cb, &mut rng)];
        *counts.entry(Bitstring { alpha: a, beta: b }).or_insert(0) += 1;
    }
    SampleBatch {
        n_orb,
        shots,
        counts,
        seed,
    }
}

/// Independent readout bit flips with probability `p` on every qubit of every shot.
pub fn apply_bitflip_noise(b: &SampleBatch, p: f64, seed: u64) -> Result<SampleBatch> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::Input("flip probability must lie in [0, 1)"));
    }
    if p == 0.0 {
        return Ok(b.clone());
    }
    let mut rng = rng::stream(seed, &[0x4e4f_4953]);
    let full = low_bits(b.n_orb);
    let mut counts = BTreeMap::new();
    for (bits, &mult) in &b.counts {
        for _ in 0..mult {
            let mut out = *bits;
            for q in 0..b.n_orb {
                if rng.random::<f64>() < p {
                    out.alpha ^= 1 << q;
                }
            }
            for q in 0..b.n_orb {
                if rng.random::<f64>() < p {
                    out.beta ^= 1 << q;
                }
            }
            out.alpha &= full;
            out.beta &= full;
            *counts.entry(out).or_insert(0) += 1;
        }
    }
    Ok(SampleBatch {
        n_orb: b.n_orb,
        shots: b.shots,
        counts,
        seed: b.seed,
    })
}

/// Uniform parameters in `[-scale, scale]`.
pub fn initial_parameters(n_params: usize, scale: f64, seed: u64) -> Vec<f64> {
    let mut rng = rng::stream(seed, &[0x494e_4954]);
    (0..n_params)
        .map(|_| scale * (2.0 * rng.random::<f64>() - 1.0))
        .collect()
}
