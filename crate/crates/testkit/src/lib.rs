//! Brute-force reference implementations for tests.
//!
//! Nothing here shares code with `hivqe-core`: determinants are explicit
//! spin-orbital occupation vectors, operators act through Jordan–Wigner signs,
//! and circuits run on the full `2^n` state vector.

pub mod fermion;
pub mod random;
pub mod statevector;

/// All `n`-bit masks with exactly `k` bits set, ascending.
pub fn combinations(n: usize, k: usize) -> Vec<u64> {
    (0u64..(1u64 << n))
        .filter(|m| m.count_ones() as usize == k)
        .collect()
}
