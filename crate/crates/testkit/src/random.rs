use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fermion::DenseIntegrals;

/// Random real integrals with the 8-fold permutational symmetry.
pub fn random_integrals(n: usize, seed: u64) -> DenseIntegrals {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = vec![0.0; n * n];
    for p in 0..n {
        for q in p..n {
            let v = rng.random_range(-1.0..1.0);
            h[p * n + q] = v;
            h[q * n + p] = v;
        }
    }
    let mut g = vec![0.0; n * n * n * n];
    let idx = |p: usize, q: usize, r: usize, s: usize| ((p * n + q) * n + r) * n + s;
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let key = canonical(p, q, r, s);
                    if key != (p, q, r, s) {
                        continue;
                    }
                    let v = rng.random_range(-0.5..0.5);
                    for (a, b, c, d) in [
                        (p, q, r, s),
                        (q, p, r, s),
                        (p, q, s, r),
                        (q, p, s, r),
                        (r, s, p, q),
                        (s, r, p, q),
                        (r, s, q, p),
                        (s, r, q, p),
                    ] {
                        g[idx(a, b, c, d)] = v;
                    }
                }
            }
        }
    }
    DenseIntegrals {
        n,
        core: rng.random_range(-1.0..1.0),
        h,
        g,
    }
}

fn canonical(p: usize, q: usize, r: usize, s: usize) -> (usize, usize, usize, usize) {
    let mut best = (p, q, r, s);
    for c in [
        (q, p, r, s),
        (p, q, s, r),
        (q, p, s, r),
        (r, s, p, q),
        (s, r, p, q),
        (r, s, q, p),
        (s, r, q, p),
    ] {
        if c < best {
            best = c;
        }
    }
    best
}

/// Random symmetric sparse matrix as a dense row-major array with roughly
/// `density` of the off-diagonal pairs filled. Diagonal entries spread over
/// `[-diag_spread, diag_spread]`.
pub fn random_sparse_symmetric(n: usize, density: f64, diag_spread: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = rng.random_range(-diag_spread..diag_spread);
        for j in (i + 1)..n {
            if rng.random::<f64>() < density {
                let v = rng.random_range(-1.0..1.0);
                m[i * n + j] = v;
                m[j * n + i] = v;
            }
        }
    }
    m
}
