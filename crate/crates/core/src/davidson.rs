//! Lowest eigenpair of a sparse symmetric matrix by Davidson iteration.
//!
//! Diagonal (Jacobi) preconditioning, a search space capped at
//! [`DavidsonOptions::max_space`] vectors, and thick restart onto the lowest
//! [`DavidsonOptions::restart_keep`] Ritz vectors. The small projected
//! eigenproblem is solved with cyclic Jacobi rotations.

use alloc::vec;
use alloc::vec::Vec;

use crate::civector::CIVector;
use crate::dense::fix_sign;
use crate::determinant::Determinant;
use crate::error::{Error, Result};
use crate::hamiltonian::{build_hamiltonian, SparseHamiltonian};
use crate::integrals::IntegralSet;
use crate::math;
use crate::rdm::occupations;
use crate::SubspaceResult;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DavidsonOptions {
    /// Convergence threshold on `‖Hv − Ev‖`.
    pub tol: f64,
    pub max_space: usize,
    pub restart_keep: usize,
    pub max_iterations: usize,
}

impl Default for DavidsonOptions {
    fn default() -> Self {
        DavidsonOptions {
            tol: 1e-8,
            max_space: 25,
            restart_keep: 2,
            max_iterations: 2000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    math::sqrt(dot(a, a))
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

/// Eigen-decomposition of a small symmetric row-major matrix by cyclic Jacobi.
/// Returns eigenvalues ascending and the matching eigenvectors as columns
/// (row-major `n x n`).
pub fn jacobi_eigh(n: usize, mut a: Vec<f64>) -> (Vec<f64>, Vec<f64>) {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[p * n + q] * a[p * n + q])
            .sum();
        if off <= 1e-30 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + math::sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / math::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vecs = vec![0.0; n * n];
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            vecs[k * n + new] = v[k * n + old];
        }
    }
    (values, vecs)
}

/// Unit vector on the smallest diagonal element (first on ties).
pub fn default_guess(h: &SparseHamiltonian) -> Vec<f64> {
    let d = h.diagonal();
    let mut best = 0;
    for (i, x) in d.iter().enumerate() {
        if *x < d[best] {
            best = i;
        }
    }
    let mut g = vec![0.0; d.len()];
    g[best] = 1.0;
    g
}

/// Weight of the full-support component mixed into every starting vector.
const GUESS_SPREAD: f64 = 1e-3;

/// Mixes a small fixed full-support vector into a normalized guess. A sparse
/// guess can otherwise sit inside an invariant subspace (a disconnected block,
/// or a single spin multiplet) that excludes the true lowest eigenvector.
fn spread(v: &mut [f64]) {
    let w: Vec<f64> = (0..v.len())
        .map(|i| (crate::rng::mix(i as u64 + 1) >> 11) as f64 / (1u64 << 53) as f64 - 0.5)
        .collect();
    let wn = norm(&w);
    if wn == 0.0 {
        return;
    }
    v.iter_mut()
        .zip(&w)
        .for_each(|(x, y)| *x += GUESS_SPREAD * y / wn);
    let n = norm(v);
    v.iter_mut().for_each(|x| *x /= n);
}

/// Orthogonalize `t` against the columns of `basis` (two Gram–Schmidt passes) and
/// normalize. Returns `false` if nothing independent remains.
fn orthonormalize(t: &mut [f64], basis: &[Vec<f64>]) -> bool {
    let start = norm(t);
    if start == 0.0 {
        return false;
    }
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, t);
            axpy(-c, b, t);
        }
    }
    let n = norm(t);
    if n <= 1e-10 * start || n < 1e-300 {
        return false;
    }
    t.iter_mut().for_each(|x| *x /= n);
    true
}

pub fn davidson(h: &SparseHamiltonian, guess: &[f64], opts: &DavidsonOptions) -> Result<Eigenpair> {
    let n = h.dimension();
    if n == 0 {
        return Err(Error::Input("empty matrix"));
    }
    if guess.len() != n {
        return Err(Error::Input("guess length does not match matrix dimension"));
    }
    let max_space = opts.max_space.max(opts.restart_keep + 1).max(2);

    let mut v0 = guess.to_vec();
    if !orthonormalize(&mut v0, &[]) {
        v0 = default_guess(h);
    }
    spread(&mut v0);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(max_space);
    let mut images: Vec<Vec<f64>> = Vec::with_capacity(max_space);
    let mut proj: Vec<f64> = Vec::new(); // row-major k x k, k = basis.len()

    let push = |basis: &mut Vec<Vec<f64>>,
                images: &mut Vec<Vec<f64>>,
                proj: &mut Vec<f64>,
                v: Vec<f64>| {
        let mut hv = vec![0.0; v.len()];
        h.matvec(&v, &mut hv);
        let k = basis.len();
        let mut next = vec![0.0; (k + 1) * (k + 1)];
        for i in 0..k {
            for j in 0..k {
                next[i * (k + 1) + j] = proj[i * k + j];
            }
        }
        for i in 0..k {
            let x = dot(&basis[i], &hv);
            next[i * (k + 1) + k] = x;
            next[k * (k + 1) + i] = x;
        }
        next[k * (k + 1) + k] = dot(&v, &hv);
        *proj = next;
        basis.push(v);
        images.push(hv);
    };

    push(&mut basis, &mut images, &mut proj, v0);
    let diag = h.diagonal();
    let mut residual = f64::INFINITY;

    for iter in 1..=opts.max_iterations {
        let k = basis.len();
        let (values, vecs) = jacobi_eigh(k, proj.clone());
        let theta = values[0];
        let mut x = vec![0.0; n];
        let mut hx = vec![0.0; n];
        for j in 0..k {
            let c = vecs[j * k];
            axpy(c, &basis[j], &mut x);
            axpy(c, &images[j], &mut hx);
        }
        let mut r = hx.clone();
        axpy(-theta, &x, &mut r);
        residual = norm(&r);

        if residual <= opts.tol {
            let xn = norm(&x);
            x.iter_mut().for_each(|c| *c /= xn);
            fix_sign(&mut x);
            return Ok(Eigenpair {
                value: theta,
                vector: x,
                residual,
                iterations: iter,
            });
        }

        if k >= max_space || k >= n {
            let keep = opts.restart_keep.min(k).max(1);
            let mut new_basis = Vec::with_capacity(max_space);
            for col in 0..keep {
                let mut y = vec![0.0; n];
                for j in 0..k {
                    axpy(vecs[j * k + col], &basis[j], &mut y);
                }
                if orthonormalize(&mut y, &new_basis) {
                    new_basis.push(y);
                }
            }
            basis.clear();
            images.clear();
            proj.clear();
            for y in new_basis {
                push(&mut basis, &mut images, &mut proj, y);
            }
        }

        let mut t: Vec<f64> = r
            .iter()
            .zip(diag)
            .map(|(ri, di)| {
                let mut denom = theta - di;
                if denom.abs() < 1e-8 {
                    denom = if denom < 0.0 { -1e-8 } else { 1e-8 };
                }
                ri / denom
            })
            .collect();
        if !orthonormalize(&mut t, &basis) {
            t = r.clone();
            if !orthonormalize(&mut t, &basis) {
                if basis.len() >= n {
                    // The basis spans the whole space; the remaining residual is round-off.
                    continue;
                }
                return Err(Error::Convergence {
                    iterations: iter,
                    residual,
                });
            }
        }
        push(&mut basis, &mut images, &mut proj, t);
    }
    Err(Error::Convergence {
        iterations: opts.max_iterations,
        residual,
    })
}

/// Ground state of `H` over `dets` by Davidson.
///
/// `guess` is projected onto `dets` (by determinant); when it has no overlap
/// the lowest-diagonal unit vector is used.
pub fn solve_subspace(
    dets: &[Determinant],
    s: &IntegralSet,
    guess: Option<&CIVector>,
    opts: &DavidsonOptions,
) -> Result<SubspaceResult> {
    if dets.is_empty() {
        return Err(Error::Input("empty determinant list"));
    }
    let h = build_hamiltonian(dets, s)?;
    let mut g = default_guess(&h);
    if let Some(v) = guess {
        let mut lookup: Vec<(Determinant, f64)> = v.iter().map(|(d, c)| (*d, c)).collect();
        lookup.sort_by_key(|a| a.0);
        let projected: Vec<f64> = dets
            .iter()
            .map(|d| match lookup.binary_search_by(|e| e.0.cmp(d)) {
                Ok(k) => lookup[k].1,
                Err(_) => 0.0,
            })
            .collect();
        if norm(&projected) > 1e-8 {
            g = projected;
        }
    }
    let pair = davidson(&h, &g, opts)?;
    let civector = CIVector::new(dets.to_vec(), pair.vector)?;
    let (occ_alpha, occ_beta) = occupations(&civector, s.n_orb());
    Ok(SubspaceResult {
        energy: pair.value,
        civector,
        occ_alpha,
        occ_beta,
        residual: pair.residual,
    })
}
