//! Simultaneous-perturbation stochastic approximation.

use alloc::vec::Vec;

use rand::Rng;

use crate::math;
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpsaSettings {
    pub a: f64,
    pub c: f64,
    /// Stability constant `A` in the step-size denominator.
    pub big_a: f64,
    pub alpha: f64,
    pub gamma: f64,
}

impl Default for SpsaSettings {
    fn default() -> Self {
        SpsaSettings {
            a: 0.05,
            c: 0.1,
            big_a: 10.0,
            alpha: 0.602,
            gamma: 0.101,
        }
    }
}

impl SpsaSettings {
    /// `(a_k, c_k)` for step `k` (0-based).
    pub fn gains(&self, k: usize) -> (f64, f64) {
        let k = k as f64;
        (
            self.a / math::powf(k + 1.0 + self.big_a, self.alpha),
            self.c / math::powf(k + 1.0, self.gamma),
        )
    }
}

/// Rademacher (±1) perturbation for step `k`.
pub fn perturbation(n: usize, k: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng::stream(seed, &[0x5350_5341, k as u64]);
    (0..n)
        .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
        .collect()
}

/// One SPSA update of `theta` at step `k` with two cost evaluations.
pub fn spsa_step<E>(
    theta: &[f64],
    k: usize,
    settings: &SpsaSettings,
    seed: u64,
    mut cost: impl FnMut(&[f64]) -> Result<f64, E>,
) -> Result<Vec<f64>, E> {
    let (ak, ck) = settings.gains(k);
    let delta = perturbation(theta.len(), k, seed);
    let plus: Vec<f64> = theta.iter().zip(&delta).map(|(t, d)| t + ck * d).collect();
    let minus: Vec<f64> = theta.iter().zip(&delta).map(|(t, d)| t - ck * d).collect();
    let f_plus = cost(&plus)?;
    let f_minus = cost(&minus)?;
    let diff = f_plus - f_minus;
    Ok(theta
        .iter()
        .zip(&delta)
        .map(|(t, d)| t - ak * diff / (2.0 * ck * d))
        .collect())
}

/// Next parameters from the optimization history `(θ_j, E_j)`; the step
/// index is `history.len() − 1` and the update starts from the last `θ`.
pub fn propose_params<E>(
    history: &[(Vec<f64>, f64)],
    settings: &SpsaSettings,
    seed: u64,
    cost: impl FnMut(&[f64]) -> Result<f64, E>,
) -> Result<Vec<f64>, E> {
    let (theta, _) = history.last().expect("history must be nonempty");
    spsa_step(theta, history.len() - 1, settings, seed, cost)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::convert::Infallible;

    #[test]
    fn flat_cost_leaves_theta() {
        let theta = alloc::vec![0.3, -0.2, 0.1];
        let next = spsa_step(&theta, 0, &SpsaSettings::default(), 4, |_| {
            Ok::<_, Infallible>(1.5)
        })
        .unwrap();
        assert_eq!(next, theta);
    }

    #[test]
    fn gain_schedule() {
        let s = SpsaSettings::default();
        let (a0, c0) = s.gains(0);
        assert!((a0 - 0.05 / libm::pow(11.0, 0.602)).abs() < 1e-15);
        assert_eq!(c0, 0.1);
        let (a9, c9) = s.gains(9);
        assert!(a9 < a0 && c9 < c0);
    }

    #[test]
    fn perturbation_is_rademacher_and_seeded() {
        let p = perturbation(64, 3, 17);
        assert!(p.iter().all(|x| *x == 1.0 || *x == -1.0));
        assert_eq!(p, perturbation(64, 3, 17));
        assert_ne!(p, perturbation(64, 4, 17));
    }
}
