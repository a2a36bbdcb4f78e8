//! The handover loop: sample determinants from the ansatz, refine them,
//! diagonalize the sampled and accumulated subspaces, and update the circuit.
//!
//! Per iteration `t`:
//! 1. sample `shots` bitstrings at `θ_t` (readout noise optional);
//! 2. recover invalid strings against the previous total occupations
//!    (Hartree–Fock at `t = 0`), or drop them when recovery is off;
//! 3. optionally add all α/β recombinations;
//! 4. diagonalize the sampled set, giving `E_sampled`;
//! 5. keep the `sample_keep_limit` largest-weight sampled determinants;
//! 6. optionally add one heat-bath expansion step from them;
//! 7. merge into the accumulated set and diagonalize, giving `E_total`;
//! 8. optionally drop accumulated determinants with `c² < τ`;
//! 9. take an SPSA step on `θ` with `E_sampled` as the cost.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::ansatz::{apply_bitflip_noise, initial_parameters, sample, AnsatzCircuit};
use crate::civector::CIVector;
use crate::davidson::{solve_subspace, DavidsonOptions};
use crate::determinant::Determinant;
use crate::error::{Error, Result};
use crate::hci::HeatBathTable;
use crate::integrals::IntegralSet;
use crate::math;
use crate::recovery::{
    classical_expand, discard_invalid, recover, tensor_product_expand, ReferenceOccupations,
};
use crate::rng::derive;
use crate::spsa::{propose_params, SpsaSettings};
use crate::SubspaceResult;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HIVQEConfig {
    pub shots: u64,
    pub max_iterations: usize,
    pub sample_keep_limit: usize,
    /// Squared-coefficient cutoff for the accumulated space; 0 disables it.
    pub total_trunc_threshold: f64,
    pub enable_cr: bool,
    pub enable_tp: bool,
    pub enable_ce: bool,
    pub epsilon_ce: f64,
    pub optimizer: SpsaSettings,
    pub energy_tol: f64,
    pub patience: usize,
    pub seed: u64,
    /// Readout bit-flip probability applied to every sampled qubit.
    pub noise: f64,
    /// Initial parameters are uniform in `[-init_scale, init_scale]`.
    pub init_scale: f64,
    pub davidson: DavidsonOptions,
}

impl Default for HIVQEConfig {
    fn default() -> Self {
        HIVQEConfig {
            shots: 4000,
            max_iterations: 20,
            sample_keep_limit: 50,
            total_trunc_threshold: 0.0,
            enable_cr: true,
            enable_tp: true,
            enable_ce: true,
            epsilon_ce: 1e-3,
            optimizer: SpsaSettings::default(),
            energy_tol: 1e-6,
            patience: 3,
            seed: 0,
            noise: 0.0,
            init_scale: 1.0,
            davidson: DavidsonOptions::default(),
        }
    }
}

impl HIVQEConfig {
    pub fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(Error::Input("shots must be at least 1"));
        }
        if self.sample_keep_limit == 0 {
            return Err(Error::Input("sample_keep_limit must be at least 1"));
        }
        if !(0.0..1.0).contains(&self.total_trunc_threshold) {
            return Err(Error::Input("total_trunc_threshold must lie in [0, 1)"));
        }
        if !(0.0..1.0).contains(&self.noise) {
            return Err(Error::Input("noise must lie in [0, 1)"));
        }
        if self.max_iterations == 0 || self.patience == 0 {
            return Err(Error::Input(
                "max_iterations and patience must be at least 1",
            ));
        }
        if self.enable_ce && (self.epsilon_ce.is_nan() || self.epsilon_ce <= 0.0) {
            return Err(Error::Input("epsilon_ce must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HivqeStep {
    pub iter: usize,
    pub e_sampled: f64,
    pub e_total: f64,
    pub n_sampled: usize,
    pub n_total: usize,
    pub n_shots: u64,
    pub n_valid: u64,
    pub n_repaired: u64,
    pub n_fallback: u64,
    pub n_discarded: u64,
    pub theta_norm: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct HIVQETrace {
    pub steps: Vec<HivqeStep>,
    /// False when total-space truncation is active, which voids the
    /// non-increasing `E_total` guarantee.
    pub monotone_expected: bool,
}

impl HIVQETrace {
    /// Iterations where `E_total` rose by more than `slack`.
    pub fn monotonicity_violations(&self, slack: f64) -> Vec<usize> {
        self.steps
            .windows(2)
            .filter(|w| w[1].e_total > w[0].e_total + slack)
            .map(|w| w[1].iter)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HivqeOutcome {
    pub trace: HIVQETrace,
    pub result: SubspaceResult,
    pub converged: bool,
    pub theta: Vec<f64>,
}

/// Failure inside [`run`], carrying the trace recorded so far.
#[derive(Clone, Debug, PartialEq)]
pub struct RunError {
    pub error: Error,
    pub trace: HIVQETrace,
}

/// Top `k` determinants by `c²`, ties broken by canonical determinant order.
pub fn truncate_sampled(v: &CIVector, k: usize) -> Vec<Determinant> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    let c = v.coeffs();
    let d = v.dets();
    order.sort_by(|&i, &j| {
        (c[j] * c[j])
            .total_cmp(&(c[i] * c[i]))
            .then(d[i].cmp(&d[j]))
    });
    order.into_iter().take(k).map(|i| d[i]).collect()
}

/// `{ i : c_i² >= tau }` in `v`'s order; never empty.
pub fn truncate_total(v: &CIVector, tau: f64) -> Vec<Determinant> {
    let kept: Vec<Determinant> = v
        .iter()
        .filter(|(_, c)| c * c >= tau)
        .map(|(d, _)| *d)
        .collect();
    if kept.is_empty() && !v.is_empty() {
        return truncate_sampled(v, 1);
    }
    kept
}

struct Sampled {
    dets: BTreeSet<Determinant>,
    result: SubspaceResult,
    n_valid: u64,
    n_repaired: u64,
    n_fallback: u64,
    n_discarded: u64,
}

struct Context<'a> {
    s: &'a IntegralSet,
    cfg: &'a HIVQEConfig,
    circuit: &'a AnsatzCircuit,
    reference: Determinant,
}

impl Context<'_> {
    fn sampled_subspace(
        &self,
        theta: &[f64],
        occ: &ReferenceOccupations,
        guess: Option<&CIVector>,
        seed: u64,
        iteration: usize,
    ) -> Result<Sampled> {
        let (na, nb) = (self.circuit.n_alpha, self.circuit.n_beta);
        for attempt in 0..2u64 {
            let s = derive(seed, &[attempt]);
            let raw = sample(self.circuit, theta, &self.reference, self.cfg.shots, s)?;
            let noisy = apply_bitflip_noise(&raw, self.cfg.noise, derive(s, &[1]))?;
            let outcome = if self.cfg.enable_cr {
                recover(&noisy, occ, na, nb, derive(s, &[2]))?
            } else {
                discard_invalid(&noisy, na, nb)
            };
            let mut dets = outcome.dets();
            if dets.is_empty() {
                log::warn!("iteration {iteration}: no valid configurations, resampling");
                continue;
            }
            if self.cfg.enable_tp {
                dets = tensor_product_expand(&dets);
            }
            let list: Vec<Determinant> = dets.iter().copied().collect();
            let result = solve_subspace(&list, self.s, guess, &self.cfg.davidson)?;
            let kept = outcome.n_valid + outcome.n_repaired;
            return Ok(Sampled {
                dets,
                result,
                n_valid: outcome.n_valid,
                n_repaired: outcome.n_repaired,
                n_fallback: outcome.n_fallback,
                n_discarded: noisy.shots - kept,
            });
        }
        Err(Error::EmptySample { iteration })
    }
}

fn norm(v: &[f64]) -> f64 {
    math::sqrt(v.iter().map(|x| x * x).sum())
}

/// Run the loop from parameters drawn with `cfg.init_scale` and `cfg.seed`.
pub fn run(
    s: &IntegralSet,
    cfg: &HIVQEConfig,
    circuit: &AnsatzCircuit,
) -> core::result::Result<HivqeOutcome, RunError> {
    let theta0 = initial_parameters(circuit.n_params, cfg.init_scale, cfg.seed);
    run_from(s, cfg, circuit, theta0)
}

pub fn run_from(
    s: &IntegralSet,
    cfg: &HIVQEConfig,
    circuit: &AnsatzCircuit,
    theta0: Vec<f64>,
) -> core::result::Result<HivqeOutcome, RunError> {
    let mut trace = HIVQETrace {
        steps: Vec::new(),
        monotone_expected: cfg.total_trunc_threshold == 0.0,
    };
    macro_rules! tryrun {
        ($e:expr) => {
            match $e {
                Ok(v) => v,
                Err(error) => return Err(RunError { error, trace }),
            }
        };
    }
    tryrun!(cfg.validate());
    if circuit.n_orb != s.n_orb() || circuit.n_alpha != s.n_alpha() || circuit.n_beta != s.n_beta()
    {
        tryrun!(Err(Error::Input("circuit does not match the integral set")));
    }
    if theta0.len() != circuit.n_params {
        tryrun!(Err(Error::ParameterLength {
            expected: circuit.n_params,
            got: theta0.len(),
        }));
    }
    let reference = tryrun!(Determinant::hf(
        circuit.n_alpha,
        circuit.n_beta,
        circuit.n_orb
    ));
    let ctx = Context {
        s,
        cfg,
        circuit,
        reference,
    };
    let table = if cfg.enable_ce {
        Some(HeatBathTable::build(s))
    } else {
        None
    };

    let mut theta = theta0;
    let mut history: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut accumulated: BTreeSet<Determinant> = BTreeSet::new();
    let mut total: Option<SubspaceResult> = None;
    let mut streak = 0;
    let mut converged = false;

    for t in 0..cfg.max_iterations {
        let occ = match &total {
            Some(r) => ReferenceOccupations::from_result(r),
            None => ReferenceOccupations::hartree_fock(s.n_orb(), s.n_alpha(), s.n_beta()),
        };
        let guess_owned = total.as_ref().map(|r| r.civector.clone());
        let guess = guess_owned.as_ref();
        let main = tryrun!(ctx.sampled_subspace(
            &theta,
            &occ,
            guess,
            derive(cfg.seed, &[t as u64, 0]),
            t + 1
        ));

        let top: BTreeSet<Determinant> =
            truncate_sampled(&main.result.civector, cfg.sample_keep_limit)
                .into_iter()
                .collect();
        let kept = main.result.civector.restricted_to(&top);
        let additions = match &table {
            Some(tb) => classical_expand(&kept, cfg.epsilon_ce, tb, s),
            None => top,
        };
        accumulated.extend(additions);
        let list: Vec<Determinant> = accumulated.iter().copied().collect();
        let next = tryrun!(solve_subspace(&list, s, guess, &cfg.davidson));

        let step = HivqeStep {
            iter: t + 1,
            e_sampled: main.result.energy,
            e_total: next.energy,
            n_sampled: main.dets.len(),
            n_total: list.len(),
            n_shots: cfg.shots,
            n_valid: main.n_valid,
            n_repaired: main.n_repaired,
            n_fallback: main.n_fallback,
            n_discarded: main.n_discarded,
            theta_norm: norm(&theta),
        };
        if let Some(prev) = &total {
            if (next.energy - prev.energy).abs() < cfg.energy_tol {
                streak += 1;
            } else {
                streak = 0;
            }
        }
        trace.steps.push(step);

        if cfg.total_trunc_threshold > 0.0 {
            accumulated = truncate_total(&next.civector, cfg.total_trunc_threshold)
                .into_iter()
                .collect();
        }
        total = Some(next);

        if streak >= cfg.patience {
            converged = true;
            break;
        }
        if t + 1 == cfg.max_iterations {
            break;
        }

        history.push((theta.clone(), main.result.energy));
        let mut evals = 0u64;
        let occ_ref = &occ;
        theta = tryrun!(propose_params(
            &history,
            &cfg.optimizer,
            derive(cfg.seed, &[t as u64, 1]),
            |th: &[f64]| {
                evals += 1;
                ctx.sampled_subspace(
                    th,
                    occ_ref,
                    guess,
                    derive(cfg.seed, &[t as u64, 2, evals]),
                    t + 1,
                )
                .map(|r| r.result.energy)
            },
        ));
    }

    Ok(HivqeOutcome {
        trace,
        result: total.expect("at least one iteration ran"),
        converged,
        theta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn vector(coeffs: &[f64]) -> CIVector {
        let dets = (0..coeffs.len())
            .map(|i| Determinant::new(1 << i, 1))
            .collect();
        CIVector::new(dets, coeffs.to_vec()).unwrap()
    }

    #[test]
    fn truncate_sampled_basic() {
        let v = vector(&[0.3, 0.9, 0.3]);
        assert_eq!(truncate_sampled(&v, 1), vec![Determinant::new(2, 1)]);
        assert_eq!(truncate_sampled(&v, 10).len(), 3);
        // tie between positions 0 and 2 goes to the canonically smaller determinant
        assert_eq!(
            truncate_sampled(&v, 2),
            vec![Determinant::new(2, 1), Determinant::new(1, 1)]
        );
    }

    #[test]
    fn truncate_total_basic() {
        let v = vector(&[0.1, 0.7, 0.2]);
        assert_eq!(truncate_total(&v, 0.0).len(), 3);
        let kept = truncate_total(&v, 0.0101);
        assert_eq!(kept, vec![Determinant::new(2, 1), Determinant::new(4, 1)]);
        assert_eq!(truncate_total(&v, 0.9), vec![Determinant::new(2, 1)]);
    }

    #[test]
    fn config_validation() {
        let mut c = HIVQEConfig::default();
        assert!(c.validate().is_ok());
        c.total_trunc_threshold = 1.0;
        assert!(c.validate().is_err());
        let c = HIVQEConfig {
            shots: 0,
            ..HIVQEConfig::default()
        };
        assert!(c.validate().is_err());
    }
}
