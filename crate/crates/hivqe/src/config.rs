//! Run configuration: a TOML document with command-line overrides on top.

use std::path::Path;

use anyhow::Context as _;
use hivqe_core::davidson::DavidsonOptions;
use hivqe_core::{HCIConfig, HIVQEConfig, SpsaSettings};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Dense diagonalization of the complete active space.
    Fci,
    /// Heat-bath selected CI.
    #[default]
    Hci,
    /// Sampled hybrid loop with a simulated circuit.
    Hivqe,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Fci => "fci",
            Method::Hci => "hci",
            Method::Hivqe => "hivqe",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HciSection {
    pub epsilon: f64,
    pub max_iterations: usize,
    pub energy_tol: f64,
}

impl Default for HciSection {
    fn default() -> Self {
        let c = HCIConfig::new(1e-4);
        Self {
            epsilon: c.epsilon,
            max_iterations: c.max_iterations,
            energy_tol: c.energy_tol,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerSection {
    pub a: f64,
    pub c: f64,
    pub big_a: f64,
    pub alpha: f64,
    pub gamma: f64,
}

impl Default for OptimizerSection {
    fn default() -> Self {
        let s = SpsaSettings::default();
        Self {
            a: s.a,
            c: s.c,
            big_a: s.big_a,
            alpha: s.alpha,
            gamma: s.gamma,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HivqeSection {
    pub shots: u64,
    pub max_iterations: usize,
    pub sample_keep_limit: usize,
    pub total_trunc_threshold: f64,
    pub enable_cr: bool,
    pub enable_tp: bool,
    pub enable_ce: bool,
    pub epsilon_ce: f64,
    pub energy_tol: f64,
    pub patience: usize,
    /// Bit-flip probability applied to every sampled qubit.
    pub noise: f64,
    pub init_scale: f64,
    /// Ansatz repetitions.
    pub reps: usize,
    pub optimizer: OptimizerSection,
}

impl Default for HivqeSection {
    fn default() -> Self {
        let c = HIVQEConfig::default();
        Self {
            shots: c.shots,
            max_iterations: c.max_iterations,
            sample_keep_limit: c.sample_keep_limit,
            total_trunc_threshold: c.total_trunc_threshold,
            enable_cr: c.enable_cr,
            enable_tp: c.enable_tp,
            enable_ce: c.enable_ce,
            epsilon_ce: c.epsilon_ce,
            energy_tol: c.energy_tol,
            patience: c.patience,
            noise: c.noise,
            init_scale: c.init_scale,
            reps: 4,
            optimizer: OptimizerSection::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DavidsonSection {
    pub tol: f64,
    pub max_space: usize,
    pub restart_keep: usize,
    pub max_iterations: usize,
}

impl Default for DavidsonSection {
    fn default() -> Self {
        let d = DavidsonOptions::default();
        Self {
            tol: d.tol,
            max_space: d.max_space,
            restart_keep: d.restart_keep,
            max_iterations: d.max_iterations,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub method: Method,
    pub seed: u64,
    pub hci: HciSection,
    pub hivqe: HivqeSection,
    pub davidson: DavidsonSection,
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub method: Option<Method>,
    /// HCI threshold, or the classical-expansion threshold for `hivqe`
    /// (which also switches expansion on).
    pub epsilon: Option<f64>,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> anyhow::Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(m) = o.method {
            self.method = m;
        }
        if let Some(seed) = o.seed {
            self.seed = seed;
        }
        if let Some(shots) = o.shots {
            self.hivqe.shots = shots;
        }
        if let Some(eps) = o.epsilon {
            match self.method {
                Method::Hivqe => {
                    self.hivqe.epsilon_ce = eps;
                    self.hivqe.enable_ce = true;
                }
                _ => self.hci.epsilon = eps,
            }
        }
    }

    pub fn davidson_options(&self) -> DavidsonOptions {
        DavidsonOptions {
            tol: self.davidson.tol,
            max_space: self.davidson.max_space,
            restart_keep: self.davidson.restart_keep,
            max_iterations: self.davidson.max_iterations,
        }
    }

    pub fn hci_config(&self) -> HCIConfig {
        HCIConfig {
            epsilon: self.hci.epsilon,
            max_iterations: self.hci.max_iterations,
            energy_tol: self.hci.energy_tol,
            davidson: self.davidson_options(),
        }
    }

    pub fn hivqe_config(&self) -> HIVQEConfig {
        let h = &self.hivqe;
        HIVQEConfig {
            shots: h.shots,
            max_iterations: h.max_iterations,
            sample_keep_limit: h.sample_keep_limit,
            total_trunc_threshold: h.total_trunc_threshold,
            enable_cr: h.enable_cr,
            enable_tp: h.enable_tp,
            enable_ce: h.enable_ce,
            epsilon_ce: h.epsilon_ce,
            optimizer: SpsaSettings {
                a: h.optimizer.a,
                c: h.optimizer.c,
                big_a: h.optimizer.big_a,
                alpha: h.optimizer.alpha,
                gamma: h.optimizer.gamma,
            },
            energy_tol: h.energy_tol,
            patience: h.patience,
            seed: self.seed,
            noise: h.noise,
            init_scale: h.init_scale,
            davidson: self.davidson_options(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win_over_file() {
        let mut c =
            RunConfig::from_toml("method = \"hci\"\nseed = 3\n[hci]\nepsilon = 1e-3\n").unwrap();
        assert_eq!(c.hci.epsilon, 1e-3);
        c.apply(&Overrides {
            epsilon: Some(1e-5),
            seed: Some(8),
            ..Overrides::default()
        });
        assert_eq!(c.hci.epsilon, 1e-5);
        assert_eq!(c.seed, 8);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::from_toml("[hivqe]\nshotz = 10\n").is_err());
    }

    #[test]
    fn epsilon_for_hivqe_enables_expansion() {
        let mut c = RunConfig {
            method: Method::Hivqe,
            ..RunConfig::default()
        };
        c.apply(&Overrides {
            epsilon: Some(1e-3),
            ..Overrides::default()
        });
        assert!(c.hivqe.enable_ce);
        assert_eq!(c.hivqe_config().epsilon_ce, 1e-3);
    }
}
