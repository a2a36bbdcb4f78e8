//! Executes one method on one Hamiltonian and writes its artifacts.

use std::path::Path;

use anyhow::Context as _;
use hivqe_core::ansatz::{build_epa, MAX_ANSATZ_ORBITALS};
use hivqe_core::dense::{dense_fci_oracle, DENSE_LIMIT};
use hivqe_core::determinant::{full_cas, Determinant};
use hivqe_core::hci::hci_run;
use hivqe_core::hivqe::{run as hivqe_run, HIVQETrace};
use hivqe_core::{IntegralSet, SubspaceResult};

use crate::config::{Method, RunConfig};
use crate::fcidump::fingerprint;
use crate::report::{
    to_csv, DiagnosticsRow, HciTraceRow, HivqeTraceRow, RunSummary, DIAGNOSTICS_HEADER,
    HCI_TRACE_HEADER, HIVQE_TRACE_HEADER, SCHEMA_VERSION,
};

pub const TRACE_FILE: &str = "trace.csv";
pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";
pub const SUMMARY_FILE: &str = "summary.json";

/// Everything a run leaves on disk, rendered in memory first.
#[derive(Clone, Debug, PartialEq)]
pub struct RunArtifacts {
    pub trace_csv: String,
    pub diagnostics_csv: Option<String>,
    pub summary: RunSummary,
    pub result: SubspaceResult,
    /// Per-iteration history for hivqe runs.
    pub hivqe_trace: Option<HIVQETrace>,
}

impl RunArtifacts {
    pub fn converged(&self) -> bool {
        self.summary.converged
    }

    pub fn summary_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.summary).expect("summary serializes");
        s.push('\n');
        s
    }

    pub fn write_to(&self, dir: &Path) -> anyhow::Result<()> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let put = |name: &str, text: &str| {
            let path = dir.join(name);
            std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
        };
        put(TRACE_FILE, &self.trace_csv)?;
        if let Some(d) = &self.diagnostics_csv {
            put(DIAGNOSTICS_FILE, d)?;
        }
        put(SUMMARY_FILE, &self.summary_json())
    }
}

/// A failed run, with whatever trace was produced before the failure.
#[derive(Debug)]
pub struct RunFailure {
    pub error: anyhow::Error,
    pub partial_trace_csv: Option<String>,
}

impl std::fmt::Display for RunFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

impl From<anyhow::Error> for RunFailure {
    fn from(error: anyhow::Error) -> Self {
        Self {
            error,
            partial_trace_csv: None,
        }
    }
}

fn hivqe_tables(trace: &HIVQETrace) -> (String, String) {
    let rows: Vec<HivqeTraceRow> = trace.steps.iter().map(Into::into).collect();
    let diag: Vec<DiagnosticsRow> = trace.steps.iter().map(Into::into).collect();
    (
        to_csv(&rows, HIVQE_TRACE_HEADER),
        to_csv(&diag, DIAGNOSTICS_HEADER),
    )
}

pub fn execute(s: &IntegralSet, cfg: &RunConfig, input: &str) -> Result<RunArtifacts, RunFailure> {
    let (na, nb, n) = (s.n_alpha(), s.n_beta(), s.n_orb());
    let summary = |result: &SubspaceResult, iterations: usize, converged: bool| RunSummary {
        schema_version: SCHEMA_VERSION,
        method: cfg.method.name().to_string(),
        input: input.to_string(),
        fingerprint: fingerprint(s),
        n_orb: n,
        n_elec: s.n_elec(),
        ms2: s.ms2(),
        energy_ha: result.energy,
        n_dets: result.n_dets(),
        iterations,
        converged,
        config: cfg.clone(),
    };
    match cfg.method {
        Method::Fci => {
            let dim = cas_dimension(n, na, nb);
            if dim > DENSE_LIMIT as u128 {
                return Err(anyhow::anyhow!(
                    "CAS has {dim} determinants, above the dense limit of {DENSE_LIMIT}"
                )
                .into());
            }
            let result =
                dense_fci_oracle(&full_cas(n, na, nb), s).context("dense diagonalization")?;
            let row = HciTraceRow {
                iteration: 1,
                energy_ha: result.energy,
                n_dets: result.n_dets(),
            };
            Ok(RunArtifacts {
                trace_csv: to_csv(&[row], HCI_TRACE_HEADER),
                diagnostics_csv: None,
                summary: summary(&result, 1, true),
                result,
                hivqe_trace: None,
            })
        }
        Method::Hci => {
            let hf = Determinant::hf(na, nb, n).context("reference determinant")?;
            let out = hci_run(s, &cfg.hci_config(), hf).context("heat-bath CI")?;
            let rows: Vec<HciTraceRow> = out.trace.iter().map(Into::into).collect();
            Ok(RunArtifacts {
                trace_csv: to_csv(&rows, HCI_TRACE_HEADER),
                diagnostics_csv: None,
                summary: summary(&out.result, out.trace.len(), out.converged),
                result: out.result,
                hivqe_trace: None,
            })
        }
        Method::Hivqe => {
            if n > MAX_ANSATZ_ORBITALS {
                return Err(anyhow::anyhow!(
                    "{n} orbitals exceed the simulator limit of {MAX_ANSATZ_ORBITALS}"
                )
                .into());
            }
            let circuit = build_epa(n, na, nb, cfg.hivqe.reps).context("building the ansatz")?;
            match hivqe_run(s, &cfg.hivqe_config(), &circuit) {
                Ok(out) => {
                    let (trace_csv, diag) = hivqe_tables(&out.trace);
                    Ok(RunArtifacts {
                        trace_csv,
                        diagnostics_csv: Some(diag),
                        summary: summary(&out.result, out.trace.steps.len(), out.converged),
                        result: out.result,
                        hivqe_trace: Some(out.trace),
                    })
                }
                Err(e) => Err(RunFailure {
                    error: anyhow::Error::new(e.error).context(format!(
                        "hybrid loop, iteration {}",
                        e.trace.steps.len() + 1
                    )),
                    partial_trace_csv: Some(hivqe_tables(&e.trace).0),
                }),
            }
        }
    }
}

/// Runs and writes artifacts into `out`. A failed hivqe run still leaves its
/// partial trace behind.
pub fn execute_into(
    s: &IntegralSet,
    cfg: &RunConfig,
    input: &str,
    out: &Path,
) -> Result<RunArtifacts, RunFailure> {
    match execute(s, cfg, input) {
        Ok(a) => {
            a.write_to(out)?;
            Ok(a)
        }
        Err(f) => {
            if let Some(t) = &f.partial_trace_csv {
                std::fs::create_dir_all(out).ok();
                std::fs::write(out.join(TRACE_FILE), t).ok();
            }
            Err(f)
        }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

pub fn cas_dimension(n_orb: usize, n_alpha: usize, n_beta: usize) -> u128 {
    binomial(n_orb, n_alpha) * binomial(n_orb, n_beta)
}
