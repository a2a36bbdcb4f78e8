//! Multi-run commands: surface scans, cross-run comparison, dissociation.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context as _};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::fcidump::read_fcidump;
use crate::report::{
    compare_rows, parse_label, render_comparison, to_csv, ComparisonRow, PesRow, RunSummary,
    COMPARISON_HEADER, PES_HEADER,
};
use crate::runner::{execute_into, SUMMARY_FILE};

pub const PES_FILE: &str = "pes.csv";
pub const COMPARISON_FILE: &str = "comparison.csv";

#[derive(Clone, Debug, PartialEq)]
pub struct PesPoint {
    pub label: String,
    pub path: PathBuf,
}

impl std::str::FromStr for PesPoint {
    type Err = anyhow::Error;

    /// `LABEL=PATH`.
    fn from_str(s: &str) -> anyhow::Result<Self> {
        let (label, path) = s
            .split_once('=')
            .with_context(|| format!("expected LABEL=PATH, got `{s}`"))?;
        parse_label(label)?;
        Ok(Self {
            label: label.trim().to_string(),
            path: PathBuf::from(path),
        })
    }
}

pub struct PesOutcome {
    pub rows: Vec<PesRow>,
    pub csv: String,
}

impl PesOutcome {
    pub fn n_failed(&self) -> usize {
        self.rows.iter().filter(|r| r.energy_ha.is_none()).count()
    }

    pub fn all_converged(&self) -> bool {
        self.rows.iter().all(|r| r.status == "converged")
    }
}

/// Runs every point (concurrently) into `out/<label>/` and writes
/// `out/pes.csv`. Individual failures are recorded and the scan continues.
pub fn pes(points: &[PesPoint], cfg: &RunConfig, out: &Path) -> anyhow::Result<PesOutcome> {
    if points.len() < 2 {
        bail!("a scan needs at least two points");
    }
    let mut keyed: Vec<(f64, &PesPoint)> = points
        .iter()
        .map(|p| Ok((parse_label(&p.label)?, p)))
        .collect::<anyhow::Result<_>>()?;
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
    if let Some(w) = keyed.windows(2).find(|w| w[0].0 == w[1].0) {
        bail!("duplicate label {} / {}", w[0].1.label, w[1].1.label);
    }

    let rows: Vec<PesRow> = keyed
        .par_iter()
        .map(|(_, p)| {
            let dir = out.join(&p.label);
            let failed = |msg: String| PesRow {
                label: p.label.clone(),
                method: cfg.method.name().to_string(),
                energy_ha: None,
                n_dets: None,
                status: format!("failed: {msg}"),
            };
            let s = match read_fcidump(&p.path) {
                Ok(s) => s,
                Err(e) => return failed(e.to_string()),
            };
            match execute_into(&s, cfg, &p.path.display().to_string(), &dir) {
                Ok(a) => PesRow {
                    label: p.label.clone(),
                    method: cfg.method.name().to_string(),
                    energy_ha: Some(a.summary.energy_ha),
                    n_dets: Some(a.summary.n_dets),
                    status: if a.converged() {
                        "converged"
                    } else {
                        "not_converged"
                    }
                    .to_string(),
                },
                Err(f) => failed(f.to_string()),
            }
        })
        .collect();

    let csv = to_csv(&rows, PES_HEADER);
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    std::fs::write(out.join(PES_FILE), &csv).context("writing the PES table")?;
    let outcome = PesOutcome { rows, csv };
    if outcome.n_failed() == points.len() {
        bail!("every point failed; see {}", out.join(PES_FILE).display());
    }
    Ok(outcome)
}

pub fn read_summary(dir: &Path) -> anyhow::Result<RunSummary> {
    let path = dir.join(SUMMARY_FILE);
    let text =
        std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
    pub csv: String,
    pub table: String,
}

/// Compares finished runs, each given by its output directory. All runs
/// must share one Hamiltonian fingerprint.
pub fn compare(runs: &[PathBuf]) -> anyhow::Result<Comparison> {
    if runs.len() < 2 {
        bail!("compare needs at least two runs");
    }
    let summaries: Vec<(String, RunSummary)> = runs
        .iter()
        .map(|d| {
            let name = d.file_name().map_or_else(
                || d.display().to_string(),
                |n| n.to_string_lossy().into_owned(),
            );
            Ok((name, read_summary(d)?))
        })
        .collect::<anyhow::Result<_>>()?;
    let first = &summaries[0].1.fingerprint;
    if let Some((name, s)) = summaries.iter().find(|(_, s)| &s.fingerprint != first) {
        bail!(
            "run {name} has integral fingerprint {} but {} has {first}",
            s.fingerprint,
            summaries[0].0
        );
    }
    let input: Vec<_> = summaries
        .iter()
        .map(|(name, s)| (name.clone(), s.method.clone(), s.energy_ha, s.n_dets))
        .collect();
    let rows = compare_rows(&input)?;
    Ok(Comparison {
        csv: to_csv(&rows, COMPARISON_HEADER),
        table: render_comparison(&rows),
        rows,
    })
}
