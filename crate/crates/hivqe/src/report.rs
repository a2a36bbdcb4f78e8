//! Artifact records and their text renderings.
//!
//! Energies are carried in Hartree at full precision; rounding happens only
//! in the human-readable renderings.

use std::fmt::Write as _;

use anyhow::{bail, Context as _};
use hivqe_core::hci::HciStep;
use hivqe_core::hivqe::HivqeStep;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;

/// CODATA 2018 Hartree energy in electronvolts.
pub const HARTREE_TO_EV: f64 = 27.211386245988;

pub const HCI_TRACE_SCHEMA: &str = include_str!("../schemas/hci_trace.v1.json");
pub const HIVQE_TRACE_SCHEMA: &str = include_str!("../schemas/hivqe_trace.v1.json");
pub const DIAGNOSTICS_SCHEMA: &str = include_str!("../schemas/hivqe_diagnostics.v1.json");
pub const PES_SCHEMA: &str = include_str!("../schemas/pes.v1.json");
pub const COMPARISON_SCHEMA: &str = include_str!("../schemas/comparison.v1.json");
pub const SUMMARY_SCHEMA: &str = include_str!("../schemas/summary.v1.json");
pub const DISSOCIATION_SCHEMA: &str = include_str!("../schemas/dissociation.v1.json");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HciTraceRow {
    pub iteration: usize,
    pub energy_ha: f64,
    pub n_dets: usize,
}

impl From<&HciStep> for HciTraceRow {
    fn from(s: &HciStep) -> Self {
        Self {
            iteration: s.iteration,
            energy_ha: s.energy,
            n_dets: s.n_dets,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HivqeTraceRow {
    pub iter: usize,
    pub e_sampled_ha: f64,
    pub e_total_ha: f64,
    pub n_sampled: usize,
    pub n_total: usize,
    pub n_valid: u64,
    pub n_repaired: u64,
    pub theta_norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRow {
    pub iter: usize,
    pub n_shots: u64,
    pub n_valid: u64,
    pub n_repaired: u64,
    pub n_fallback: u64,
    pub n_discarded: u64,
}

impl From<&HivqeStep> for HivqeTraceRow {
    fn from(s: &HivqeStep) -> Self {
        Self {
            iter: s.iter,
            e_sampled_ha: s.e_sampled,
            e_total_ha: s.e_total,
            n_sampled: s.n_sampled,
            n_total: s.n_total,
            n_valid: s.n_valid,
            n_repaired: s.n_repaired,
            theta_norm: s.theta_norm,
        }
    }
}

impl From<&HivqeStep> for DiagnosticsRow {
    fn from(s: &HivqeStep) -> Self {
        Self {
            iter: s.iter,
            n_shots: s.n_shots,
            n_valid: s.n_valid,
            n_repaired: s.n_repaired,
            n_fallback: s.n_fallback,
            n_discarded: s.n_discarded,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PesRow {
    pub label: String,
    pub method: String,
    pub energy_ha: Option<f64>,
    pub n_dets: Option<usize>,
    /// `converged`, `not_converged`, or `failed: <reason>`.
    pub status: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub run: String,
    pub method: String,
    pub final_energy_ha: f64,
    pub delta_e_mha: f64,
    pub n_dets: usize,
    pub dets_ratio: f64,
}

/// `summary.json` written next to every trace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub schema_version: u32,
    pub method: String,
    pub input: String,
    pub fingerprint: String,
    pub n_orb: usize,
    pub n_elec: usize,
    pub ms2: i32,
    pub energy_ha: f64,
    pub n_dets: usize,
    pub iterations: usize,
    pub converged: bool,
    pub config: RunConfig,
}

pub fn to_csv<T: Serialize>(rows: &[T], header: &[&str]) -> String {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    for r in rows {
        w.serialize(r).expect("record serializes");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is utf-8")
}

pub fn from_csv<T: for<'de> Deserialize<'de>>(text: &str) -> anyhow::Result<Vec<T>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize().map(|row| Ok(row?)).collect()
}

pub const HCI_TRACE_HEADER: &[&str] = &["iteration", "energy_ha", "n_dets"];
pub const HIVQE_TRACE_HEADER: &[&str] = &[
    "iter",
    "e_sampled_ha",
    "e_total_ha",
    "n_sampled",
    "n_total",
    "n_valid",
    "n_repaired",
    "theta_norm",
];
pub const DIAGNOSTICS_HEADER: &[&str] = &[
    "iter",
    "n_shots",
    "n_valid",
    "n_repaired",
    "n_fallback",
    "n_discarded",
];
pub const PES_HEADER: &[&str] = &["label", "method", "energy_ha", "n_dets", "status"];
pub const COMPARISON_HEADER: &[&str] = &[
    "run",
    "method",
    "final_energy_ha",
    "delta_e_mha",
    "n_dets",
    "dets_ratio",
];

/// `1234567` → `1,234,567`.
pub fn thousands(n: usize) -> String {
    let digits = n.to_string();
    let mut out = String::with_capacity(digits.len() + digits.len() / 3);
    for (i, ch) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(ch);
    }
    out
}

/// One comparison row per run. ΔE and the determinant ratio are taken
/// relative to the lowest-energy run.
pub fn compare_rows(runs: &[(String, String, f64, usize)]) -> anyhow::Result<Vec<ComparisonRow>> {
    let Some(best) = runs.iter().min_by(|a, b| a.2.total_cmp(&b.2)) else {
        bail!("nothing to compare");
    };
    Ok(runs
        .iter()
        .map(|(run, method, e, n)| ComparisonRow {
            run: run.clone(),
            method: method.clone(),
            final_energy_ha: *e,
            delta_e_mha: (e - best.2) * 1e3,
            n_dets: *n,
            dets_ratio: *n as f64 / best.3 as f64,
        })
        .collect())
}

pub fn render_comparison(rows: &[ComparisonRow]) -> String {
    let head = [
        "run",
        "method",
        "E (Ha)",
        "dE (mHa)",
        "No. of Dets",
        "ratio",
    ];
    let body: Vec<[String; 6]> = rows
        .iter()
        .map(|r| {
            [
                r.run.clone(),
                r.method.clone(),
                format!("{:.6}", r.final_energy_ha),
                format!("{:.4}", r.delta_e_mha),
                thousands(r.n_dets),
                format!("{:.4}", r.dets_ratio),
            ]
        })
        .collect();
    let mut width = head.map(str::len);
    for row in &body {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: [&str; 6]| {
        for (i, (cell, w)) in cells.iter().zip(width).enumerate() {
            let sep = if i == 0 { "" } else { "  " };
            if i < 2 {
                let _ = write!(out, "{sep}{cell:<w$}");
            } else {
                let _ = write!(out, "{sep}{cell:>w$}");
            }
        }
        out.push('\n');
    };
    line(head);
    for row in &body {
        line([&row[0], &row[1], &row[2], &row[3], &row[4], &row[5]]);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DissociationReport {
    pub schema_version: u32,
    pub eq_label: String,
    pub ext_label: String,
    pub e_eq_ha: f64,
    pub e_ext_ha: f64,
    pub e_diss_ha: f64,
}

impl DissociationReport {
    pub fn new(eq_label: &str, e_eq: f64, ext_label: &str, e_ext: f64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            eq_label: eq_label.to_string(),
            ext_label: ext_label.to_string(),
            e_eq_ha: e_eq,
            e_ext_ha: e_ext,
            e_diss_ha: e_ext - e_eq,
        }
    }

    pub fn e_diss_ev(&self) -> f64 {
        self.e_diss_ha * HARTREE_TO_EV
    }

    pub fn render(&self) -> String {
        format!(
            "E({}) = {:.6} Ha\nE({}) = {:.6} Ha\nE_diss = {:.6} Ha = {:.2} eV\n",
            self.eq_label,
            self.e_eq_ha,
            self.ext_label,
            self.e_ext_ha,
            self.e_diss_ha,
            self.e_diss_ev()
        )
    }
}

/// Reads a PES CSV and computes E(ext) − E(eq). Labels match numerically,
/// so `1.1` finds a row labelled `1.10`.
pub fn dissociation_from_pes(
    pes_csv: &str,
    eq: &str,
    ext: &str,
) -> anyhow::Result<DissociationReport> {
    let rows: Vec<PesRow> = from_csv(pes_csv).context("reading PES table")?;
    let find = |label: &str| -> anyhow::Result<&PesRow> {
        let want = parse_label(label)?;
        let row = rows
            .iter()
            .find(|r| parse_label(&r.label).map(|v| v == want).unwrap_or(false))
            .with_context(|| format!("label {label} not in the PES table"))?;
        if row.energy_ha.is_none() {
            bail!("point {label} has no energy ({})", row.status);
        }
        Ok(row)
    };
    let (a, b) = (find(eq)?, find(ext)?);
    Ok(DissociationReport::new(
        &a.label,
        a.energy_ha.unwrap_or_default(),
        &b.label,
        b.energy_ha.unwrap_or_default(),
    ))
}

pub fn parse_label(label: &str) -> anyhow::Result<f64> {
    label
        .trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .with_context(|| format!("label `{label}` is not a decimal number"))
}

#[derive(Debug, Deserialize)]
struct CsvSchema {
    version: u32,
    columns: Vec<CsvColumn>,
}

#[derive(Debug, Deserialize)]
struct CsvColumn {
    name: String,
    #[serde(rename = "type")]
    kind: String,
    #[serde(default)]
    nullable: bool,
}

/// Checks a CSV document against one of the shipped column schemas: exact
/// header, and every cell of the declared type.
pub fn validate_csv(schema: &str, text: &str) -> anyhow::Result<()> {
    let schema: CsvSchema = serde_json::from_str(schema).context("schema document")?;
    if schema.version != SCHEMA_VERSION {
        bail!("unsupported schema version {}", schema.version);
    }
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    let want: Vec<&str> = schema.columns.iter().map(|c| c.name.as_str()).collect();
    if header != want {
        bail!("header {header:?} does not match {want:?}");
    }
    for (row, rec) in r.records().enumerate() {
        let rec = rec?;
        for (cell, col) in rec.iter().zip(&schema.columns) {
            if cell.is_empty() && col.nullable {
                continue;
            }
            let ok = match col.kind.as_str() {
                "integer" => cell.parse::<u64>().is_ok(),
                "number" => cell.parse::<f64>().map(f64::is_finite).unwrap_or(false),
                "string" => !cell.is_empty(),
                other => bail!("unknown column type {other}"),
            };
            if !ok {
                bail!(
                    "row {}: column {} = `{cell}` is not a {}",
                    row + 1,
                    col.name,
                    col.kind
                );
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thousands_separators() {
        assert_eq!(thousands(0), "0");
        assert_eq!(thousands(999), "999");
        assert_eq!(thousands(1000), "1,000");
        assert_eq!(thousands(56_665_658), "56,665,658");
    }

    #[test]
    fn identical_runs_compare_equal() {
        let rows = compare_rows(&[
            ("a".into(), "hci".into(), -1.5, 10),
            ("b".into(), "hci".into(), -1.5, 10),
        ])
        .unwrap();
        for r in rows {
            assert_eq!(r.delta_e_mha, 0.0);
            assert_eq!(r.dets_ratio, 1.0);
        }
    }

    #[test]
    fn dissociation_sign_and_zero() {
        let r = DissociationReport::new("1", -1.0, "2", -1.0);
        assert_eq!(r.e_diss_ev(), 0.0);
        let r = DissociationReport::new("1", -1.2, "2", -1.0);
        assert!(r.e_diss_ha > 0.0);
    }
}
