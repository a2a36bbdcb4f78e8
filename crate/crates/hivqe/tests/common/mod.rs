#![allow(dead_code)]

use std::path::PathBuf;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(name: &str) -> PathBuf {
    fixtures_dir().join(format!("{name}.fcidump"))
}

/// CASCI energies computed with PySCF when the fixtures were generated.
pub fn reference_energies() -> Vec<(String, f64)> {
    let text = std::fs::read_to_string(fixtures_dir().join("reference_energies.csv")).unwrap();
    text.lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let (name, e) = l.split_once(',').unwrap();
            (name.to_string(), e.trim().parse().unwrap())
        })
        .collect()
}

pub fn reference_energy(name: &str) -> f64 {
    reference_energies()
        .into_iter()
        .find(|(n, _)| n == name)
        .unwrap_or_else(|| panic!("no reference for {name}"))
        .1
}
