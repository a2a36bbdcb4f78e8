use hivqe::report::{
    compare_rows, dissociation_from_pes, render_comparison, to_csv, validate_csv, PesRow,
    COMPARISON_HEADER, COMPARISON_SCHEMA, HARTREE_TO_EV, PES_HEADER,
};

/// Published [2Fe-2S] energies and determinant counts, used only to check
/// the table rendering.
#[test]
fn large_count_table_rendering() {
    let runs = [
        (
            "casci".to_string(),
            "fci".to_string(),
            -116.605609,
            240_374_016,
        ),
        (
            "hci_5e-6".to_string(),
            "hci".to_string(),
            -116.604878,
            56_665_658,
        ),
        (
            "case_1.3".to_string(),
            "hivqe".to_string(),
            -116.604779,
            63_857_547,
        ),
    ];
    let rows = compare_rows(&runs).unwrap();
    let table = render_comparison(&rows);
    let hci_line = table.lines().find(|l| l.starts_with("hci_5e-6")).unwrap();
    assert!(hci_line.contains("56,665,658"), "{table}");
    assert!(hci_line.contains("0.7310"), "{table}");
    assert!(hci_line.contains("-116.604878"), "{table}");
    let vqe_line = table.lines().find(|l| l.starts_with("case_1.3")).unwrap();
    assert!(vqe_line.contains("0.8300"), "{table}");
    assert!(vqe_line.contains("63,857,547"), "{table}");
    // columns line up
    let widths: Vec<usize> = table.lines().map(|l| l.chars().count()).collect();
    assert!(widths.windows(2).all(|w| w[0] == w[1]), "{table}");
    validate_csv(COMPARISON_SCHEMA, &to_csv(&rows, COMPARISON_HEADER)).unwrap();
}

fn pes(points: &[(&str, f64)]) -> String {
    let rows: Vec<PesRow> = points
        .iter()
        .map(|(l, e)| PesRow {
            label: l.to_string(),
            method: "hci".into(),
            energy_ha: Some(*e),
            n_dets: Some(1),
            status: "converged".into(),
        })
        .collect();
    to_csv(&rows, PES_HEADER)
}

#[test]
fn nitrogen_dissociation_arithmetic() {
    let r = dissociation_from_pes(
        &pes(&[("1.10", -109.281122), ("3.00", -108.961496)]),
        "1.10",
        "3.00",
    )
    .unwrap();
    assert!((r.e_diss_ha - 0.319626).abs() < 1e-9);
    assert!((r.e_diss_ev() - 0.319626 * 27.211386245988).abs() < 1e-9);
    assert!((r.e_diss_ev() - 8.70).abs() < 0.01);
    assert!(r.render().contains("8.70 eV"), "{}", r.render());
}

#[test]
fn dissociation_edge_cases() {
    let text = pes(&[("1.0", -1.0), ("2.0", -1.0)]);
    assert_eq!(
        dissociation_from_pes(&text, "1.0", "2.0")
            .unwrap()
            .e_diss_ev(),
        0.0
    );
    assert!(dissociation_from_pes(&text, "1.0", "4.0").is_err());
    let r = dissociation_from_pes(&pes(&[("1.0", -1.5), ("2.0", -1.0)]), "1.0", "2.0").unwrap();
    assert!(r.e_diss_ha > 0.0);
    assert_eq!(r.e_diss_ev(), 0.5 * HARTREE_TO_EV);
}
