use shiftmoment::divisor::{correlation_report, sieve_divisors, CorrelationRecord};
use shiftmoment::empirical::{compare, MomentReport, QuadratureSpec};
use shiftmoment::report::{read_json, write_report};
use shiftmoment::smoothing::{ShiftConfig, Window, WindowKind};
use shiftmoment::spectral::{ed_sum, hecke_from_satake, MaassEntry, SpectralDataset, FIRST_KAPPA};
use std::f64::consts::PI;

#[test]
fn compare_then_persist() {
    let dir = tempfile::tempdir().unwrap();
    let shift = ShiftConfig::new(0.0, 5.0).unwrap();
    let r = compare(500.0, 800.0, &shift, None, &QuadratureSpec::for_range(800.0)).unwrap();
    // short range, so only a loose agreement with the main term
    assert!(r.rel_diff < 0.3, "{r:?}");
    assert_eq!(r.abs_diff, (r.empirical - r.main_term).abs());
    let (json, csv) = write_report(&r, &dir.path().join("cmp")).unwrap();
    let back: MomentReport = read_json(&json).unwrap();
    assert_eq!(back, r);
    assert_eq!(std::fs::read_to_string(csv).unwrap().lines().count(), 2);
}

#[test]
fn divisor_records_persist() {
    let dir = tempfile::tempdir().unwrap();
    let table = sieve_divisors(50_100).unwrap();
    let recs = correlation_report(50_000, &[1, 2, 3, 100], &table).unwrap();
    assert!(recs.iter().all(|c| c.normalized_error.abs() < 5.0));
    let (json, _) = write_report(&recs, &dir.path().join("div")).unwrap();
    let back: Vec<CorrelationRecord> = read_json(&json).unwrap();
    assert_eq!(back, recs);
}

#[test]
fn dataset_file_to_discrete_sum() {
    let dir = tempfile::tempdir().unwrap();
    let entry = |kappa: f64, seed: f64, h: f64| MaassEntry {
        kappa,
        alpha: 0.2,
        parity: 1,
        h_half: h,
        hecke: hecke_from_satake(400, |p| (p as f64 * seed).fract() * PI),
    };
    let data = SpectralDataset {
        source: "synthetic".into(),
        n_coef: 400,
        entries: vec![entry(FIRST_KAPPA, 0.618, 1.2), entry(12.17, 0.414, 0.8), entry(13.78, 0.303, 1.5)],
    };
    let path = dir.path().join("maass.json");
    std::fs::write(&path, serde_json::to_string(&data).unwrap()).unwrap();
    let loaded = SpectralDataset::load(&path).unwrap();
    assert_eq!(loaded, data);

    let w = Window::new(WindowKind::Bump, 1000.0, 2000.0, 300.0).unwrap();
    let full = ed_sum(&loaded, 20.0, &w).unwrap();
    assert_eq!(full.terms, 3);
    // the sum is additive over forms
    let mut parts = 0.0;
    for e in &loaded.entries {
        let one = SpectralDataset { entries: vec![e.clone()], ..loaded.clone() };
        parts += ed_sum(&one, 20.0, &w).unwrap().value;
    }
    assert!((full.value - parts).abs() <= 1e-12 * full.value.abs().max(1e-300));
    assert!(full.value != 0.0);
}
