//! End-to-end sweeps through the harness.

use afc_core::harness::{emit_csv, read_csv, run_ber_sweep, ExperimentConfig, Variant};

fn config_text(seed: u64) -> String {
    format!(
        r#"
        k_msg = 190
        seed = {seed}
        trials = 6
        max_trials = 12
        snr_db = [15.0]
        n_symbols = [400, 200, 120]
        "#
    )
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig::from_toml_str(&config_text(9)).unwrap();
    let mut files = Vec::new();
    for run in 0..2 {
        let results = run_ber_sweep(&cfg).unwrap();
        let path = dir.path().join(format!("run{run}.csv"));
        emit_csv(&results[1], &path).unwrap();
        files.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(files[0], files[1]);
    let rows = read_csv(&files[0][..]).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.seed == 9));
}

#[test]
fn precode_never_worse_with_paired_seeds() {
    let mut cfg = ExperimentConfig::from_toml_str(&config_text(5)).unwrap();
    cfg.variants = vec![Variant::MinDegree, Variant::MinDegreePrecode];
    let r = run_ber_sweep(&cfg).unwrap();
    for (plain, coded) in r[0].points.iter().zip(&r[1].points) {
        assert_eq!(plain.n_symbols, coded.n_symbols);
        assert!(coded.rate_bits_per_cu < plain.rate_bits_per_cu);
        assert!(
            coded.ber <= plain.ber,
            "N = {}: {} > {}",
            plain.n_symbols,
            coded.ber,
            plain.ber
        );
    }
}
