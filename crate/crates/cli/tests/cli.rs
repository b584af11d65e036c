//! Runs the `afc` binary end to end.

use std::process::Command;

fn afc(args: &[&str]) -> (bool, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_afc"))
        .args(args)
        .output()
        .unwrap();
    let text =
        String::from_utf8_lossy(&out.stdout).into_owned() + &String::from_utf8_lossy(&out.stderr);
    (out.status.success(), text)
}

#[test]
fn weights_check_reports_witness() {
    let (ok, text) = afc(&["weights", "check"]);
    assert!(ok, "{text}");
    assert!(text.contains("holds: true (6560 coefficient vectors)"));
    let (ok, text) = afc(&["weights", "check", "--set", "seamless"]);
    assert!(ok);
    assert!(text.contains("holds: false"));
    assert!(text.contains("witness:"));
}

#[test]
fn ber_sweep_writes_csv_per_variant() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.toml");
    std::fs::write(
        &cfg,
        "k_msg = 95\ntrials = 2\nmax_trials = 2\nn_symbols = [200, 100]\nseed = 3\n",
    )
    .unwrap();
    let out = dir.path().join("ber.csv");
    let plot = dir.path().join("ber.dat");
    let args = [
        "ber-sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--seed",
        "4",
        "--out",
        out.to_str().unwrap(),
        "--gnuplot",
        plot.to_str().unwrap(),
    ];
    let (ok, text) = afc(&args);
    assert!(ok, "{text}");
    for v in ["uniform", "min-degree", "min-degree-precode"] {
        let csv = std::fs::read_to_string(dir.path().join(format!("ber-{v}.csv"))).unwrap();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next(),
            Some("snr_db,n_symbols,rate_bits_per_cu,ber,fer,trials,seed")
        );
        assert_eq!(lines.count(), 2);
        assert!(csv.lines().skip(1).all(|l| l.ends_with(",2,4")), "{csv}");
    }
    assert_eq!(
        std::fs::read_to_string(&plot)
            .unwrap()
            .matches("# index")
            .count(),
        3
    );
    let first = std::fs::read(dir.path().join("ber-uniform.csv")).unwrap();
    assert!(afc(&args).0);
    assert_eq!(
        std::fs::read(dir.path().join("ber-uniform.csv")).unwrap(),
        first
    );
}

#[test]
fn noiseless_throughput() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tp.csv");
    let args = [
        "throughput-sweep",
        "--k-msg",
        "95",
        "--trials",
        "2",
        "--noiseless",
        "--snr-db",
        "10",
        "--out",
    ];
    let (ok, text) = afc(&[&args[..], &[out.to_str().unwrap()]].concat());
    assert!(ok, "{text}");
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 2);
}

#[test]
fn analysis_commands() {
    let (ok, text) = afc(&["analyze", "lemma1", "--weights", "1/2,1/3,1/5"]);
    assert!(ok, "{text}");
    assert!(text.contains("exact e_3 = 0"));
    assert!(text.contains("fraction = 1"));
    let (ok, text) = afc(&["analyze", "pairwise", "--flips", "2"]);
    assert!(ok, "{text}");
    let (ok, text) = afc(&["analyze", "shaping", "--samples", "100000"]);
    assert!(ok, "{text}");
    assert!(text.contains("satisfied: true"));
    let (ok, _) = afc(&[
        "weights",
        "search",
        "--f",
        "1",
        "--d",
        "1",
        "--budget",
        "2",
        "--samples",
        "10000",
    ]);
    assert!(!ok);
}

#[test]
fn bad_output_directory_is_an_error() {
    let (ok, _) = afc(&[
        "ber-sweep",
        "--k-msg",
        "95",
        "--trials",
        "1",
        "--out",
        "/no/such/dir/x.csv",
    ]);
    assert!(!ok);
}
