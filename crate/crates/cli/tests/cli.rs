//! End-to-end checks of the command-line surface: flag handling, config
//! files, exit codes and lossless CSV output.

use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_fidelity-forge")
}

fn run_ok(args: &[&str]) -> String {
    let out = Command::new(bin()).args(args).output().expect("runs");
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8")
}

/// Parse CSV text (after # comments) into rows of f64-or-string fields and
/// rebuild it; the rebuilt text must match byte for byte, which both checks
/// parseability and that float formatting round-trips.
fn csv_round_trips(text: &str) {
    let mut rebuilt = String::new();
    for line in text.lines() {
        if line.starts_with('#') {
            rebuilt.push_str(line);
            rebuilt.push('\n');
            continue;
        }
        let fields: Vec<String> = line
            .split(',')
            .map(|f| match f.parse::<f64>() {
                Ok(v) if f.chars().next().map_or(false, |c| c.is_ascii_digit() || c == '-') => {
                    format!("{v}")
                }
                _ => f.to_string(),
            })
            .collect();
        rebuilt.push_str(&fields.join(","));
        rebuilt.push('\n');
    }
    assert_eq!(text, rebuilt, "CSV did not round-trip losslessly");
}

#[test]
fn exact_identical_pair_reports_unit_fidelity() {
    let text = run_ok(&[
        "exact",
        "--target",
        "table1",
        "--compare",
        "perturb:table1:eps=0",
    ]);
    let f_line = text
        .lines()
        .find(|l| l.starts_with("F,"))
        .expect("F row present");
    let f: f64 = f_line[2..].parse().unwrap();
    assert!((f - 1.0).abs() < 1e-8, "F = {f}");
    csv_round_trips(&text);
}

#[test]
fn exact_same_seed_sources_give_unit_fidelity() {
    let text = run_ok(&[
        "exact", "--qubits", "3", "--target", "seed:7", "--compare", "seed:7",
    ]);
    let f: f64 = text
        .lines()
        .find(|l| l.starts_with("F,"))
        .map(|l| l[2..].parse().unwrap())
        .unwrap();
    assert!((f - 1.0).abs() < 1e-9);
}

#[test]
fn exact_fig4_pair_regression_values() {
    // Frozen at first build from the operator-basis evaluation of the
    // bundled tables; guards the fixtures and the fidelity pipeline at once.
    let text = run_ok(&[
        "exact",
        "--target",
        "table4",
        "--compare",
        "perturb:table5:eps=0.1",
    ]);
    let get = |key: &str| -> f64 {
        text.lines()
            .find(|l| l.starts_with(&format!("{key},")))
            .map(|l| l[key.len() + 1..].parse().unwrap())
            .unwrap()
    };
    assert!((get("F") - 0.5698266762396443).abs() < 1e-9);
    assert!((get("F0") - 0.6159485333448367).abs() < 1e-9);
    assert!((get("k3") - get("F")).abs() < 1e-8);
}

#[test]
fn sweep_rows_behave() {
    let text = run_ok(&["sweep", "--qubits", "3", "--samples", "40", "--seed", "5"]);
    csv_round_trips(&text);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("epsilon"))
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 40);
    // eps = 0 row: F, F0 and the top-order column are 1; the intermediate
    // truncations equal their closed-form partial sums
    // sum_{m<=k} c_m C(n,m)  (15/16 at k=1, 3/4 at k=2 for n=3).
    assert!(rows[0][0] == 0.0);
    assert!((rows[0][1] - 1.0).abs() < 1e-8);
    assert!((rows[0][2] - 1.0).abs() < 1e-8);
    let partial = |k: usize| -> f64 {
        let binom = [1.0, 3.0, 3.0, 1.0];
        (0..=k)
            .map(|m| {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                sign * 5f64.powi(3 - m as i32) / 64.0 * binom[m]
            })
            .sum()
    };
    for k in 1..=3usize {
        assert!(
            (rows[0][2 + k] - partial(k)).abs() < 1e-8,
            "k={k}: {} vs {}",
            rows[0][2 + k],
            partial(k)
        );
    }
    // k = n column equals the F column on every row.
    for r in &rows {
        assert!((r[2 + 3] - r[1]).abs() < 1e-8, "F3 vs F mismatch: {r:?}");
    }
    // High-fidelity rows: F0 overestimates F and stays close.
    for r in rows.iter().filter(|r| r[1] > 0.9) {
        assert!(r[2] >= r[1] - 1e-9 && r[2] - r[1] < 0.05, "row {r:?}");
    }
}

#[test]
fn benchmark_csv_and_band() {
    let text = run_ok(&["benchmark", "--reps", "25", "--seed", "3"]);
    csv_round_trips(&text);
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("budget"))
        .collect();
    assert_eq!(rows.len(), 20); // 10 schedule rows x 2 kinds
    assert!(text.contains("budget,kind,mode,l,m,unique_settings,empirical_std,bound_lo_std,bound_hi_std,reps,seed"));
    // Published cap: process rows never exceed 896 unique settings.
    for r in rows.iter().filter(|r| r.contains(",process,")) {
        let unique: usize = r.split(',').nth(5).unwrap().parse().unwrap();
        assert!(unique <= 900);
    }
}

#[test]
fn optimize_paper_preset_has_full_trace_length() {
    let text = run_ok(&["optimize", "--preset", "paper", "--seed", "3", "--iters", "140"]);
    let rows = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("iteration"))
        .count();
    assert_eq!(rows, 140);
    assert!(text.contains("# estimator_l = 160"));
    assert!(text.contains("# estimator_m = 2048"));
    assert!(text.contains("# mode = projective"));
}

#[test]
fn optimize_noiseless_reaches_ideal() {
    let text = run_ok(&[
        "optimize", "--noise", "none", "--iters", "60", "--seed", "1",
    ]);
    let f1: f64 = text
        .lines()
        .find(|l| l.starts_with("# final_single_fidelity = "))
        .map(|l| l.rsplit(' ').next().unwrap().parse().unwrap())
        .unwrap();
    assert!(f1 >= 0.999, "final fidelity {f1}");
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = std::env::temp_dir().join("ff_cli_cfg_test");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("sweep.cfg");
    std::fs::write(&cfg, "qubits = 2\nsamples = 7\nseed = 9\n").unwrap();
    let text = run_ok(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--samples",
        "4",
    ]);
    assert!(text.contains("# qubits = 2"));
    assert!(text.contains("# samples = 4")); // flag wins
    assert!(text.contains("# seed = 9"));

    // Unknown keys are rejected with exit code 2.
    let bad = dir.join("bad.cfg");
    std::fs::write(&bad, "nonsense = 1\n").unwrap();
    let out = Command::new(bin())
        .args(["sweep", "--config", bad.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_errors_exit_two() {
    for args in [
        vec!["exact", "--target", "tableX", "--compare", "table1"],
        vec!["exact", "--target", "table1", "--compare", "table2"], // qubit mismatch
        vec!["exact", "--compare", "table1"],                       // missing target
        vec!["sweep", "--qubits", "9"],
        vec!["benchmark", "--reps", "3"],
        vec!["optimize", "--preset", "warehouse"],
        vec!["optimize", "--mode", "sideways"],
    ] {
        let out = Command::new(bin()).args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn out_flag_writes_identical_bytes() {
    let dir = std::env::temp_dir().join("ff_cli_out_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("exact.csv");
    let stdout = run_ok(&[
        "exact",
        "--target",
        "table2",
        "--compare",
        "perturb:table2:eps=0.5",
        "--out",
        path.to_str().unwrap(),
    ]);
    let file = std::fs::read_to_string(&path).unwrap();
    assert_eq!(stdout, file);
}

#[test]
fn float_formatting_round_trips() {
    // The CSV writers print f64 with the shortest-round-trip formatter, so
    // parsing a field back always recovers the exact value.
    let mut state = 0x243F6A8885A308D3u64;
    for _ in 0..10_000 {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        let v = f64::from_bits((state >> 12) | 0x3FF0000000000000) - 1.5;
        let v = v * (state as f64 / u64::MAX as f64) * 1e3;
        if !v.is_finite() {
            continue;
        }
        let text = format!("{v}");
        let back: f64 = text.parse().unwrap();
        assert_eq!(v.to_bits(), back.to_bits(), "{v} -> {text} -> {back}");
    }
}

#[test]
fn circuit_file_source() {
    let dir = std::env::temp_dir().join("ff_cli_circ_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cnot02.circ");
    std::fs::write(
        &path,
        "qubits 3\nu3 0 0 0 0\ncnot 0 1\ncnot 1 2\ncnot 0 1\ncnot 1 2\n",
    )
    .unwrap();
    let spec = format!("circuit:{}", path.to_str().unwrap());
    // The four-CNOT chain equals the direct CNOT(0,2), so comparing against
    // a circuit holding just that gate gives F = 1.
    let direct = dir.join("direct.circ");
    std::fs::write(&direct, "qubits 3\ncnot 0 2\n").unwrap();
    let text = run_ok(&[
        "exact",
        "--target",
        &spec,
        "--compare",
        &format!("circuit:{}", direct.to_str().unwrap()),
    ]);
    let f: f64 = text
        .lines()
        .find(|l| l.starts_with("F,"))
        .map(|l| l[2..].parse().unwrap())
        .unwrap();
    assert!((f - 1.0).abs() < 1e-9, "F = {f}");
}
