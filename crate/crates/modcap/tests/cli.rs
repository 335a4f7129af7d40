//! End-to-end tests of the `modcap` binary: CSV schema, exit codes,
//! determinism, and agreement with the in-process API.

use std::process::{Command, Output};

use modcap::closed_form;
use modcap::exact_mi::{mi_pam_quadrature, QuadratureSpec};
use modcap::{Constellation, Snr};

fn modcap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modcap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = modcap(args);
    assert!(
        out.status.success(),
        "expected success for {args:?}, stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn exit_code(args: &[&str]) -> i32 {
    modcap(args).status.code().expect("no signal")
}

/// Parse CSV rows (after the header) into field vectors.
fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn rate_emits_the_documented_header_and_near_zero_rate() {
    let out = stdout_of(&[
        "rate",
        "--modulation",
        "pam",
        "--m",
        "2",
        "--snr-db",
        "-100",
        "--method",
        "approx",
    ]);
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "snr_db,snr_linear,modulation,m,method,rate_bits_per_sym_per_dim"
    );
    let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(fields[2], "pam");
    assert_eq!(fields[3], "2");
    assert_eq!(fields[4], "approx");
    let rate: f64 = fields[5].parse().unwrap();
    assert!(rate.abs() < 1e-9, "{rate}");
}

#[test]
fn rate_saturates_for_16qam_at_high_snr() {
    let out = stdout_of(&[
        "rate",
        "--modulation",
        "qam",
        "--m",
        "16",
        "--snr-db",
        "40",
        "--method",
        "approx",
    ]);
    let rate: f64 = csv_rows(&out)[0][5].parse().unwrap();
    assert!((rate - 2.0).abs() < 0.005, "{rate}");
}

#[test]
fn rate_matches_the_library_bit_exactly() {
    let out = stdout_of(&[
        "rate",
        "--modulation",
        "pam",
        "--m",
        "8",
        "--snr-db",
        "10",
        "--method",
        "exact-gh",
    ]);
    let lib = mi_pam_quadrature(
        &Constellation::pam(8).unwrap(),
        Snr::from_db(10.0).unwrap(),
        &QuadratureSpec::default(),
    )
    .unwrap()
    .per_dimension();
    assert_eq!(csv_rows(&out)[0][5], format!("{lib:.15e}"));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = [
        "sweep",
        "--modulation",
        "pam",
        "--m",
        "2,4",
        "--methods",
        "exact-mc,approx",
        "--snr-db-from",
        "0",
        "--snr-db-to",
        "2",
        "--snr-db-step",
        "1",
        "--mc-samples",
        "10000",
        "--seed",
        "31",
    ];
    let a = stdout_of(&args);
    let b = stdout_of(&args);
    assert_eq!(a, b);
    assert!(a.starts_with(
        "snr_db,snr_linear,modulation,m,method,rate_bits_per_sym_per_dim,std_error\n"
    ));

    // a different seed changes the Monte-Carlo rows
    let mut changed = args;
    changed[changed.len() - 1] = "32";
    assert_ne!(a, stdout_of(&changed));
}

#[test]
fn sweep_reproduces_capacity_and_keeps_rows_sorted() {
    let out = stdout_of(&[
        "sweep",
        "--modulation",
        "pam",
        "--m",
        "8,2",
        "--methods",
        "exact-gh,capacity,approx",
        "--snr-db-from",
        "-10",
        "--snr-db-to",
        "40",
        "--snr-db-step",
        "2.5",
    ]);
    let rows = csv_rows(&out);
    let points_per_series = 21;
    assert_eq!(rows.len(), 2 * 3 * points_per_series);

    // sorted by (m, method-name, snr_db)
    let key = |r: &Vec<String>| {
        (
            r[3].parse::<usize>().unwrap(),
            r[4].clone(),
            r[0].parse::<f64>().unwrap(),
        )
    };
    for pair in rows.windows(2) {
        assert!(key(&pair[0]) <= key(&pair[1]), "rows out of order: {pair:?}");
    }

    for row in &rows {
        let snr_linear: f64 = row[1].parse().unwrap();
        let rate: f64 = row[5].parse().unwrap();
        if row[4] == "capacity" {
            let expected = 0.5 * (1.0 + snr_linear).log2();
            assert!((rate - expected).abs() < 1e-12);
        }
    }

    // within a fixed (m, method) series the rate is non-decreasing in SNR
    for series in rows.chunks(points_per_series) {
        let mut prev = -1.0f64;
        for row in series {
            let rate: f64 = row[5].parse().unwrap();
            assert!(rate >= prev - 1e-9, "series {} not monotone", row[4]);
            prev = rate;
        }
    }
}

#[test]
fn sweep_keeps_exact_and_sphere_curves_within_the_documented_gap() {
    let out = stdout_of(&[
        "sweep",
        "--modulation",
        "pam",
        "--m",
        "2,8,64",
        "--methods",
        "exact-gh,approx",
        "--snr-db-from",
        "-10",
        "--snr-db-to",
        "40",
        "--snr-db-step",
        "0.25",
    ]);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 3 * 2 * 201);
    // rows are sorted by (m, method, snr): per m, the approx block comes
    // right before the exact-gh block
    let mut max_gap = 0.0f64;
    for m_block in rows.chunks(2 * 201) {
        let (approx, exact) = m_block.split_at(201);
        for (a, e) in approx.iter().zip(exact.iter()) {
            assert_eq!(a[0], e[0], "misaligned snr rows");
            let gap = (a[5].parse::<f64>().unwrap() - e[5].parse::<f64>().unwrap()).abs();
            max_gap = max_gap.max(gap);
        }
    }
    assert!(max_gap <= 0.35, "max |exact − approx| = {max_gap}");
}

#[test]
fn accuracy_reports_documented_scale_errors_for_the_sphere_form() {
    // 2-PAM: error within 35% of entropy on the default −10..40 dB grid
    let out = stdout_of(&["accuracy", "--modulation", "pam", "--m", "2"]);
    let row = &csv_rows(&out)[0];
    assert_eq!(row[2], "sphere");
    let rel_entropy: f64 = row[9].parse().unwrap();
    assert!(rel_entropy <= 0.35, "{rel_entropy}");
    assert!(rel_entropy > 0.20, "{rel_entropy}"); // the 2-PAM error is real

    // 64-PAM: within 7% of entropy
    let out = stdout_of(&["accuracy", "--modulation", "pam", "--m", "64"]);
    let rel_entropy: f64 = csv_rows(&out)[0][9].parse().unwrap();
    assert!(rel_entropy <= 0.07, "{rel_entropy}");
}

#[test]
fn accuracy_reports_the_asymptotic_transition_error() {
    let out = stdout_of(&[
        "accuracy",
        "--modulation",
        "pam",
        "--m",
        "2",
        "--approx",
        "asymptotic",
        "--snr-db-from",
        "-13",
        "--snr-db-to",
        "20",
    ]);
    let row = &csv_rows(&out)[0];
    // relative to entropy the form is inside 10%...
    let rel_entropy: f64 = row[9].parse().unwrap();
    assert!(rel_entropy < 0.10, "{rel_entropy}");
    // ...while relative to the exact rate it peaks near 13.9% in the
    // transition region
    let rel_exact: f64 = row[11].parse().unwrap();
    assert!(
        (0.12..0.15).contains(&rel_exact),
        "expected the known ~0.1385 peak, got {rel_exact}"
    );
    // the asymptotic form only covers 2-PAM and 4-QAM
    assert_eq!(
        exit_code(&[
            "accuracy",
            "--modulation",
            "pam",
            "--m",
            "8",
            "--approx",
            "asymptotic"
        ]),
        2
    );
}

#[test]
fn mmin_reports_formula_rounding_and_bound() {
    let out = stdout_of(&["mmin", "--modulation", "pam", "--snr-db", "20"]);
    let row = &csv_rows(&out)[0];
    let exact: f64 = row[3].parse().unwrap();
    assert!((exact - 20.0).abs() < 1e-12);
    assert_eq!(row[4], "32");
    let bound: f64 = row[5].parse().unwrap();
    assert!((bound - 2.0 * 101f64.sqrt()).abs() < 1e-12);

    let out = stdout_of(&["mmin", "--modulation", "pam", "--snr-db", "0"]);
    let exact: f64 = csv_rows(&out)[0][3].parse().unwrap();
    assert_eq!(exact, 2.0);

    let out = stdout_of(&["mmin", "--modulation", "qam", "--snr-db", "0"]);
    let row = &csv_rows(&out)[0];
    let exact: f64 = row[3].parse().unwrap();
    assert_eq!(exact, 4.0);
    assert_eq!(row[5], ""); // no Ozarow-style bound for the QAM rule
}

#[test]
fn allocate_reports_streams_then_summary() {
    let out = stdout_of(&[
        "allocate",
        "--gains",
        "1.0,0.25",
        "--m",
        "4,4",
        "--budget",
        "2",
    ]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "stream,gain,m,power,rate");
    assert_eq!(lines[3], "objective,lambda,kkt_residual");
    assert_eq!(lines.len(), 5);

    // this instance puts the entire budget on the strong stream
    let s0: Vec<&str> = lines[1].split(',').collect();
    let s1: Vec<&str> = lines[2].split(',').collect();
    let p0: f64 = s0[3].parse().unwrap();
    let p1: f64 = s1[3].parse().unwrap();
    assert!((p0 - 2.0).abs() < 1e-9);
    assert_eq!(p1, 0.0);

    let summary: Vec<&str> = lines[4].split(',').collect();
    let objective: f64 = summary[0].parse().unwrap();
    let expected = closed_form::approx_pam(4, Snr::from_linear(2.0).unwrap())
        .unwrap()
        .per_dimension();
    assert!((objective - expected).abs() < 1e-9);

    // symmetric streams split evenly
    let out = stdout_of(&[
        "allocate",
        "--gains",
        "2.0,2.0,2.0",
        "--m",
        "8,8,8",
        "--budget",
        "9",
    ]);
    for line in out.lines().skip(1).take(3) {
        let p: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
        assert!((p - 3.0).abs() < 1e-9);
    }

    // single stream gets the full budget
    let out = stdout_of(&["allocate", "--gains", "0.5", "--m", "2", "--budget", "7"]);
    let p: f64 = out.lines().nth(1).unwrap().split(',').nth(3).unwrap().parse().unwrap();
    assert!((p - 7.0).abs() < 1e-8);
}

#[test]
fn exit_codes_follow_the_contract() {
    // usage errors: 2
    assert_eq!(exit_code(&["rate", "--modulation", "qam", "--m", "8", "--snr-db", "0", "--method", "approx"]), 2);
    assert_eq!(exit_code(&["rate", "--modulation", "pam", "--m", "2", "--snr-db", "0", "--method", "no-such-method"]), 2);
    assert_eq!(exit_code(&["allocate", "--gains", "1.0,2.0", "--m", "4", "--budget", "1"]), 2);
    assert_eq!(exit_code(&["sweep", "--modulation", "pam", "--m", "2", "--methods", "approx", "--snr-db-step", "-1"]), 2);
    assert_eq!(exit_code(&["no-such-command"]), 2);

    // numerical failure: 3 (the Hermite recurrence underflows at this size)
    assert_eq!(
        exit_code(&["rate", "--modulation", "pam", "--m", "2", "--snr-db", "0", "--method", "exact-gh", "--gh-nodes", "1000"]),
        3
    );

    // solver non-convergence: 4 (zero tolerance cannot be met)
    assert_eq!(
        exit_code(&["allocate", "--gains", "1.0,0.7", "--m", "4,8", "--budget", "3.1", "--tolerance", "0"]),
        4
    );

    assert_eq!(exit_code(&["mmin", "--modulation", "pam", "--snr-db", "0"]), 0);
}

#[test]
fn out_flag_and_json_format_work() {
    let dir = std::env::temp_dir().join(format!("modcap-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("rates.csv");

    let args = [
        "rate",
        "--modulation",
        "pam",
        "--m",
        "4",
        "--snr-db",
        "5",
        "--method",
        "approx,capacity",
        "--out",
        path.to_str().unwrap(),
    ];
    let out = modcap(&args);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv_rows(&written).len(), 2);

    let json_out = stdout_of(&[
        "rate",
        "--modulation",
        "pam",
        "--m",
        "4",
        "--snr-db",
        "5",
        "--method",
        "approx",
        "--format",
        "json",
    ]);
    let parsed: serde_json::Value = serde_json::from_str(&json_out).unwrap();
    let row = &parsed.as_array().unwrap()[0];
    assert_eq!(row["modulation"], "pam");
    assert_eq!(row["m"], 4);
    assert_eq!(row["method"], "approx");
    let rate = row["rate_bits_per_sym_per_dim"].as_f64().unwrap();
    let lib = closed_form::approx_pam(4, Snr::from_db(5.0).unwrap())
        .unwrap()
        .per_dimension();
    assert_eq!(rate, lib);

    let json_mmin = stdout_of(&["mmin", "--modulation", "qam", "--snr-db", "10", "--format", "json"]);
    let parsed: serde_json::Value = serde_json::from_str(&json_mmin).unwrap();
    assert_eq!(parsed["rounded_pow2"], 64);
    assert!(parsed["upper_bound"].is_null());

    std::fs::remove_dir_all(&dir).ok();
}
