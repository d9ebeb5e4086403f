use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use tempfile::TempDir;

use trendspectra::design::cutoff_objective;
use trendspectra::{select_cutoff, symmetric_filter, LocalPolySpec, TauOperator};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trendspectra"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Rows of a CSV body as numbers, skipping the header and the first `skip` columns.
fn numbers(csv: &str, skip: usize) -> Vec<Vec<f64>> {
    csv.lines()
        .skip(1)
        .map(|l| {
            l.split(',')
                .skip(skip)
                .map(|x| x.parse().unwrap())
                .collect()
        })
        .collect()
}

fn write_series(dir: &TempDir, name: &str, values: &[f64]) -> String {
    let mut text = String::from("t,value\n");
    for (t, v) in values.iter().enumerate() {
        text.push_str(&format!("{},{v:?}\n", t + 1));
    }
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn summary_field(csv: &str, key: &str) -> String {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == key).unwrap();
    row[i].to_string()
}

#[test]
fn weights_table_for_local_cubic_boundaries() {
    let csv = stdout(&[
        "weights",
        "--filter",
        "henderson",
        "--h",
        "6",
        "--p",
        "3",
        "--boundary",
        "lpr",
    ]);
    let header = csv.lines().next().unwrap();
    assert_eq!(header, "filter,-6,-5,-4,-3,-2,-1,0,1,2,3,4,5,6");
    let labels: Vec<&str> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(
        labels,
        ["symmetric", "q=0", "q=1", "q=2", "q=3", "q=4", "q=5", "q=6"]
    );
    for row in numbers(&csv, 1) {
        assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn identity_filter_is_a_single_row() {
    let csv = stdout(&["weights", "--h", "0", "--p", "0"]);
    assert_eq!(csv, "filter,0\nsymmetric,1\n");
}

#[test]
fn degree_above_bound_is_rejected() {
    let out = run(&["weights", "--h", "2", "--p", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error[config]:"), "{err}");
    assert!(err.contains("bound 4"), "{err}");
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn spectrum_columns() {
    let tau = numbers(&stdout(&["spectrum", "--algebra", "tau11", "--n", "51"]), 1);
    assert_eq!(tau.len(), 51);
    assert_eq!(tau[0][0], 0.0);
    assert!((tau[0][1] - 1.0).abs() < 1e-12);
    for r in &tau {
        assert!((r[1].abs() - r[2]).abs() < 1e-11);
    }

    let circ = numbers(
        &stdout(&["spectrum", "--algebra", "circulant", "--n", "51"]),
        1,
    );
    for i in 1..51 {
        assert_eq!(circ[i][1], circ[51 - i][1]);
    }

    let id = numbers(
        &stdout(&["spectrum", "--h", "0", "--p", "0", "--n", "9"]),
        1,
    );
    assert!(id.iter().all(|r| r[1] == 1.0));
}

#[test]
fn bound_reports_four_decimals() {
    let delta = |args: &[&str]| summary_field(&stdout(args), "delta");
    let lc: f64 = delta(&[
        "bound",
        "--n",
        "51",
        "--boundary",
        "lc",
        "--algebra",
        "tau11",
    ])
    .parse()
    .unwrap();
    assert!((lc - 0.1608).abs() < 1e-3);
    assert_eq!(
        delta(&[
            "bound",
            "--n",
            "51",
            "--boundary",
            "lpr",
            "--algebra",
            "circulant"
        ]),
        "1.0047"
    );
    assert_eq!(
        delta(&[
            "bound",
            "--n",
            "51",
            "--boundary",
            "reflecting",
            "--algebra",
            "tau11"
        ]),
        "0.0000"
    );
    assert_eq!(
        delta(&[
            "bound",
            "--n",
            "51",
            "--boundary",
            "lc",
            "--algebra",
            "circulant",
            "--replace-scope",
            "realtime",
            "--fill",
            "circulant"
        ]),
        "0.5248"
    );
}

#[test]
fn bound_report_lists_every_eigenvalue() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("report.csv");
    stdout(&[
        "bound",
        "--n",
        "31",
        "--boundary",
        "cq",
        "--report",
        report.to_str().unwrap(),
    ]);
    let text = fs::read_to_string(&report).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "index,lambda_re,lambda_im,nearest,reference,distance,contained"
    );
    assert_eq!(text.lines().count(), 32);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn constant_series_is_unchanged() {
    let dir = TempDir::new().unwrap();
    let input = write_series(&dir, "c.csv", &[4.25; 30]);
    let rows = numbers(
        &stdout(&[
            "smooth",
            "--input",
            &input,
            "--boundary",
            "cq",
            "--cutoff",
            "auto",
        ]),
        1,
    );
    for r in rows {
        assert!(
            (r[1] - 4.25).abs() < 1e-10 && (r[2] - 4.25).abs() < 1e-10,
            "{r:?}"
        );
    }
}

#[test]
fn cubic_series_is_reproduced_by_local_cubic_boundaries() {
    let dir = TempDir::new().unwrap();
    let values: Vec<f64> = (0..40)
        .map(|t| {
            let x = t as f64 / 20.0;
            1.0 - 2.0 * x + 0.5 * x * x + x * x * x
        })
        .collect();
    let input = write_series(&dir, "cubic.csv", &values);
    let rows = numbers(
        &stdout(&["smooth", "--input", &input, "--boundary", "lpr"]),
        1,
    );
    for (r, v) in rows.iter().zip(&values) {
        assert!((r[1] - v).abs() < 1e-8, "{r:?} vs {v}");
    }
}

#[test]
fn designed_trend_has_smaller_interior_error_variance() {
    let n = 500;
    let h = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    let noise = Normal::new(0.0, 1.0).unwrap();
    let truth: Vec<f64> = (0..n)
        .map(|t| {
            5.0 + 0.01 * t as f64 + 2.0 * (2.0 * std::f64::consts::PI * t as f64 / 120.0).cos()
        })
        .collect();
    let y: Vec<f64> = truth.iter().map(|m| m + noise.sample(&mut rng)).collect();
    let dir = TempDir::new().unwrap();
    let input = write_series(&dir, "sim.csv", &y);
    let csv = stdout(&["smooth", "--input", &input, "--cutoff", "xi=0.5"]);
    assert_eq!(csv.lines().next().unwrap(), "t,value,trend,trend_k");
    let rows = numbers(&csv, 1);
    let variance = |col: usize| {
        let e: Vec<f64> = (h..n - h).map(|t| rows[t][col] - truth[t]).collect();
        let mean = e.iter().sum::<f64>() / e.len() as f64;
        e.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (e.len() - 1) as f64
    };
    assert!(
        variance(2) <= variance(1),
        "{} > {}",
        variance(2),
        variance(1)
    );
}

#[test]
fn malformed_rows_report_their_line() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.csv");
    let mut text = String::from("t,value\n");
    for t in 1..=20 {
        text.push_str(&format!("{t},{}\n", if t == 3 { "x" } else { "1" }));
    }
    fs::write(&path, text).unwrap();
    let out = run(&["smooth", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(
        err.starts_with("error[config]:") && err.contains("line 4"),
        "{err}"
    );
}

#[test]
fn short_series_is_rejected() {
    let dir = TempDir::new().unwrap();
    let input = write_series(&dir, "short.csv", &[1.0; 12]);
    let out = run(&["smooth", "--input", &input]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("must exceed 2h=12"));
}

#[test]
fn design_diagnostics() {
    let full = stdout(&["design", "--n", "40", "--cutoff", "k=40"]);
    assert_eq!(summary_field(&full, "bias_discrepancy"), "0");

    let auto = stdout(&["design", "--n", "51"]);
    let sym = symmetric_filter(&LocalPolySpec::henderson13()).unwrap();
    let xi = TauOperator::new(&sym, 51).unwrap().eigenvalues();
    let xs = select_cutoff(&xi).unwrap().xi_sorted().to_vec();
    let best = (1..=51)
        .min_by(|&a, &b| cutoff_objective(&xs, a).total_cmp(&cutoff_objective(&xs, b)))
        .unwrap();
    assert_eq!(summary_field(&auto, "k"), best.to_string());
    assert_eq!(summary_field(&auto, "k_auto"), best.to_string());

    let period = stdout(&["design", "--n", "100", "--cutoff", "period=10"]);
    assert_eq!(summary_field(&period, "k"), "20");
}

#[test]
fn design_files() {
    let dir = TempDir::new().unwrap();
    let m = dir.path().join("m.csv");
    let r = dir.path().join("r.csv");
    stdout(&[
        "design",
        "--n",
        "30",
        "--output",
        m.to_str().unwrap(),
        "--report",
        r.to_str().unwrap(),
    ]);
    let rows = numbers(&fs::read_to_string(&m).unwrap(), 1);
    assert_eq!(rows.len(), 30);
    assert!(rows.iter().all(|row| row.len() == 30));
    let diag = numbers(&fs::read_to_string(&r).unwrap(), 1);
    assert!(diag[6..24]
        .iter()
        .all(|d| d[1] <= d[0] + 1e-12 && d[2] >= -1e-12));
}

fn same_bytes(args: &[&str], files: &[&Path]) {
    let first = run(args);
    let saved: Vec<Vec<u8>> = files.iter().map(|f| fs::read(f).unwrap()).collect();
    let second = run(args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "{args:?}");
    for (f, bytes) in files.iter().zip(saved) {
        assert_eq!(fs::read(f).unwrap(), bytes, "{}", f.display());
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let values: Vec<f64> = (0..80)
        .map(|t| (t as f64 / 7.0).sin() + 0.01 * t as f64)
        .collect();
    let input = write_series(&dir, "s.csv", &values);
    let out = dir.path().join("trend.csv");
    let report = dir.path().join("report.csv");
    let (o, r) = (out.to_str().unwrap(), report.to_str().unwrap());
    same_bytes(
        &[
            "smooth", "--input", &input, "--cutoff", "auto", "--output", o,
        ],
        &[&out],
    );
    same_bytes(
        &["bound", "--n", "51", "--boundary", "ql", "--report", r],
        &[&report],
    );
    same_bytes(
        &[
            "design", "--n", "60", "--cutoff", "xi=0.4", "--output", o, "--report", r,
        ],
        &[&out, &report],
    );
    same_bytes(&["weights", "--boundary", "cq"], &[]);
    same_bytes(&["spectrum", "--n", "25", "--algebra", "circulant"], &[]);
}

#[test]
fn usage_errors_and_help() {
    let out = run(&["bound", "--n", "51", "--boundary", "spline"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(
        err.starts_with("error[config]:") && err.lines().count() == 1,
        "{err}"
    );

    let out = run(&["design", "--n", "51", "--cutoff", "k=0"]);
    assert_eq!(out.status.code(), Some(1));

    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["smooth"]).status.code(), Some(1));
}
