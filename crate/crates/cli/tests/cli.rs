use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn scanex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scanex"))
        .args(args)
        .env_remove("SCANEX_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = scanex(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn tables_match_golden_files() {
    for k in ["1", "2", "3", "4"] {
        for fmt in ["csv", "md", "json"] {
            let got = stdout(&["tables", "--which", k, "--format", fmt]);
            assert_eq!(
                got,
                golden(&format!("table{k}.{fmt}")),
                "table {k} as {fmt}"
            );
        }
    }
}

#[test]
fn scan_tables_is_an_alias() {
    assert_eq!(
        stdout(&["scan", "tables", "--which", "3"]),
        stdout(&["tables", "--which", "3"])
    );
}

#[test]
fn table3_row_n3() {
    let csv = stdout(&["tables", "--which", "3"]);
    assert!(csv
        .lines()
        .any(|l| l == "3,0.99716,0.99500,0.98001,0.98000,0.00032,0.00010"));
}

#[test]
fn table4_markdown_has_five_rows() {
    let md = stdout(&["tables", "--which", "4", "--format", "md"]);
    let rows = md
        .lines()
        .filter(|l| l.starts_with("| ") && !l.starts_with("| n") && !l.contains("---"))
        .count();
    assert_eq!(rows, 5);
    assert!(md.contains("| −"));
}

#[test]
fn json_and_csv_agree_cell_for_cell() {
    for k in ["1", "2", "3", "4"] {
        let csv_text = stdout(&["tables", "--which", k, "--format", "csv"]);
        let json: Value =
            serde_json::from_str(&stdout(&["tables", "--which", k, "--format", "json"])).unwrap();
        let rows = json["rows"].as_array().unwrap();
        let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
        let headers = reader.headers().unwrap().clone();
        let records: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
        assert_eq!(records.len(), rows.len());
        for (rec, row) in records.iter().zip(rows) {
            for (key, cell) in headers.iter().zip(rec.iter()) {
                let j = &row[key];
                if cell.is_empty() {
                    assert!(j.is_null(), "table {k} {key}");
                } else {
                    let want: f64 = cell.parse().unwrap();
                    assert_eq!(j.as_f64(), Some(want), "table {k} {key}");
                }
            }
        }
    }
}

#[test]
fn coeffs_at_tenth() {
    let csv = stdout(&["coeffs", "--alpha", "0.1"]);
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let values: Vec<&str> = lines.next().unwrap().split(',').collect();
    let get = |k: &str| values[header.iter().position(|h| *h == k).unwrap()];
    assert_eq!(get("l"), "1.5347");
    assert_eq!(get("K"), "38.6302");
    assert_eq!(get("Gamma"), "480.696");
    assert_eq!(get("three_plus_alpha_Gamma"), "51.0696");
}

#[test]
fn exact_prints_full_precision() {
    let csv = stdout(&[
        "scan", "exact", "--m", "3", "--p", "0.5", "--N", "8", "--n", "2",
    ]);
    assert_eq!(csv, "m,p,N,n,cdf,degenerate\n3,0.5,8,2,0.58203125,false\n");
}

#[test]
fn short_sequence_is_flagged_degenerate() {
    let out = scanex(&[
        "scan", "exact", "--m", "5", "--p", "0.5", "--N", "3", "--n", "0",
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .ends_with(",1,true\n"));
    assert!(!out.stderr.is_empty());
}

#[test]
fn approx_with_exact_and_four_terms() {
    let json: Value = serde_json::from_str(&stdout(&[
        "scan",
        "approx",
        "--m",
        "9",
        "--p",
        "0.05",
        "--L",
        "10",
        "--n",
        "3",
        "--with-exact",
        "--t3",
        "--format",
        "json",
    ]))
    .unwrap();
    let row = &json["rows"][0];
    assert_eq!(row["approx"].as_f64(), Some(0.98001));
    assert_eq!(row["exact"].as_f64(), Some(0.98));
    assert_eq!(row["eh"].as_f64(), Some(0.00032));
    assert_eq!(row["in_range"], "true");
    assert!(row["t3_bound"].as_f64().unwrap() < 1e-5);
}

#[test]
fn approx_out_of_range_is_not_an_error() {
    let out = scanex(&[
        "scan", "approx", "--m", "3", "--p", "0.5", "--L", "4", "--n", "1",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().ends_with(",false"));
}

#[test]
fn simulate_is_reproducible_across_thread_counts() {
    let args = [
        "scan", "simulate", "--m", "3", "--p", "0.5", "--N", "8", "--n", "2", "--reps", "50000",
        "--seed", "9",
    ];
    let one = stdout(&[&args[..], &["--threads", "1"]].concat());
    let four = stdout(&[&args[..], &["--threads", "4"]].concat());
    assert_eq!(one, four);
    let est: f64 = one
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(7)
        .unwrap()
        .parse()
        .unwrap();
    assert!((est - 0.58203125).abs() < 0.01);
}

#[test]
fn sandwich_brackets_value() {
    let csv = stdout(&[
        "scan", "sandwich", "--m", "9", "--p", "0.05", "--N", "93", "--n", "3",
    ]);
    let v: Vec<f64> = csv
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .skip(5)
        .map(|x| x.parse().unwrap())
        .collect();
    assert!(v[0] <= v[1] && v[1] <= v[2]);
}

#[test]
fn lambda_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.txt");
    let body: String = (1..=30).map(|k| format!("{}\n", 0.05f64.powi(k))).collect();
    std::fs::write(&path, body).unwrap();
    let json: Value = serde_json::from_str(&stdout(&[
        "lambda",
        "--p-file",
        path.to_str().unwrap(),
        "--format",
        "json",
    ]))
    .unwrap();
    let lambda = json["rows"][0]["lambda"].as_f64().unwrap();
    assert!((lambda - 1.0 / 0.95).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    let bad_alpha = scanex(&["coeffs", "--alpha", "0.2"]);
    assert_eq!(bad_alpha.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_alpha.stderr).contains("alpha out of range (0, 0.1]"));
    assert!(bad_alpha.stdout.is_empty());

    assert_eq!(
        scanex(&["scan", "exact", "--m", "3", "--p", "1.5", "--N", "8", "--n", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        scanex(&["scan", "exact", "--m", "0", "--p", "0.5", "--N", "8", "--n", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        scanex(&["lambda", "--p-file", "/nonexistent/p.txt"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(scanex(&["tables", "--which", "7"]).status.code(), Some(2));
    assert_eq!(scanex(&["bogus"]).status.code(), Some(2));

    let capacity = scanex(&[
        "scan", "exact", "--m", "30", "--p", "0.5", "--N", "80", "--n", "2",
    ]);
    assert_eq!(capacity.status.code(), Some(3));
}
