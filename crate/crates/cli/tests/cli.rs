use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_curved2b"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_to(args: &[&str], out: &Path, threads: &str) -> Vec<u8> {
    let status = bin()
        .args(args)
        .arg("--output")
        .arg(out)
        .env("CURVED2B_THREADS", threads)
        .status()
        .unwrap();
    assert!(status.success());
    std::fs::read(out).unwrap()
}

const SWEEP: [&str; 11] = [
    "sweep",
    "--mu-ratio",
    "2",
    "--r1",
    "1",
    "--kappa-min",
    "-3",
    "--kappa-max",
    "2.2",
    "--steps",
    "400",
];

#[test]
fn sweep_output_is_identical_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = run_to(&SWEEP, &dir.path().join("a.csv"), "1");
    let b = run_to(&SWEEP, &dir.path().join("b.csv"), "4");
    let c = run_to(&SWEEP, &dir.path().join("c.csv"), "4");
    assert_eq!(a, b);
    assert_eq!(b, c);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("kappa,rule,branch,r2,feasible\n"));
}

#[test]
fn sweep_csv_and_json_agree() {
    let dir = tempfile::tempdir().unwrap();
    let csv = run_to(&SWEEP, &dir.path().join("s.csv"), "2");
    let mut args = SWEEP.to_vec();
    args.extend(["--format", "json"]);
    let json = run_to(&args, &dir.path().join("s.json"), "2");
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&json).unwrap();
    let mut reader = csv::Reader::from_reader(csv.as_slice());
    let records: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), records.len());
    for (row, rec) in rows.iter().zip(&records) {
        let k: f64 = rec[0].parse().unwrap();
        assert!((k - row["kappa"].as_f64().unwrap()).abs() <= 1e-15 * k.abs().max(1.0));
        assert_eq!(&rec[1], row["rule"].as_str().unwrap());
        assert_eq!(&rec[2], row["branch"].as_str().unwrap_or(""));
        match row["r2"].as_f64() {
            Some(x) => {
                let y: f64 = rec[3].parse().unwrap();
                assert!((x - y).abs() <= 1e-15 * x.abs());
            }
            None => assert_eq!(&rec[3], ""),
        }
        assert_eq!(&rec[4], row["feasible"].as_bool().unwrap().to_string());
    }
}

#[test]
fn report_csv_and_json_agree() {
    let base = [
        "rotate", "--kappa", "1", "--mu1", "1", "--mu2", "2", "--r", "1.2", "--branch", "acute",
    ];
    let json = run(&[&base[..], &["--format", "json"]].concat());
    let csv = run(&[&base[..], &["--format", "csv"]].concat());
    assert!(json.status.success() && csv.status.success());
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    let mut reader = csv::Reader::from_reader(csv.stdout.as_slice());
    let header = reader.headers().unwrap().clone();
    let rec = reader.records().next().unwrap().unwrap();
    for (key, cell) in header.iter().zip(rec.iter()) {
        let ptr = format!("/{}", key.replace('.', "/"));
        let want = &v.pointer(&ptr).unwrap_or_else(|| panic!("missing {key}"));
        match want.as_f64() {
            Some(x) => {
                let y: f64 = cell.parse().unwrap();
                assert!((x - y).abs() <= 1e-15 * x.abs(), "{key}: {x} vs {y}");
            }
            None => assert_eq!(want.as_str().unwrap_or(""), cell, "{key}"),
        }
    }
    let rep = &v["report"];
    for k in ["max_dist_dev", "max_J_drift", "max_E_drift"] {
        assert!(rep[k].as_f64().unwrap() < 1e-8, "{k}");
    }
}

#[test]
fn com_table_lists_every_rule() {
    let out = run(&[
        "com", "--kappa", "1", "--mu1", "1", "--mu2", "2", "--r", "1.5", "--rule", "all",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let names: Vec<String> = v["centers"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            format!(
                "{}:{}",
                c["rule"].as_str().unwrap(),
                c["branch"].as_str().unwrap_or("-")
            )
        })
        .collect();
    assert_eq!(
        names,
        [
            "lever:-",
            "collision:-",
            "rotation:acute",
            "rotation:obtuse",
            "variational:-"
        ]
    );
    assert!((v["centers"][1]["r1"].as_f64().unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn collide_is_deterministic() {
    let args = [
        "collide", "--kappa", "1", "--mu1", "1", "--mu2", "2", "--r", "1",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v["report"]["mismatch"].as_f64().unwrap() < 5e-3);
}

fn error_record(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stderr).expect("stderr holds a JSON error record")
}

#[test]
fn exit_codes() {
    let out = run(&["com", "--kappa", "1", "--r", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["error"], "UsageError");

    let out = run(&["boost", "--kappa", "1", "--r", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["error"], "WrongSign");

    let out = run(&[
        "rotate",
        "--kappa",
        "1",
        "--mu2",
        "2",
        "--r",
        "1.5707963267948966",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["error"], "RightAngleUndefined");

    // a tolerance this tight cannot be met in double precision
    let out = run(&[
        "collide", "--kappa", "1", "--mu2", "2", "--r", "1", "--tol", "1e-30",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_record(&out)["error"], "StepFailure");

    let out = run(&["sweep", "--steps", "4"]);
    assert!(out.status.success());
    let out = bin()
        .args(["sweep", "--steps", "4"])
        .env("CURVED2B_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_record(&out)["error"], "UsageError");
}
