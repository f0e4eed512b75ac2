use std::fs;
use std::process::{Command, Output};

use steerkit::qstate::{make_gisin, state_to_json};
use steerkit::CriterionReport;

const BIN: &str = env!("CARGO_BIN_EXE_steerkit");

fn steerkit(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("spawn steerkit")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_state_file_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gisin.json");
    let rho = make_gisin(std::f64::consts::FRAC_PI_4, 0.9).unwrap();
    fs::write(&path, state_to_json(&rho)).unwrap();

    let o = steerkit(&["classify", "--state", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let reports: Vec<CriterionReport> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(reports.len(), 7);
    assert!(reports.iter().all(|r| r.applicable));
    // T = diag(0.9, 0.9, -0.8): sum of squares 2.26
    assert!((reports[0].statistic - 2.26).abs() < 1e-12);
}

#[test]
fn classify_asymmetric_state_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gisin.json");
    fs::write(&path, state_to_json(&make_gisin(0.3, 0.9).unwrap())).unwrap();
    let p = path.to_str().unwrap();

    let o = steerkit(&["classify", "--state", p, "--criteria", "nlc-sym", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o).lines().nth(1).unwrap().to_string();
    let f: Vec<&str> = line.split(',').collect();
    assert_eq!((f[0], f[4], f[6]), ("NLC_SYM", "0", "0"), "{line}");

    let o = steerkit(&["classify", "--state", p, "--criteria", "nlc-sym", "--format", "csv", "--allow-asymmetric"]);
    let line = stdout(&o).lines().nth(1).unwrap().to_string();
    let f: Vec<&str> = line.split(',').collect();
    // evaluated, still flagged as outside the criterion's domain
    assert_eq!((f[4], f[6]), ("1", "0"), "{line}");
}

#[test]
fn classify_rejects_bad_state_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"rho": [[[1,0],[0,0]],[[0,0],[0,0]]]}"#).unwrap();
    let o = steerkit(&["classify", "--state", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = steerkit(&["classify", "--state", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn scan_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bd.csv");
    let o = steerkit(&[
        "scan", "--family", "bell-diagonal", "--grid", "c1=-1:1:5,c2=-1:1:5", "--constraint", "c3=c1",
        "--criteria", "nlc-full,linear", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("points=25 physical="));
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "idx,c1,c2,c3,nlc_full_stat,nlc_full_steerable,nlc_full_applicable,\
         linear_stat,linear_steerable,linear_applicable,unphysical"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 25);
    // (c1, c2, c3) = (-1, -1, -1): singlet
    assert_eq!(rows[0], "0,-1,-1,-1,3,1,1,3,1,1,0");
    // (1, 1, 1) has a negative eigenvalue
    assert_eq!(rows[24], "24,1,1,1,,,,,,,1");
}

#[test]
fn scan_rejects_bad_grids() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let out = out.to_str().unwrap();
    for grid in ["p=0:1:0", "q=0:1:3", "p=0:1", "p=0:1:100000000"] {
        let o = steerkit(&["scan", "--family", "werner", "--grid", grid, "--out", out]);
        assert_eq!(o.status.code(), Some(2), "{grid}");
    }
    let o = steerkit(&["scan", "--family", "gisin", "--grid", "p=0:1:3", "--out", out]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn scan_output_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "3", "0"] {
        let out = dir.path().join(format!("g{threads}.csv"));
        let o = Command::new(BIN)
            .env("STEERKIT_THREADS", threads)
            .args(["scan", "--family", "gisin", "--grid", "theta=0:pi/2:41,p=0:1:41", "--out"])
            .arg(&out)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        outputs.push(fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
}

#[test]
fn threshold_gisin_quarter_pi() {
    let o = steerkit(&[
        "threshold", "--family", "gisin", "--vary", "p", "--param", "theta=pi/4", "--criterion", "nlc-full",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let t: f64 = stdout(&o).trim().parse().unwrap();
    assert!((t - 2.0 / 3.0).abs() < 1e-9);
}

#[test]
fn threshold_exit_codes() {
    let no_flip = steerkit(&["threshold", "--family", "werner", "--vary", "p", "--range", "0.8:1", "--criterion", "linear"]);
    assert_eq!(no_flip.status.code(), Some(3));
    let bad = steerkit(&["threshold", "--family", "werner", "--vary", "p", "--range", "0:2", "--criterion", "linear"]);
    assert_eq!(bad.status.code(), Some(2));
    let unknown = steerkit(&["threshold", "--family", "werner", "--vary", "p", "--criterion", "bogus"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn audit_passes() {
    let o = steerkit(&["audit", "--random", "1000", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).trim_end().ends_with("audit: 1000 states, PASS"));
    let pure = steerkit(&["audit", "--random", "200", "--seed", "1", "--rank", "1"]);
    assert_eq!(pure.status.code(), Some(0));
}
