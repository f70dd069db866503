use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn harm_ent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_harm-ent")).args(args).output().unwrap()
}

fn ok_json(args: &[&str]) -> Value {
    let out = harm_ent(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    harm_ent(args).status.code().unwrap()
}

fn write_spec(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn classify_examples() {
    let regular = ok_json(&["classify", "--eta", "1.2", "--n", "64"]);
    assert_eq!(regular["kind"], "Regular");
    assert_eq!(regular["roots"].as_array().unwrap().len(), 0);

    let singular = ok_json(&["classify", "--eta", "0.6", "--n", "64"]);
    assert_eq!(singular["kind"], "Singular");
    assert_eq!(singular["widom_coefficient"], 0.5);
    let roots = singular["roots"].as_array().unwrap();
    assert_eq!(roots.len(), 2);
    assert!((roots[0]["angle"].as_f64().unwrap() - 0.6f64.acos()).abs() < 1e-8);

    let dir = tempfile::tempdir().unwrap();
    let spec =
        write_spec(dir.path(), "v0.json", r#"{"dimension":1,"extents":[32],"coefficients":[{"lag":[0],"value":4}]}"#);
    assert_eq!(ok_json(&["classify", "--spec", &spec])["kind"], "Regular");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // zero mode
    assert_eq!(code(&["classify", "--eta", "1", "--n", "64"]), 2);
    let asym = write_spec(
        dir.path(),
        "asym.json",
        r#"{"dimension":1,"extents":[16],"coefficients":[{"lag":[0],"value":4},{"lag":[1],"value":-1},{"lag":[-1],"value":-0.5}]}"#,
    );
    assert_eq!(code(&["classify", "--spec", &asym]), 2);
    assert_eq!(code(&["classify", "--eta", "1.2"]), 2);
    assert_eq!(code(&["classify"]), 2);
    assert_eq!(code(&["report", "--eta", "1.2", "--n", "64", "--n1", "64"]), 2);
    assert_eq!(code(&["report", "--eta", "1.2", "--n", "64", "--n1", "8", "--tol-override", "bogus=1"]), 2);
    // the two mutual-information forms cannot agree exactly
    assert_eq!(code(&["report", "--eta", "1.2", "--n", "64", "--n1", "8", "--tol-override", "identity=0"]), 3);
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&["classify", "--spec", missing.to_str().unwrap()]), 4);
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let out = blocker.join("sub");
    assert_eq!(code(&["report", "--eta", "1.2", "--n", "64", "--n1", "8", "--out", out.to_str().unwrap()]), 4);
}

fn csv_row(args: &[&str]) -> Vec<String> {
    let out = harm_ent(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# harm-ent "));
    assert_eq!(lines[1], "N,N1,S,I,lower,upper,xi,decay_class");
    lines[2].split(',').map(String::from).collect()
}

#[test]
fn report_examples() {
    let row = csv_row(&["report", "--eta", "1.2", "--n", "128", "--n1", "32", "--format", "csv"]);
    let f = |i: usize| row[i].parse::<f64>().unwrap();
    let (s, i, lower, upper) = (f(2), f(3), f(4), f(5));
    assert!(0.0 <= i && i <= s && s <= upper, "{row:?}");
    assert!((i - lower).abs() < 1e-6);
    assert_eq!(row[7], "Exponential");

    let mirror = csv_row(&["report", "--eta", "1.2", "--n", "128", "--n1", "96", "--format", "csv"]);
    assert!((mirror[2].parse::<f64>().unwrap() - s).abs() < 1e-8);

    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "free.json",
        r#"{"dimension":1,"extents":[40],"coefficients":[{"lag":[0],"value":2.25}]}"#,
    );
    let free = csv_row(&["report", "--spec", &spec, "--n1", "10", "--format", "csv"]);
    assert_eq!(free[2].parse::<f64>().unwrap(), 0.0);

    let out = dir.path().join("r");
    let json = ok_json(&["report", "--eta", "0.6", "--n", "128", "--n1", "20", "--out", out.to_str().unwrap()]);
    assert_eq!(json["correlation"]["decay_class"], "PowerLaw");
    assert_eq!(json["block"], serde_json::json!([20]));
    assert!(out.join("report.csv").exists() && out.join("report.json").exists());
}

#[test]
fn two_dimensional_report() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(
        dir.path(),
        "grid.json",
        r#"{"dimension":2,"extents":[12,12],"coefficients":[{"lag":[0,0],"value":4.5},{"lag":[1,0],"value":-1},{"lag":[0,1],"value":-1}]}"#,
    );
    let json = ok_json(&["report", "--spec", &spec, "--n1", "3"]);
    assert_eq!(json["block"], serde_json::json!([3, 3]));
    assert!(json["correlation"].is_null());
    assert!(json["entropy"].as_f64().unwrap() > 0.0);
}

#[test]
fn kernel_csv() {
    let out = harm_ent(&["kernel", "--eta", "1.2", "--n", "16"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[1], "lag,sqrt_value,inv_sqrt_value");
    assert_eq!(lines.len(), 2 + 16);
    let row: Vec<f64> = lines[3].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(row[0], 1.0);
    assert!((row[1] + 1.0).abs() < 1e-12);
}

fn run_fig1(out: &Path, threads: &str) -> Value {
    let output = Command::new(env!("CARGO_BIN_EXE_harm-ent"))
        .args(["fig1", "--sizes", "2:64", "--out", out.to_str().unwrap()])
        .env("HARM_ENT_THREADS", threads)
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    serde_json::from_slice(&output.stdout).unwrap()
}

#[test]
fn fig1_truncated_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let summary = run_fig1(&a, "1");
    run_fig1(&b, "3");
    for curve in summary["curves"].as_array().unwrap() {
        let eta = curve["eta"].as_f64().unwrap();
        if eta < 1.0 {
            assert_eq!(curve["strictly_increasing"], true, "{eta}");
            assert_eq!(curve["kind"], "Singular");
        } else {
            assert_eq!(curve["saturated"], true, "{eta}");
            assert_eq!(curve["kind"], "Regular");
        }
    }
    for name in
        ["fig1_eta0.2.csv", "fig1_eta0.6.csv", "fig1_eta1.2.csv", "fig1_eta1.6.csv", "fig1_fit.json", "fig1.svg"]
    {
        let (x, y) = (fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap());
        assert!(x == y, "{name} differs between runs");
    }
    let csv = fs::read_to_string(a.join("fig1_eta0.6.csv")).unwrap();
    assert_eq!(csv.lines().nth(1).unwrap(), "sweep_id,N,N1,eta_or_spec_hash,S,I,lower,upper");
    assert_eq!(csv.lines().count(), 2 + 63);
    assert_eq!(fs::read_to_string(a.join("fig1.svg")).unwrap().matches("<polyline").count(), 4);
}

#[test]
fn sweep_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s");
    // N = 24 puts a mode on the zero of λ at cos θ = 0.5
    let o = harm_ent(&["sweep", "--eta", "0.5", "--sizes", "21:27:3", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("skipped N=24"));
    let csv = fs::read_to_string(out.join("sweep.csv")).unwrap();
    let ns: Vec<&str> = csv.lines().skip(2).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(ns, ["21", "27"]);
    let fit: Value = serde_json::from_str(&fs::read_to_string(out.join("sweep_fit.json")).unwrap()).unwrap();
    assert_eq!(fit["skipped"][0]["n"], 24);

    let stdout = harm_ent(&["sweep", "--eta", "1.4", "--rule", "block", "--n", "64", "--sizes", "4,8,16"]).stdout;
    let text = String::from_utf8(stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().all(|l| l.starts_with('#') || l.starts_with("sweep_id") || l.contains(",64,")));
    assert_eq!(code(&["sweep", "--eta", "1.4", "--rule", "block", "--sizes", "4,8"]), 2);
}

#[test]
fn widom_szego_area_law() {
    let w = ok_json(&["widom", "--eta", "1.2"]);
    assert!(w["slope"].as_f64().unwrap().abs() < 0.02);

    let s = ok_json(&["szego", "--eta", "1.2", "--sizes", "16,32,64"]);
    let r = 1.2 - (1.2f64 * 1.2 - 1.0).sqrt();
    assert!((s["lower_bound"].as_f64().unwrap() + (1.0 - r * r).ln()).abs() < 1e-6);
    assert_eq!(s["determinant"]["kind"], "szego");

    let a = ok_json(&["area-law", "--n", "32", "--sizes", "2:6"]);
    assert_eq!(a["reference"], "area law");
    assert_eq!(a["rows"].as_array().unwrap().len(), 5);
    assert_eq!(
        ok_json(&["area-law", "--eta", "0.6", "--n", "33", "--sizes", "2:4"])["reference"],
        "no reference value"
    );
}
