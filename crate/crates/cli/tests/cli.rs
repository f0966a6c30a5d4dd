use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn qplane(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qplane")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = qplane(&all);
    assert_eq!(o.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).expect("valid json")
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("{}-{name}", std::process::id()))
}

#[test]
fn normalize_examples() {
    let r = json(&["normalize", "x x* - q x* x"]);
    assert_eq!(r["payload"]["normal_form"], "0");
    assert_eq!(r["payload"]["degree"], "-inf");
    assert_eq!(r["verdict"], "OK");

    let o = qplane(&["normalize", "(x+x*)^2"]);
    assert!(stdout(&o).starts_with("x^2 + (q+1) x*^1 x^1 + x*^2\ndegree: 2\n"));

    let o = qplane(&["normalize", "x^(2"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("offset 2"), "{err}");
    assert!(err.contains("  ^"), "{err}");
}

#[test]
fn sos_check_and_refute() {
    let r = json(&["sos", "check", "(x+x*)^2 - 2(x+x*) + 1", "--q", "2"]);
    assert_eq!(r["verdict"], "SOS");
    assert_eq!(r["payload"]["verified"], true);
    assert!(r["payload"]["residual_max"].as_f64().unwrap() <= 1e-6);

    let r = json(&["sos", "refute", "(x+x*)^2 - 2(x+x*) + 0.8", "--q", "2"]);
    assert_eq!(r["verdict"], "REFUTED");
    let value = r["payload"]["value"].as_f64().unwrap();
    assert!((value - (0.8 - 8.0 / 9.0)).abs() < 1e-12);

    let l = "(x x*)^2 - (x+x*)^2 + 3.7";
    assert_eq!(json(&["sos", "check", l, "--q", "1/2"])["verdict"], "NOT_FOUND");
    assert_eq!(json(&["sos", "refute", l, "--q", "1/2"])["verdict"], "NOT_FOUND");
}

#[test]
fn psatz_examples() {
    let r = json(&["psatz", "(x x*)^2 - (x+x*)^2 + 3.7", "--q", "1/2", "--depth", "1", "--kmax", "1"]);
    assert_eq!(r["verdict"], "PSATZ_FOUND");
    assert_eq!(r["payload"]["word"], serde_json::json!([1]));
    assert!(r["payload"]["residual_max"].as_f64().unwrap() <= 1e-6);
    assert!(r["payload"]["diagnostics"]["symbol_min"].as_f64().unwrap() > 0.0);

    let r = json(&["psatz", "1", "--q", "2"]);
    assert_eq!(r["verdict"], "PSATZ_FOUND");
    assert_eq!(r["payload"]["word"], serde_json::json!([]));

    let r = json(&["psatz", "-1", "--q", "2"]);
    assert_eq!(r["verdict"], "NOT_FOUND");
    assert_eq!(r["payload"]["diagnostics"]["probe"]["negative_witness"], true);
}

#[test]
fn op_commands() {
    let r = json(&["op", "probe", "-1", "--q", "2"]);
    assert_eq!(r["verdict"], "NEGATIVE_WITNESS");
    assert_eq!(r["payload"]["min_eig"].as_f64(), Some(-1.0));

    let r = json(&["op", "residuals", "--q", "2", "--K", "20"]);
    assert_eq!(r["verdict"], "OK");
    assert!(r["payload"]["max_residual"].as_f64().unwrap() <= 1e-10);
    assert_eq!(r["payload"]["polar"].as_array().unwrap().len(), 16);

    let o = qplane(&["op", "moments", "--q", "2", "--lambda", "1.2", "--degmax", "4", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    assert!(csv.starts_with("k,l,re,im\n"));
    let a11 = csv.lines().find(|l| l.starts_with("1,1,")).unwrap();
    let re: f64 = a11.split(',').nth(2).unwrap().parse().unwrap();
    assert!((re - 1.44).abs() < 1e-12);
    let r = json(&["op", "moments", "--q", "2", "--lambda", "1.2"]);
    assert_eq!(r["payload"]["agreement"], true);

    let r = json(&["op", "moments", "--q", "1/2", "--seed", "7"]);
    assert_eq!(r["payload"]["agreement"], true);
}

#[test]
fn symbol_command() {
    let r = json(&["symbol", "x^2 + x*^2 + x* x", "--q", "2"]);
    // 1 + 2√2 cos θ has its minimum 1 − 2√2 at θ = π
    let min = r["payload"]["min"].as_f64().unwrap();
    assert!((min - (1.0 - 2.0 * 2f64.sqrt())).abs() < 1e-9);
    let printed = json(&["symbol", "x^2 + x*^2 + x* x", "--q", "2", "--printed"]);
    assert_eq!(printed["payload"]["coefficients"], r["payload"]["coefficients"]);
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["sos", "check", "x* x"],
        vec!["sos", "check", "x", "--q", "2"],
        vec!["op", "probe", "x* x", "--q", "1"],
        vec!["op", "residuals", "--q", "2", "--lambda", "5"],
        vec!["normalize", "x", "--format", "csv"],
        vec!["normalize", "x", "--tol", "0"],
        vec!["normalize", "x", "--q", "abc"],
        vec!["bogus"],
        vec!["normalize"],
    ] {
        let o = qplane(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
    }
    assert_eq!(qplane(&["--help"]).status.code(), Some(0));
}

#[test]
fn deterministic_reports() {
    let args = ["sos", "extract", "(x+x*)^4 - 2(x+x*)^2 + 18/25", "--q", "2", "--format", "json"];
    let a = qplane(&args);
    let b = qplane(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn certificate_file_roundtrip() {
    let report = scratch("extract.json");
    let f = "(x+x*)^2 - 2(x+x*) + 1";
    let o = qplane(&["sos", "extract", f, "--q", "2", "--out", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["verdict"], "SOS");
    let cert = scratch("cert.json");
    std::fs::write(&cert, v["payload"]["certificate"].to_string()).unwrap();
    let r = json(&["sos", "check", f, "--cert", cert.to_str().unwrap()]);
    assert_eq!(r["verdict"], "SOS");
    // same certificate against a different target
    let r = json(&["sos", "check", "(x+x*)^2 - 2(x+x*) + 2", "--cert", cert.to_str().unwrap()]);
    assert_eq!(r["verdict"], "NOT_FOUND");

    let refute = scratch("refute.json");
    let g = "(x+x*)^2 - 2(x+x*) + 0.5";
    let o = qplane(&["sos", "refute", g, "--q", "2", "--out", refute.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&refute).unwrap()).unwrap();
    let dual = scratch("dual.json");
    std::fs::write(&dual, v["payload"]["certificate"].to_string()).unwrap();
    assert_eq!(json(&["sos", "check", g, "--cert", dual.to_str().unwrap()])["verdict"], "REFUTED");
}
