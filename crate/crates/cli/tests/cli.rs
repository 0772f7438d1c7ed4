use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pointpair"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn report(args: &[&str]) -> (i32, Value) {
    let o = run(args);
    let v = serde_json::from_str(&stdout(&o)).unwrap_or_else(|e| panic!("{e}: {}", stdout(&o)));
    (o.status.code().unwrap(), v)
}

#[test]
fn eval_examples() {
    let base = ["eval", "--domain", "halfspace", "--dim", "2"];
    let o = run(&[
        &base[..],
        &["--metric", "gpp", "--alpha", "4", "--x", "0,1", "--y", "2,1"],
    ]
    .concat());
    assert!(o.status.success());
    assert_eq!(stdout(&o), "0.707106781186548\n");
    let o = run(&[&base[..], &["--metric", "jstar", "--x", "0,1", "--y", "2,1"]].concat());
    assert_eq!(stdout(&o), "0.5\n");
    let o = run(&[
        &base[..],
        &["--metric", "gpp", "--alpha", "4", "--x", "0,1", "--y", "0,1"],
    ]
    .concat());
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn eval_errors() {
    let o = run(&["eval", "--alpha", "4", "--x", "0,-1", "--y", "0,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("(0, -1)"));
    assert_eq!(run(&["eval", "--x", "0,1,x", "--y", "0,1"]).status.code(), Some(2));
    assert_eq!(
        run(&["eval", "--metric", "gpp", "--x", "0,1", "--y", "0,2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_all_on_half_space() {
    let args = [
        "verify",
        "--all",
        "--domain",
        "halfspace",
        "--alphas",
        "0.5,1,4,9",
        "--samples",
        "100000",
        "--seed",
        "7",
    ];
    let (code, v) = report(&args);
    assert_eq!(code, 0);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["status"], "pass");
    let skipped: Vec<&str> = v["skipped"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["bound_id"].as_str().unwrap())
        .collect();
    assert!(skipped.contains(&"lem3.3") && skipped.contains(&"thm5.2"));
    assert!(v["violation_reports"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["pass"] == true));
}

#[test]
fn reports_are_deterministic() {
    let args = [
        "verify",
        "--bound",
        "thm3.1,lem4.2",
        "--domain",
        "strip",
        "--alphas",
        "1,9",
        "--samples",
        "5000",
        "--seed",
        "3",
    ];
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("wall_time_seconds");
        v
    };
    let (_, a) = report(&args);
    let (_, b) = report(&args);
    assert_eq!(strip(a.clone()), strip(b));
    let (_, c) = report(&[&args[..9], &["--seed", "4"]].concat());
    assert_ne!(strip(a), strip(c));
}

#[test]
fn quasi_constant_discrepancy_is_reported() {
    let (code, v) = report(&[
        "verify",
        "--bound",
        "cor3.4",
        "--domain",
        "halfspace",
        "--alphas",
        "4,9",
        "--samples",
        "20000",
    ]);
    assert_eq!(code, 0);
    let cells = v["search_results"].as_array().unwrap();
    assert_eq!(cells[0]["constants"]["discrepancy"], false);
    let c = &cells[1]["constants"];
    assert_eq!(c["discrepancy"], true);
    assert!(c["stated"].as_f64().unwrap() < c["proof_chain"].as_f64().unwrap());
    assert!(v["notes"]
        .as_array()
        .unwrap()
        .iter()
        .any(|n| n.as_str().unwrap().starts_with("cor3.4 a=9")));
}

#[test]
fn unknown_bound_is_a_usage_error() {
    assert_eq!(run(&["verify", "--bound", "thm9.9"]).status.code(), Some(2));
    assert_eq!(run(&["verify"]).status.code(), Some(2));
}

#[test]
fn table_export() {
    let o = run(&[
        "verify",
        "--bound",
        "thm3.1",
        "--alphas",
        "1,4",
        "--samples",
        "2000",
        "--format",
        "table",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "bound_id,alpha,lower_const,upper_const,worst_lower_margin,worst_upper_margin,empirical_max_quotient,pass"
    );
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("thm3.1,1,1,2.23606797749979,") && lines[1].ends_with(",true"));
    assert!(lines[2].starts_with("thm3.1,4,1,1.4142135623731,"));
}

#[test]
fn stated_constant_violation_is_noted_not_failed() {
    let o = run(&[
        "verify",
        "--bound",
        "lem3.3",
        "--domain",
        "punctured",
        "--alpha",
        "1",
        "--samples",
        "10000",
    ]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("lem3.3 a=1: stated constants"));
}

#[test]
fn out_file() {
    let path = std::env::temp_dir().join(format!("pointpair-cli-{}.json", std::process::id()));
    let o = run(&["specfun", "--ell-k", "0", "--out", path.to_str().unwrap()]);
    assert!(o.status.success() && o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    // printed with 15 significant digits
    assert_eq!(
        v["search_results"][0]["value"].as_f64().unwrap(),
        "1.5707963267949".parse::<f64>().unwrap()
    );
}

#[test]
fn sharpness_reaches_the_constant() {
    let (code, v) = report(&[
        "sharpness",
        "--bound",
        "thm3.1",
        "--domain",
        "halfspace",
        "--alpha",
        "1",
    ]);
    assert_eq!(code, 0);
    let r = &v["search_results"][0];
    assert!(r["upper_ratio"].as_f64().unwrap() >= 0.98);
    assert!(r["upper_ratio"].as_f64().unwrap() <= 1.0 + 1e-12);
}

#[test]
fn conjecture_scan() {
    let (code, v) = report(&[
        "conjecture",
        "--alpha",
        "4",
        "--a",
        "0.5",
        "--samples",
        "100000",
        "--refine",
    ]);
    assert_ne!(code, 1);
    let sup = v["search_results"][0]["sup"]["best_value"].as_f64().unwrap();
    assert!((0.98 * 1.5..=1.5 + 1e-6).contains(&sup), "{sup}");
}

#[test]
fn lambda2() {
    let (code, v) = report(&["specfun", "--lambda2", "--tmax", "1e8"]);
    assert_eq!(code, 0);
    let l = v["search_results"][0]["lambda"].as_f64().unwrap();
    assert!((3.99..=4.01).contains(&l));
    assert_eq!(run(&["specfun"]).status.code(), Some(2));
}

#[test]
fn radial_stretch_checks_pass() {
    let (code, v) = report(&["qr", "--k", "1,2", "--alphas", "1,4", "--samples", "5000"]);
    assert_eq!(code, 0);
    assert_eq!(v["violation_reports"].as_array().unwrap().len(), 2 * 3);
    assert_eq!(run(&["qr", "--k", "0.5"]).status.code(), Some(2));
}
