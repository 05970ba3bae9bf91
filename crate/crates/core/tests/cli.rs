use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn harmonic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_harmonic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = harmonic(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

fn report<'a>(v: &'a Value, quantity: &str) -> &'a Value {
    v["payload"]["reports"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["quantity"] == quantity)
        .unwrap_or_else(|| panic!("no report for {quantity}"))
}

#[test]
fn envelope_is_versioned() {
    let v = json(&["construct", "--n", "5", "--x0", "0.5"]);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["kind"], "construct");
    assert_eq!(v["payload"]["vertices"].as_array().unwrap().len(), 5);
}

#[test]
fn sum_inv_sq_sides_is_invariant_for_square() {
    let v = json(&["invariants", "--n", "4", "--x0", "0.5", "--samples", "256"]);
    let r = report(&v, "sum-inv-sq-sides");
    assert_eq!(r["verdict"], "invariant");
    assert!(r["closed_form"].as_f64().is_some());
}

#[test]
fn odd_cot_power_of_square_is_zero() {
    let v = json(&[
        "invariants",
        "--n",
        "4",
        "--x0",
        "0.5",
        "--quantity",
        "cotpow:3",
    ]);
    assert_eq!(report(&v, "cotpow:3")["verdict"], "zero");
}

#[test]
fn regular_triangle_has_no_varying_quantity() {
    let v = json(&["invariants", "--n", "3", "--x0", "0"]);
    for r in v["payload"]["reports"].as_array().unwrap() {
        assert_ne!(r["verdict"], "varies", "{}", r["quantity"]);
    }
}

#[test]
fn floats_round_trip_through_json() {
    let v = json(&["construct", "--n", "7", "--x0", "0.3", "--t", "0.1"]);
    let out = harmonic(&["construct", "--n", "7", "--x0", "0.3", "--t", "0.1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let x = v["payload"]["vertices"][2][0].as_f64().unwrap();
    assert!(text.contains(&format!("{x:.16e}")));
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(again, v);
}

#[test]
fn csv_output_has_header() {
    let out = harmonic(&[
        "invariants",
        "--n",
        "5",
        "--quantity",
        "area",
        "--samples",
        "8",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        [
            "schema_version",
            "quantity",
            "t",
            "value",
            "closed_form",
            "abs_dev"
        ]
    );
    assert_eq!(rdr.records().count(), 8);
}

#[test]
fn invalid_configurations_exit_with_two() {
    for args in [
        &["construct", "--n", "2"][..],
        &["construct", "--x0", "1.0"],
        &["construct", "--x0", "-0.3"],
        &["construct", "--x0", "0.3", "--casey-d", "0.3"],
        &["invariants", "--quantity", "cotpow:0"],
        &["conjectures", "area-sum", "--ah", "-1"],
        &["transform", "loop", "--n", "5", "--omega", "1.5"],
    ] {
        let out = harmonic(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn negative_parameter_with_flag_is_accepted() {
    let v = json(&["construct", "--x0", "-0.3", "--allow-negative"]);
    assert_eq!(v["payload"]["x0"].as_f64(), Some(-0.3));
}

#[test]
fn tolerance_failure_exits_with_three() {
    let out = harmonic(&["transform", "to-homothetic", "--n", "5", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tolerance"));
    let out = harmonic(&["conjectures", "sin2theta", "--n", "5", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let path = scratch("config.json");
    std::fs::write(&path, r#"{"n": 6, "x0": 0.2}"#).unwrap();
    let p = path.to_str().unwrap();
    let v = json(&["--config", p, "construct"]);
    assert_eq!(v["payload"]["n"], 6);
    let v = json(&["--config", p, "construct", "--n", "4"]);
    assert_eq!(v["payload"]["n"], 4);
    assert_eq!(v["payload"]["x0"].as_f64(), Some(0.2));

    std::fs::write(&path, r#"{"bogus": 1}"#).unwrap();
    assert_eq!(
        harmonic(&["--config", p, "construct"]).status.code(),
        Some(2)
    );
}

#[test]
fn svg_is_deterministic() {
    for kind in ["brocard", "homothetic", "apollonius", "pencil"] {
        let a = harmonic(&["plot", kind, "--n", "5", "--x0", "0.5"]);
        let b = harmonic(&["plot", kind, "--n", "5", "--x0", "0.5"]);
        assert_eq!(a.status.code(), Some(0), "{kind}");
        assert!(a.stdout.starts_with(b"<svg") || a.stdout.starts_with(b"<?xml"));
        assert_eq!(a.stdout, b.stdout, "{kind}");
    }
}

#[test]
fn field_plot_writes_file() {
    let path = scratch("field.svg");
    let p = path.to_str().unwrap();
    let args = [
        "plot",
        "field",
        "--n",
        "3",
        "--x0",
        "0.5",
        "--resolution",
        "41",
        "--out",
        p,
    ];
    assert_eq!(harmonic(&args).status.code(), Some(0));
    let first = std::fs::read(&path).unwrap();
    assert_eq!(harmonic(&args).status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), first);
}

#[test]
fn loop_reports_reciprocal_root() {
    let v = json(&["transform", "loop", "--n", "5", "--omega", "0.4"]);
    let p = &v["payload"]["report"];
    let x0 = p["x0"].as_f64().unwrap();
    assert!((p["x0_printed"].as_f64().unwrap() * x0 - 1.0).abs() < 1e-9);
    assert_eq!(v["payload"]["printed_root_is_reciprocal"], true);
    assert!(v["payload"]["consistency"].as_f64().unwrap() < 1e-8);
}

#[test]
fn seeded_spot_checks_are_reproducible() {
    let args = ["invariants", "--n", "5", "--seed", "7", "--samples", "32"];
    assert_eq!(harmonic(&args).stdout, harmonic(&args).stdout);
}
