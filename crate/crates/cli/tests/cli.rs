use std::path::PathBuf;
use std::process::{Command, Output};

use curvtool::Report;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn curvtool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvtool"))
        .args(args)
        .env_remove("CURVTOOL_SEED")
        .output()
        .expect("binary runs")
}

fn curvtool_with_seed(args: &[&str], seed: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvtool"))
        .args(args)
        .env("CURVTOOL_SEED", seed)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Report {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    Report::parse(&text).unwrap_or_else(|e| panic!("{e}\n{text}\n{}", String::from_utf8_lossy(&out.stderr)))
}

fn values(r: &Report) -> &serde_json::Value {
    &r.results["values"]
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn rphi7_file_is_ip_of_rank_two() {
    let out = curvtool(&["tensor", "--file", &data("rphi7.tensor"), "--samples", "200", "--expect-ip"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(values(&r)["verdict"], true);
    assert_eq!(values(&r)["rank"], 2);
    assert_eq!(r.flags["ip"], true);
    // Ricci of R_φ with one reflected axis: ρ₁₁ = −(n−1), others (n−2) − 1
    let rho: Vec<f64> = serde_json::from_value(values(&r)["ricci_eigenvalues"].clone()).unwrap();
    let want = [-6.0, 4.0, 4.0, 4.0, 4.0, 4.0, 4.0];
    assert!(rho.iter().zip(want).all(|(a, b)| (a - b).abs() <= 1e-12), "{rho:?}");
}

#[test]
fn zero_constant_tensor_is_ip_of_rank_zero() {
    let out = curvtool(&["tensor", "--builtin", "constant", "--dim", "7", "--c", "0"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(values(&r)["zero_tensor"], true);
    assert_eq!(values(&r)["verdict"], true);
    assert_eq!(values(&r)["rank"], 0);
}

#[test]
fn non_ip_tensor_fails_only_when_expected() {
    // curvature concentrated on two disjoint coordinate planes with different weights
    let text = r#"{ "dim": 4, "entries": [
        { "i": 0, "j": 1, "k": 0, "l": 1, "value": 1.0 },
        { "i": 2, "j": 3, "k": 2, "l": 3, "value": 5.0 } ] }"#;
    let path = std::env::temp_dir().join(format!("curvtool-nonip-{}.tensor", std::process::id()));
    std::fs::write(&path, text).unwrap();
    let p = path.display().to_string();
    let plain = curvtool(&["tensor", "--file", &p]);
    assert_eq!(code(&plain), 0);
    assert_eq!(values(&report(&plain))["verdict"], false);
    let strict = curvtool(&["tensor", "--file", &p, "--expect-ip"]);
    assert_eq!(code(&strict), 2);
    assert_eq!(report(&strict).flags["ip"], false);
    std::fs::remove_file(path).unwrap();
}

#[test]
fn malformed_file_exits_3_with_position() {
    let out = curvtool(&["tensor", "--file", &data("malformed.tensor")]);
    assert_eq!(code(&out), 3);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 5 column"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn conflicting_entries_exit_3() {
    assert_eq!(code(&curvtool(&["tensor", "--file", &data("conflict.tensor")])), 3);
}

#[test]
fn unsupported_dimension_exits_4() {
    assert_eq!(code(&curvtool(&["tensor", "--file", &data("dim9.tensor")])), 4);
    assert_eq!(code(&curvtool(&["tensor", "--builtin", "constant", "--dim", "9"])), 4);
}

#[test]
fn missing_file_exits_4() {
    assert_eq!(code(&curvtool(&["tensor", "--file", &data("absent.tensor")])), 4);
}

#[test]
fn usage_errors_exit_3_and_help_exits_0() {
    assert_eq!(code(&curvtool(&["frobnicate"])), 3);
    assert_eq!(code(&curvtool(&["tensor"])), 3);
    assert_eq!(code(&curvtool(&["tensor", "--builtin", "constant", "--dim", "seven"])), 3);
    assert_eq!(code(&curvtool(&["--help"])), 0);
}

#[test]
fn e11_ricci_eigenvalues() {
    let out = curvtool(&["metric", "--name", "e11", "--params", "a=1", "--point", "0,0,0", "--checks", "ricci"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    let ev: Vec<f64> = serde_json::from_value(values(&r)["ricci"]["eigenvalues"].clone()).unwrap();
    assert!((ev[0] + 2.0).abs() <= 1e-9 && ev[1].abs() <= 1e-9 && ev[2].abs() <= 1e-9, "{ev:?}");
    assert_eq!(values(&r)["ricci"]["rank"], 1);
}

#[test]
fn power_metric_checks() {
    let out = curvtool(&["metric", "--name", "power", "--params", "a=2", "--point", "1,0,0", "--checks", "ricci,bianchi,h"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    // ρ₁₁ = 2f with f = (a² − 1)/(4x²)·(−1) at x = 1
    let ev: Vec<f64> = serde_json::from_value(values(&r)["ricci"]["eigenvalues"].clone()).unwrap();
    let rho11 = -(2.0f64 * 2.0 - 1.0) / 2.0;
    assert!((ev[0] - rho11).abs() <= 1e-9, "{ev:?}");
    let bianchi: Vec<f64> = serde_json::from_value(values(&r)["bianchi"].clone()).unwrap();
    assert!(bianchi.iter().all(|x| x.abs() <= 1e-5));
    assert!(values(&r)["h"].as_f64().unwrap() <= 1e-5);
    assert_eq!(r.tolerances["identity"], 1e-5);
    assert!(r.flags.values().all(|&f| f) && r.flags.len() == 2);
}

#[test]
fn metric_errors() {
    assert_eq!(code(&curvtool(&["metric", "--name", "power", "--params", "a=2", "--point", "-1,0,0"])), 5);
    assert_eq!(code(&curvtool(&["metric", "--name", "sphere"])), 4);
    assert_eq!(code(&curvtool(&["metric", "--name", "e11", "--checks", "ricci,torsion"])), 4);
    assert_eq!(code(&curvtool(&["metric", "--name", "e11", "--point", "0,0"])), 3);
    assert_eq!(code(&curvtool(&["metric", "--name", "e11", "--params", "a"])), 3);
    assert_eq!(code(&curvtool(&["metric", "--name", "milnor", "--checks", "h"])), 5);
}

#[test]
fn milnor_ricci_values() {
    let out = curvtool(&["metric", "--name", "milnor", "--params", "l1=0,l2=0,l3=1"]);
    assert_eq!(code(&out), 0);
    // Heisenberg: μ = (1/2, 1/2, −1/2), ρ = 2(μ₂μ₃, μ₁μ₃, μ₁μ₂)
    let ev: Vec<f64> = serde_json::from_value(values(&report(&out))["ricci"]["eigenvalues"].clone()).unwrap();
    assert_eq!(ev, vec![-0.5, -0.5, 0.5]);
}

#[test]
fn identity_examples() {
    let out = curvtool(&["identity", "--name", "w-rank1", "--alpha", "2", "--trials", "100"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(values(&r)["rank_one"], 100);
    assert_eq!(r.tolerances["identity"], 1e-9);

    let out = curvtool(&["identity", "--name", "cubic-pencil", "--a", "1", "--b", "1"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    let res = &values(&r)["residuals"];
    for k in ["r1", "r2", "r3"] {
        assert!(res[k].as_f64().unwrap() <= 1e-12);
    }

    let out = curvtool(&["identity", "--name", "cc0-probe", "--trials", "1000", "--rng", "7"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(values(&r)["fails_property"], 1000);
    assert_eq!(values(&r)["inconclusive"], serde_json::json!([]));

    let out = curvtool(&["identity", "--name", "m-identity", "--alpha", "3", "--trials", "20"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn pencil_with_wrong_norm_is_a_property_failure() {
    let out = curvtool(&["identity", "--name", "cubic-pencil", "--a", "1", "--b", "1", "--z", "2"]);
    assert_eq!(code(&out), 2);
    assert_eq!(report(&out).flags["cubic-pencil"], false);
}

#[test]
fn minor_divisibility_from_the_command_line() {
    // [[t, ‖Y‖²], [−1, t]]: the only minor is t² + ‖Y‖²
    let ok = curvtool(&["identity", "--name", "minor-div", "--vars", "2", "--matrix", "t,y1^2+y2^2;-1,t"]);
    assert_eq!(code(&ok), 0);
    assert_eq!(values(&report(&ok))["minors_checked"], 1);
    let bad = curvtool(&["identity", "--name", "minor-div", "--vars", "2", "--matrix", "t,0;0,t"]);
    assert_eq!(code(&bad), 2);
    let garbage = curvtool(&["identity", "--name", "minor-div", "--vars", "2", "--matrix", "t^2,0;0,t"]);
    assert_eq!(code(&garbage), 3);
}

#[test]
fn unknown_identity_exits_4() {
    assert_eq!(code(&curvtool(&["identity", "--name", "w-rank2"])), 4);
}

#[test]
fn ring_arithmetic() {
    let out = curvtool(&["ring", "--vars", "3", "--expr", "t^2", "--times", "t", "--expect-valuation", "2"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(values(&r)["element"], "-y1^2 - y2^2 - y3^2");
    assert_eq!(values(&r)["valuation"], 2);
    assert_eq!(values(&r)["times"]["product_valuation"], 3);

    let zero = curvtool(&["ring", "--vars", "2", "--expr", "t^2 + y1^2 + y2^2"]);
    assert_eq!(code(&zero), 0);
    assert!(values(&report(&zero))["valuation"].is_null());

    let miss = curvtool(&["ring", "--vars", "2", "--expr", "y1", "--expect-valuation", "1"]);
    assert_eq!(code(&miss), 2);
    assert_eq!(code(&curvtool(&["ring", "--vars", "2", "--expr", "y3"])), 3);
    assert_eq!(code(&curvtool(&["ring", "--vars", "2", "--expr", "t^4"])), 3);
    assert_eq!(code(&curvtool(&["ring", "--vars", "2", "--expr", "1/0"])), 3);
}

#[test]
fn small_search_report() {
    let out = curvtool(&["search", "--dim", "4", "--seeds", "3", "--iters", "150", "--rng", "5"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    let census = &values(&r)["census"];
    assert_eq!(census["candidates"], 3);
    let cands = values(&r)["candidates"].as_array().unwrap();
    assert_eq!(cands.len(), 3);
    for c in cands {
        assert!(c["residual"].as_f64().unwrap() >= 0.0);
        assert!(c.get("tensor_file").is_none());
    }
    assert_eq!(r.flags["no_counterexample"], true);
    assert_eq!(r.tolerances["residual"], 1e-6);
}

#[test]
fn invalid_search_config_exits_5() {
    assert_eq!(code(&curvtool(&["search", "--dim", "4", "--seeds", "1", "--iters", "0"])), 5);
    assert_eq!(code(&curvtool(&["search", "--dim", "2", "--seeds", "1"])), 4);
}

#[test]
fn runs_are_bit_reproducible() {
    let cases: [&[&str]; 4] = [
        &["tensor", "--builtin", "rphi", "--dim", "6", "--minus", "2", "--conjugate", "--rng", "3"],
        &["identity", "--name", "cc0-probe", "--trials", "50", "--rng", "9"],
        &["identity", "--name", "m-identity", "--trials", "10", "--rng", "9"],
        &["search", "--dim", "4", "--seeds", "2", "--iters", "100", "--rng", "11"],
    ];
    for args in cases {
        let a = curvtool(args);
        let b = curvtool(args);
        assert_eq!(code(&a), 0, "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn seed_environment_overrides_rng() {
    let args = ["identity", "--name", "cc0-probe", "--trials", "5", "--rng", "1"];
    let from_flag = curvtool(&["identity", "--name", "cc0-probe", "--trials", "5", "--rng", "2"]);
    let from_env = curvtool_with_seed(&args, "2");
    assert_eq!(values(&report(&from_flag)), values(&report(&from_env)));
    assert_ne!(values(&report(&curvtool(&args))), values(&report(&from_env)));
    assert_eq!(report(&from_env).results["parameters"]["rng"], 2);
    assert_eq!(code(&curvtool_with_seed(&args, "banana")), 3);
}

#[test]
fn digest_tracks_inputs_not_formatting() {
    let a = report(&curvtool(&["ring", "--vars", "2", "--expr", "y1"]));
    let b = report(&curvtool(&["ring", "--expr", "y1", "--vars", "2"]));
    let c = report(&curvtool(&["ring", "--vars", "2", "--expr", "y2"]));
    assert_eq!(a.inputs_digest, b.inputs_digest);
    assert_ne!(a.command, b.command);
    assert_ne!(a.inputs_digest, c.inputs_digest);
}

#[test]
fn report_written_to_out_round_trips() {
    let path = std::env::temp_dir().join(format!("curvtool-report-{}.json", std::process::id()));
    let p = path.display().to_string();
    let out = curvtool(&["metric", "--name", "warped", "--params", "K=-1,A=1,B=2", "--point", "0.5,0.7,0.2", "--checks", "ricci,cotton", "--out", &p]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let r = Report::parse(&text).unwrap();
    assert_eq!(r.to_text(), text);
    assert_eq!(values(&r)["cotton"]["conformally_flat"], true);
    std::fs::remove_file(path).unwrap();
}
