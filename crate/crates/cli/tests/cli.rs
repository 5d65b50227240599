use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn k3cert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3cert")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = k3cert(&full);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).unwrap()
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"))
}

const GOLDEN: &[(&str, &[&str])] = &[
    ("check_worked", &["check", "--p", "7", "--coeffs", "1,1/7,1,1/7,1"]),
    ("check_phi6", &["check", "--p", "7", "--coeffs", "1,-1,1"]),
    ("check_foreign_denominator", &["check", "--p", "5", "--coeffs", "1,1/7,1,1/7,1"]),
    ("construct_p7_m2_h1", &["construct", "--p", "7", "--m", "2", "--h", "1"]),
    ("construct_p7_m10_h4", &["construct", "--p", "7", "--m", "10", "--h", "4"]),
    ("lattice_m10_square", &["lattice", "--m", "10", "--n", "1", "--disc-square", "true"]),
    ("lattice_m10_nonsquare", &["lattice", "--m", "10", "--n", "5", "--disc-square", "false"]),
    ("lattice_m8", &["lattice", "--m", "8", "--n", "5", "--p1", "7"]),
    ("feasible_p7_rho4_h9", &["feasible", "--p", "7", "--rho", "4", "--height", "9", "--witness"]),
    ("feasible_p5_rho2_h5", &["feasible", "--p", "5", "--rho", "2", "--height", "5", "--witness"]),
    ("hilbert_minus1_inf", &["hilbert", "--a", "-1", "--b", "-1", "--place", "inf"]),
    ("strip_worked", &["strip", "--coeffs", "1,-6/7,6/7,-6/7,6/7,-1"]),
];

#[test]
fn json_output_matches_golden_files() {
    for (name, args) in GOLDEN {
        let mut full = vec!["--json"];
        full.extend_from_slice(args);
        let first = stdout(&k3cert(&full));
        let expected = std::fs::read_to_string(golden_path(name)).unwrap();
        assert_eq!(first, expected, "golden mismatch for {name}");
        assert_eq!(stdout(&k3cert(&full)), first, "{name} is not byte-stable");
    }
}

#[test]
fn worked_example_values() {
    let v = json(&["check", "--p", "7", "--coeffs", "1,1/7,1,1/7,1"]);
    let r = &v["result"]["report"];
    assert_eq!(v["command"], "check");
    assert_eq!(r["verdict"]["status"], "pass");
    assert_eq!((r["m"].as_u64(), r["h"].as_u64(), r["a"].as_u64(), r["e"].as_u64()), (Some(2), Some(1), Some(1), Some(1)));
    let segs: Vec<(String, u64)> = r["slope_profile"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| (s["slope"].as_str().unwrap().to_string(), s["length"].as_u64().unwrap()))
        .collect();
    assert_eq!(segs, vec![("-1".into(), 1), ("0".into(), 2), ("1".into(), 1)]);
}

#[test]
fn spec_examples() {
    let c = json(&["construct", "--p", "7", "--m", "2", "--h", "1"]);
    assert_eq!(c["result"]["coefficients"], serde_json::json!(["1", "1/7", "1", "1/7", "1"]));
    let c = json(&["construct", "--p", "7", "--m", "10", "--h", "4"]);
    assert_eq!(c["result"]["report"]["e"], 2);
    let c = json(&["check", "--p", "7", "--coeffs", "1,-1,1"]);
    assert_eq!(c["result"]["report"]["verdict"]["bullet"], "no_root_of_unity");
    let c = json(&["check", "--p", "5", "--coeffs", "1,1/7,1,1/7,1"]);
    assert_eq!(c["result"]["report"]["verdict"]["bullet"], "l_integral");

    let l = json(&["lattice", "--m", "10", "--n", "1", "--disc-square", "true"]);
    assert_eq!(l["result"]["lattice"]["blocks"], serde_json::json!(["U"]));
    assert_eq!(l["result"]["bayer"]["hyperbolicity"]["status"], "pass");
    let l = json(&["lattice", "--m", "10", "--n", "5", "--disc-square", "false"]);
    assert_eq!(l["result"]["lattice"]["blocks"], serde_json::json!([{"diag": 2}, {"diag": -40}]));
    assert_eq!(l["result"]["no_minus2_certificate"]["certified"], true);
    let l = json(&["lattice", "--m", "8", "--n", "5", "--p1", "7"]);
    assert_eq!(l["result"]["p2"], 11);
    let status = l["result"]["bayer"]["hyperbolicity"]["status"].as_str().unwrap();
    assert!(status == "pass" || status == "conditional_pass");

    let f = json(&["feasible", "--p", "7", "--rho", "4", "--height", "9", "--witness"]);
    assert_eq!(f["result"]["feasible"], true);
    assert!(f["result"]["witness"]["coefficients"].is_array());

    assert_eq!(json(&["hilbert", "--a", "-1", "--b", "-1", "--place", "inf"])["result"], 1);
    assert_eq!(json(&["hilbert", "--a", "-5", "--b", "5", "--place", "2"])["result"], 0);
    let s = json(&["strip", "--coeffs", "1,-6/7,6/7,-6/7,6/7,-1"]);
    assert_eq!(s["result"]["removed"], serde_json::json!([1]));
    assert_eq!(s["result"]["stripped"], serde_json::json!(["1", "1/7", "1", "1/7", "1"]));
}

#[test]
fn table_p7_matches_artin_predicate() {
    let t = json(&["table", "--p", "7"]);
    let cells = t["result"].as_array().unwrap();
    assert_eq!(cells.len(), 100);
    for c in cells {
        let (rho, h) = (c["rho"].as_u64().unwrap(), c["h"].as_u64().unwrap());
        assert_eq!(c["feasible"].as_bool().unwrap(), rho <= 22 - 2 * h.min(11), "({rho}, {h})");
    }
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| k3cert(args).status.code();
    assert_eq!(code(&["check", "--p", "7", "--coeffs", "1,-1,1"]), Some(0));
    assert_eq!(code(&["feasible", "--p", "7", "--rho", "6", "--height", "9"]), Some(0));
    for bad in [
        &["construct", "--p", "7", "--m", "3", "--h", "4"][..],
        &["feasible", "--p", "3", "--rho", "2", "--height", "1"],
        &["check", "--p", "8", "--coeffs", "1,0,1"],
        &["check", "--p", "7", "--coeffs", "1,x"],
        &["check", "--p", "7", "--coeffs", "2,0,1"],
        &["lattice", "--m", "7", "--n", "5"],
        &["lattice", "--m", "10", "--n", "5", "--disc-square", "true"],
        &["hilbert", "--a", "0", "--b", "1", "--place", "3"],
        &["hilbert", "--a", "1", "--b", "1", "--place", "4"],
        &["nonsense"],
        &["check", "--p", "7"],
    ] {
        let out = k3cert(bad);
        assert_eq!(out.status.code(), Some(1), "{bad:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(!err.contains("panicked") && !err.contains("backtrace"), "{bad:?}: {err}");
    }
    assert_eq!(code(&["construct", "--p", "7", "--m", "4", "--h", "2", "--a-start", "60"]), Some(2));
}

#[test]
fn text_and_json_agree() {
    let args = ["check", "--p", "7", "--coeffs", "1,1/7,1,1/7,1"];
    let text = stdout(&k3cert(&args));
    let v = json(&args);
    let r = &v["result"]["report"];
    assert!(text.contains("verdict: pass"));
    assert!(text.contains(&format!("m = {}, h = {}, a = {}, e = {}", r["m"], r["h"], r["a"], r["e"])));
    assert!(text.contains("[(-1, 1), (0, 2), (1, 1)]"));

    let args = ["feasible", "--p", "7", "--rho", "6", "--height", "9"];
    assert!(stdout(&k3cert(&args)).contains("infeasible"));
    assert_eq!(json(&args)["result"]["feasible"], false);

    let table = stdout(&k3cert(&["table", "--p", "5"]));
    let row2 = table.lines().find(|l| l.trim_start().starts_with("2 ")).unwrap();
    assert_eq!(row2.split_whitespace().skip(1).collect::<String>(), "UWUWUWUWUW");
}
