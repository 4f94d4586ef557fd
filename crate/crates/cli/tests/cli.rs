//! End-to-end runs of the compiled binary: exit codes, byte determinism,
//! and the shape of every report.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn luinv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_luinv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_error(out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stderr).expect("stderr is a JSON error object");
    assert!(v.get("error").is_some(), "missing error object: {v}");
    v
}

fn write_rank_two(name: &str, p: f64, e1: [f64; 4], e2: [f64; 4]) -> PathBuf {
    let amps = |v: [f64; 4]| -> Value {
        v.iter()
            .map(|re| serde_json::json!({ "re": re, "im": 0.0 }))
            .collect()
    };
    let file = serde_json::json!({
        "p": p,
        "E1": { "parties": 2, "dim": 2, "amplitudes": amps(e1) },
        "E2": { "parties": 2, "dim": 2, "amplitudes": amps(e2) },
    });
    let path = tmp(name);
    fs::write(&path, serde_json::to_string(&file).unwrap()).unwrap();
    path
}

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[test]
fn gen_and_analyze_are_byte_deterministic() {
    let a = tmp("det_a.json");
    let b = tmp("det_b.json");
    for path in [&a, &b] {
        let out = luinv(&[
            "gen", "--kind", "random", "--n", "4", "--m", "2", "--seed", "7", "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let bytes_a = fs::read(&a).unwrap();
    assert!(!bytes_a.is_empty());
    assert_eq!(bytes_a, fs::read(&b).unwrap(), "same seed, same bytes");

    let run1 = luinv(&["analyze", a.to_str().unwrap()]);
    let run2 = luinv(&["analyze", a.to_str().unwrap()]);
    assert!(run1.status.success());
    assert_eq!(run1.stdout, run2.stdout, "analysis is a pure function");

    let other = luinv(&[
        "gen", "--kind", "random", "--n", "4", "--m", "2", "--seed", "8",
    ]);
    assert_ne!(run1.stdout, other.stdout);
}

#[test]
fn analyze_reports_bell_quantities() {
    let path = tmp("bell.json");
    luinv(&["gen", "--kind", "bell", "--out", path.to_str().unwrap()]);
    let report = stdout_json(&luinv(&["analyze", path.to_str().unwrap()]));

    assert_eq!(report["parties"], 2);
    assert_eq!(report["dim"], 2);
    assert_eq!(report["label"], "bell");
    let inv = report["invariants"].as_array().unwrap();
    assert!((inv[0].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((inv[1].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((report["concurrence"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(report["concurrence"]["discrepancy"].as_f64().unwrap() <= 1e-9);
    let schmidt = report["schmidt"].as_array().unwrap();
    assert!((schmidt[0].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((schmidt[1].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((report["eof"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    // det(A A^H) = 1/4 and trace = 1 for the Bell reduction.
    assert!((report["charpoly"]["c_1"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((report["charpoly"]["c_0"].as_f64().unwrap() - 0.25).abs() < 1e-12);
}

#[test]
fn analyze_product_concurrence_vanishes() {
    let path = tmp("product.json");
    luinv(&[
        "gen", "--kind", "product", "--n", "3", "--out", path.to_str().unwrap(),
    ]);
    let report = stdout_json(&luinv(&[
        "analyze",
        path.to_str().unwrap(),
        "--what",
        "concurrence",
    ]));
    assert!(report["concurrence"]["value"].as_f64().unwrap() <= 1e-10);
    assert!(report.get("schmidt").is_none(), "only requested sections");
}

#[test]
fn analyze_rejects_bipartite_sections_for_more_parties() {
    let path = tmp("ghz3.json");
    luinv(&["gen", "--kind", "ghz", "--out", path.to_str().unwrap()]);
    for section in ["schmidt", "eof", "charpoly"] {
        let out = luinv(&["analyze", path.to_str().unwrap(), "--what", section]);
        assert_eq!(out.status.code(), Some(1), "{section}");
        let err = stderr_error(&out);
        assert_eq!(err["error"]["kind"], "params");
    }
    // Without an explicit request the same file analyzes fine.
    let report = stdout_json(&luinv(&["analyze", path.to_str().unwrap()]));
    assert!((report["concurrence"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(report.get("schmidt").is_none());
}

#[test]
fn sepcheck_separable_mixture_exits_zero() {
    let path = write_rank_two(
        "mix_even.json",
        0.5,
        [FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2],
        [0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0],
    );
    let out = luinv(&["sepcheck", path.to_str().unwrap(), "--with-ppt"]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["resolution"], "criterion");
    assert_eq!(report["separable"], true);
    assert_eq!(report["violated"], "none");
    assert_eq!(report["ppt_agrees"], true);
    assert!((report["mixing_value"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert!(report["theta"].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn sepcheck_uneven_mixture_is_entangled() {
    let path = write_rank_two(
        "mix_uneven.json",
        0.3,
        [FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2],
        [0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0],
    );
    let out = luinv(&["sepcheck", path.to_str().unwrap(), "--with-ppt"]);
    assert_eq!(out.status.code(), Some(3));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["separable"], false);
    assert_eq!(report["violated"], "theta_nonexistent");
    assert_eq!(report["ppt_agrees"], true);
    // Partial transpose eigenvalue 1/2 - max(p, q) at p = 0.3.
    assert!((report["ppt"]["min_eigenvalue"].as_f64().unwrap() + 0.2).abs() < 1e-12);
}

#[test]
fn sepcheck_degenerate_routes_to_fallback() {
    // E2 is a product state: every alpha minor vanishes, the criterion
    // cannot pick a pivot, and the partial transpose decides.
    let path = write_rank_two(
        "mix_degenerate.json",
        0.9,
        [FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2],
        [0.0, 1.0, 0.0, 0.0],
    );
    let out = luinv(&["sepcheck", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["resolution"], "ppt_fallback");
    assert_eq!(report["degeneracy"], "alpha");
    assert_eq!(report["separable"], false);
    assert_eq!(report["ppt"]["is_ppt"], false);
}

#[test]
fn sepcheck_rejects_invalid_inputs() {
    let out_of_range = write_rank_two(
        "mix_bad_p.json",
        1.2,
        [FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2],
        [0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0],
    );
    let out = luinv(&["sepcheck", out_of_range.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_error(&out)["error"]["kind"], "validate");

    let overlapping = write_rank_two(
        "mix_overlap.json",
        0.5,
        [FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2],
        [FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2],
    );
    let out = luinv(&["sepcheck", overlapping.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_error(&out)["error"]["kind"], "validate");
}

#[test]
fn lutest_reference_states_stay_put() {
    let bell = tmp("lutest_bell.json");
    luinv(&["gen", "--kind", "bell", "--out", bell.to_str().unwrap()]);
    let out = luinv(&[
        "lutest", bell.to_str().unwrap(), "--trials", "1000", "--seed", "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["trials"], 1000);
    assert_eq!(report["within_tolerance"], true);
    assert!(report["max_drift"].as_f64().unwrap() <= 1e-9);

    let ghz = tmp("lutest_ghz.json");
    luinv(&["gen", "--kind", "ghz", "--out", ghz.to_str().unwrap()]);
    let out = luinv(&[
        "lutest", ghz.to_str().unwrap(), "--trials", "1000", "--seed", "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn lutest_zero_trials_is_an_input_error() {
    let path = tmp("lutest_zero.json");
    luinv(&["gen", "--kind", "bell", "--out", path.to_str().unwrap()]);
    let out = luinv(&["lutest", path.to_str().unwrap(), "--trials", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_error(&out)["error"]["kind"], "validate");
}

#[test]
fn unreadable_or_malformed_input_exits_one() {
    let out = luinv(&["analyze", tmp("does_not_exist.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_error(&out)["error"]["kind"], "io");

    let garbled = tmp("garbled.json");
    fs::write(&garbled, "{ this is not json").unwrap();
    let out = luinv(&["analyze", garbled.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_error(&out);
    assert_eq!(err["error"]["kind"], "parse");
    let message = err["error"]["message"].as_str().unwrap();
    assert!(message.contains("line"), "parse context: {message}");
}

#[test]
fn text_format_is_aligned_rows() {
    let path = tmp("text_bell.json");
    luinv(&["gen", "--kind", "bell", "--out", path.to_str().unwrap()]);
    let out = luinv(&["analyze", path.to_str().unwrap(), "--format", "text"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(!lines.is_empty());
    // Neither keys nor values contain spaces, so on every line the value
    // starts right after the last space — at one shared column.
    let value_col = lines[0].rfind(' ').unwrap() + 1;
    for line in &lines {
        assert_eq!(line.rfind(' ').unwrap() + 1, value_col, "row: {line}");
    }
    assert!(text.contains("concurrence.value"));
    assert!(text.contains("eof"));

    let json_out = luinv(&["analyze", path.to_str().unwrap(), "--format", "json"]);
    assert_ne!(json_out.stdout, text.as_bytes());
}

#[test]
fn gen_validates_kind_parameters() {
    // bell pins N = M = 2.
    let out = luinv(&["gen", "--kind", "bell", "--n", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_error(&out)["error"]["kind"], "validate");

    // bell-plus generates its three-qubit state with pinned shape.
    let path = tmp("bellplus.json");
    let out = luinv(&["gen", "--kind", "bell-plus", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let report = stdout_json(&luinv(&["analyze", path.to_str().unwrap()]));
    assert_eq!(report["parties"], 3);
    let c = report["concurrence"]["value"].as_f64().unwrap();
    let expected = (2.0f64 / 3.0).sqrt();
    assert!((c - expected).abs() < 1e-12, "bell-plus concurrence {c}");
}
