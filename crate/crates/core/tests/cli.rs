use std::process::Command;

use braid_entropy::dynnikov::{apply_word, l0, ln_bigint, reduced_intersection_count};
use braid_entropy::word::parse_braid;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_braid-entropy"))
        .args(args)
        .env("BRAID_ENTROPY_WORKERS", "2")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn estimate_golden_braid() {
    let (code, out, _) = run(&["estimate", "--braid", "1 -2", "--strands", "3", "--eps", "1e-4"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let value = v["estimate"]["value"].as_f64().unwrap();
    assert!((value - 0.962).abs() < 0.05, "{value}");
    assert_eq!(v["config"]["braid"], "1 -2");
    assert_eq!(v["config"]["eps"], 1e-4);
}

#[test]
fn estimate_identity_and_errors() {
    let (code, out, _) = run(&["estimate", "--braid", "", "--strands", "3"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["estimate"]["value"], 0.0);

    let (code, out, err) = run(&["estimate", "--braid", "5", "--strands", "3"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("out of range"), "{err}");

    let (code, _, err) = run(&["estimate", "--braid", "1 x", "--strands", "3"]);
    assert_eq!(code, 1);
    assert!(err.contains("malformed"), "{err}");

    let (code, _, _) = run(&["estimate", "--braid", "1", "--strands", "3", "--eps", "-1"]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["estimate", "--braid", "1", "--strands", "3", "--mode", "quad"]);
    assert_eq!(code, 1);
}

#[test]
fn estimate_exit_codes_for_limits() {
    let (code, out, _) = run(&["estimate", "--braid", "1 -2", "--strands", "3", "--eps", "1e-12", "--m-max", "5"]);
    assert_eq!(code, 2);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["estimate"]["converged"], false);

    let (code, _, err) = run(&["estimate", "--braid", "1 -2", "--strands", "3", "--eps", "1e-12", "--digit-cap", "20"]);
    assert_eq!(code, 3);
    assert!(err.contains("cap"), "{err}");
}

#[test]
fn orbit_csv_matches_exact_engine() {
    let (code, out, _) = run(&["orbit", "--braid", "1 -2", "--strands", "3", "--iters", "10", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("# config "));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 10);
    let w = parse_braid("1 -2", 3).unwrap();
    let mut l = l0(3).unwrap();
    let mut prev = f64::NEG_INFINITY;
    for (k, row) in rows.iter().enumerate() {
        l = apply_word(&l, &w).unwrap();
        let lc: f64 = row[1].parse().unwrap();
        assert_eq!(row[0], (k + 1).to_string());
        assert!((lc - ln_bigint(&reduced_intersection_count(&l))).abs() < 1e-12);
        assert!(lc > prev);
        prev = lc;
    }
}

#[test]
fn orbit_identity_and_bad_iters() {
    let (code, out, _) = run(&["orbit", "--braid", "", "--strands", "4", "--iters", "3"]);
    assert_eq!(code, 0);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 3);
    for row in rows {
        assert!((row[1].parse::<f64>().unwrap() - 4f64.ln()).abs() < 1e-15);
    }
    let (code, _, _) = run(&["orbit", "--braid", "1", "--strands", "3", "--iters", "0"]);
    assert_eq!(code, 1);
}

#[test]
fn orbit_json_with_coords() {
    let (code, out, _) =
        run(&["orbit", "--braid", "1", "--strands", "2", "--iters", "2", "--format", "json", "--coords"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["entries"][0]["coords"], serde_json::json!(["1", "0", "0", "2"]));
    assert_eq!(v["entries"][0]["count"], "4");
    assert_eq!(v["mode"], "exact");
    assert_eq!(v["strands"], 2);

    let (code, _, _) = run(&["orbit", "--braid", "1", "--strands", "2", "--iters", "2", "--coords", "--mode", "float"]);
    assert_eq!(code, 1);
}

#[test]
fn search_length_two() {
    let (code, out, _) = run(&["search", "--max-length", "2", "--strands", "3..4", "--eps", "1e-3"]);
    assert_eq!(code, 0);
    let rows = csv_rows(&out);
    let top = rows.iter().find(|r| r[0] == "2" && r[1] == "1").unwrap();
    assert_eq!(top[2], "1 -2");
    assert_eq!(top[3], "3");
}

#[test]
fn search_single_letters_are_flat() {
    let (code, out, _) = run(&["search", "--max-length", "1", "--strands", "3..3"]);
    assert_eq!(code, 0);
    let rows = csv_rows(&out);
    assert!(!rows.is_empty());
    for r in rows {
        assert!(r[4].parse::<f64>().unwrap() <= 1e-3, "{r:?}");
    }
}

#[test]
fn search_json_and_bad_range() {
    let (code, out, _) = run(&["search", "--max-length", "2", "--strands", "3", "--format", "json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert_eq!(v["config"]["survey"]["workers"], 2);
    let (code, _, _) = run(&["search", "--max-length", "2", "--strands", "2..4"]);
    assert_eq!(code, 1);
}

#[test]
fn converge_reports_c_sup() {
    let (code, out, _) = run(&["converge", "--braid", "1 -2", "--strands", "3", "--iters", "1000"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let c_sup = v["c_sup"].as_f64().unwrap();
    assert!(c_sup.is_finite() && c_sup > 0.0);
    assert!((v["h_ref"].as_f64().unwrap() - 0.9624236501).abs() < 1e-8);
    assert_eq!(v["series"].as_array().unwrap().len(), 1000);
}

#[test]
fn converge_without_reference() {
    // σ_1 grows linearly, so the tight ratio estimator never settles
    let (code, _, err) = run(&["converge", "--braid", "1", "--strands", "3", "--iters", "100"]);
    assert_eq!(code, 2, "{err}");
    let (code, out, _) =
        run(&["converge", "--braid", "1", "--strands", "3", "--iters", "100", "--h-ref", "0", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("# c_sup ")));
    assert_eq!(csv_rows(&out).len(), 100);
}

#[test]
fn log_base_two() {
    let (_, out, _) = run(&["estimate", "--braid", "1 -2", "--strands", "3", "--estimator", "ratio", "--eps", "1e-8", "--log-base", "2"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let bits = v["estimate"]["value"].as_f64().unwrap();
    assert!((bits - 0.9624236501 / 2f64.ln()).abs() < 1e-6);
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("braid-entropy-out-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let (code, out, _) = run(&["estimate", "--braid", "1 -2", "--strands", "3", "--output", p]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v["estimate"]["value"].is_number());
    std::fs::remove_file(path).unwrap();
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("estimate"));
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 1);
}
