use std::process::{Command, Output};

use serde_json::Value;

fn knotchar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_knotchar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn payload(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_slice(&out.stdout).expect("valid JSON");
    assert!(report["version"].is_string());
    report["payload"].clone()
}

#[test]
fn strata_counts() {
    let out = knotchar(&["strata", "3", "5"]);
    let p = payload(&out);
    assert_eq!(p["counts"]["Tr"], 1);
    assert_eq!(p["counts"]["Irr3a"], 2);
    assert_eq!(p["counts"]["Irr3bA"], 12);
    assert_eq!(p["counts"]["Irr3bB"], 4);
    assert_eq!(p["agreement"], true);
}

#[test]
fn strata_rejects_non_coprime() {
    let out = knotchar(&["strata", "4", "6"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).expect("JSON error object");
    assert_eq!(err["error"]["kind"], "usage");
}

#[test]
fn euler_total() {
    let p = payload(&knotchar(&["euler", "3", "5"]));
    assert_eq!(p["total"], 27);
    assert_eq!(p["agreement"], true);
    assert_eq!(payload(&knotchar(&["euler", "2", "3"]))["total"], 2);
}

#[test]
fn homology_profile() {
    let p = payload(&knotchar(&["homology", "5"]));
    assert_eq!(p["betti"], serde_json::json!([1, 0, 6]));
    assert_eq!(p["torsion"], serde_json::json!([[], [], []]));
}

#[test]
fn homology_even_m_is_module_error() {
    let out = knotchar(&["homology", "4"]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "verification");
}

#[test]
fn incidence_summary() {
    let p = payload(&knotchar(&["incidence", "2", "3"]));
    assert_eq!(p["summary"]["nodes"]["components"], 3);
    assert_eq!(p["summary"]["euler"], 2);
    assert_eq!(p["summary"]["agreement"], true);
}

#[test]
fn incidence_respects_max_mn_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_knotchar"))
        .args(["incidence", "2", "5"])
        .env("KNOTCHAR_MAX_MN", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn circle_svg_is_deterministic() {
    let dir = std::env::temp_dir();
    let p1 = dir.join("knotchar-test-a.svg");
    let p2 = dir.join("knotchar-test-b.svg");
    let out1 = knotchar(&["circle", "3", "5", "1", "--svg", p1.to_str().unwrap()]);
    let out2 = knotchar(&["circle", "3", "5", "1", "--svg", p2.to_str().unwrap()]);
    let p = payload(&out1);
    assert_eq!(p["rational_points"], 45);
    assert_eq!(p["census"]["irr3a"], 9);
    let svg1 = std::fs::read(&p1).unwrap();
    let svg2 = std::fs::read(&p2).unwrap();
    assert_eq!(svg1, svg2);
    let text = String::from_utf8(svg1).unwrap();
    assert!(text.starts_with("<svg"));
    // 45 filled rational points + 6 boundary hit rings
    assert_eq!(text.matches("<circle").count(), 51);
    assert_eq!(out1.stdout, out2.stdout, "JSON output must be byte-identical");
    let _ = std::fs::remove_file(p1);
    let _ = std::fs::remove_file(p2);
}

#[test]
fn verify_small_sweep() {
    let out = knotchar(&["verify", "--max", "12"]);
    let p = payload(&out);
    assert_eq!(p["all_pass"], true);
    let empty = knotchar(&["verify", "--max", "0"]);
    assert!(empty.status.success());
    assert_eq!(payload(&empty)["all_pass"], true);
}

#[test]
fn usage_exit_code() {
    let out = knotchar(&["nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}
