// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::Command;

use extlip::cli::run_command;
use serde_json::Value;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Out {
    fn report(&self) -> Value {
        serde_json::from_str(&self.stdout).expect("stdout holds one JSON report")
    }

    fn result(&self, name: &str) -> Value {
        self.report()["results"]
            .as_array()
            .unwrap()
            .iter()
            .find(|r| r["name"] == name)
            .unwrap_or_else(|| panic!("no result `{name}` in {}", self.stdout))
            .clone()
    }
}

fn run(args: &[&str]) -> Out {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_command(args.iter().copied(), &mut out, &mut err);
    Out {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

#[test]
fn analyze_swap_at_base() {
    let o = run(&["analyze", "--map", &fixture("swap.map.json"), "--at", "0"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(o.result("lip_at")["value"], 2.0);
    assert_eq!(o.result("e_constant")["value"], 2.0);
    assert_eq!(o.result("lip_const")["value"], 2.0);
}

#[test]
fn analyze_vector_map_and_lambda() {
    let o = run(&["analyze", "--map", &fixture("m3-h.map.json"), "--at", "0", "--t", "1", "--t", "2"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    // h(0) = 3 moves the base, so only the pointwise quantities are defined
    assert!(o.report()["notes"][0].as_str().unwrap().contains("base point"));
    assert_eq!(o.result("norm_lx")["value"], 3.0);
}

#[test]
fn analyze_sample() {
    let o = run(&["analyze", "--sample", &fixture("x5.sample.json")]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(o.result("e_const")["value"], 1.0);
    let lip = o.result("lip_est")["value"].as_f64().unwrap();
    assert!(lip < 5.0 && lip > 4.9);
    assert_eq!(o.result("lip_est")["provenance"], "sampled");
}

#[test]
fn dp_m3_with_witness_vertex() {
    let o = run(&["dp", "--p", "1", "--space", "m3", "--s", "a", "--t", "b"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let r = o.result("d_p");
    assert_eq!(r["value"], 3.0);
    assert_eq!(r["witness"]["vertex"]["a"], 1.0);
    assert_eq!(r["witness"]["vertex"]["b"], -2.0);
    assert_eq!(r["provenance"], "oracle");
}

#[test]
fn dp_from_file_and_infinity() {
    let o = run(&["dp", "--p", "inf", "--space", &fixture("m3.space.json"), "--s", "a,b", "--t", "b"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(o.result("d_p")["value"], 3.0);
    assert_eq!(o.result("d_inf_closed_form")["value"], 3.0);
}

#[test]
fn check_space_reports_triangle_violation() {
    let o = run(&["check-space", "--file", &fixture("bad.space.json")]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("triangle"), "{}", o.stderr);
    assert!(o.stderr.contains("(a, 0, b)"), "{}", o.stderr);
    let o = run(&["check-space", "--file", &fixture("m3.space.json")]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let o = run(&["check-space", "--file", &fixture("plane4.space.json")]);
    assert_eq!(o.code, 0, "{}", o.stderr);
}

#[test]
fn malformed_files_exit_2_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let p: PathBuf = dir.path().join("broken.space.json");
    std::fs::write(&p, "{\n  \"labels\": [\"0\", \"a\"],\n  \"base\": \"0\",\n  \"dist\": [[0, 1], [1, 0]\n}").unwrap();
    let o = run(&["check-space", "--file", p.to_str().unwrap()]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("line 5"), "{}", o.stderr);
    assert!(o.stderr.contains("broken.space.json"), "{}", o.stderr);

    let m = dir.path().join("x.map.json");
    std::fs::write(&m, r#"{"src_ref": "missing.space.json", "dst_ref": "missing.space.json", "table": [0]}"#).unwrap();
    let o = run(&["analyze", "--map", m.to_str().unwrap()]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("missing.space.json"), "{}", o.stderr);

    let o = run(&["dp", "--space", "m3", "--s", "zz"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("zz"), "{}", o.stderr);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&["dp", "--p", "0.5", "--space", "m3"]).code, 2);
    assert_eq!(run(&["suite", "--only", "no.such-property"]).code, 2);
    assert_eq!(run(&["--help"]).code, 0);
}

#[test]
fn de_and_dual_and_adjoint() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(fixture("m3.space.json"), dir.path().join("m3.space.json")).unwrap();
    let id = dir.path().join("id.map.json");
    std::fs::write(&id, r#"{"src_ref": "m3.space.json", "dst_ref": "m3.space.json", "table": ["0", "a", "b"]}"#).unwrap();
    let o = run(&["de", "--map", &fixture("swap.map.json"), "--other", id.to_str().unwrap()]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(o.result("d_e")["value"], 1.5);

    let o = run(&["dual", "--space", "m3", "--x", "a", "--y", "b"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(o.result("dual_distance")["value"], 3.0);
    assert_eq!(o.result("dual_distance_oracle")["value"], 3.0);
    let o = run(&["dual", "--space", "m3", "--x", "b"]);
    assert_eq!(o.result("dual_distance")["value"], 2.0);

    let o = run(&["adjoint", "--map", &fixture("swap.map.json"), "--then", &fixture("swap.map.json")]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(o.result("adjoint_norm")["value"], 2.0);
    assert_eq!(o.result("adjoint_norm_oracle")["value"], 2.0);
    assert_eq!(o.result("adjoint_matrix")["value"]["entries"], serde_json::json!([[0.0, 1.0], [1.0, 0.0]]));
}

#[test]
fn dilate_swap() {
    let o = run(&["dilate", "--map", &fixture("swap.map.json"), "--p", "2", "--s", "a,b", "--pairs", "20"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(o.result("dilated")["value"], serde_json::json!(["b", "a"]));
    assert_eq!(o.result("singleton_ratios")["value"], serde_json::json!([2.0, 0.5]));
    assert_eq!(o.report()["summary"]["checks"], 23);
}

#[test]
fn transfer_plane_fixtures() {
    let o = run(&["transfer", "--map", &fixture("plane4-bisector.map.json"), "--x1", "x1", "--x2", "x2"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(o.result("is_fixed_point")["value"], true);
    assert_eq!(o.result("vanishing_holds")["value"], true);
    let o = run(&["transfer", "--map", &fixture("plane4-x2-indicator.map.json"), "--x1", "x1", "--x2", "x2"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(o.result("is_fixed_point")["value"], false);

    let o = run(&["transfer", "--map", &fixture("m3-h.map.json"), "--x1", "a", "--x2", "b"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let o = run(&["transfer", "--map", &fixture("m3-h.map.json"), "--x1", "a", "--x2", "a"]);
    assert_eq!(o.code, 2);
}

#[test]
fn suite_is_deterministic() {
    let a = run(&["suite", "--seed", "0"]);
    let b = run(&["suite", "--seed", "0"]);
    assert_eq!(a.code, 0, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["suite", "--seed", "1", "--instances", "3"]);
    assert_eq!(c.code, 0, "{}", c.stderr);
    assert_ne!(a.report()["inputs_digest"], c.report()["inputs_digest"]);
}

#[test]
fn corrupted_phi_fails_with_witnesses() {
    let o = run(&["suite", "--config", &fixture("corrupted-phi.suite.json")]);
    assert_eq!(o.code, 1);
    let r = o.report();
    let failed: Vec<&Value> = r["checks"].as_array().unwrap().iter().filter(|c| c["status"] == "fail").collect();
    assert!(!failed.is_empty());
    for c in failed {
        assert!(c["property"].as_str().unwrap().starts_with("transfer.phi-isometry"));
        assert!(c["lhs"].is_number() && c["rhs"].is_number());
        assert!(c["witness"]["h"].is_array());
    }
}

#[test]
fn corpus_subcommand() {
    let o = run(&["corpus", "--name", "m3", "--name", "plane4"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(o.report()["summary"]["failed"], 0);
    assert_eq!(run(&["corpus", "--name", "nope"]).code, 2);
}

#[test]
fn binary_honours_tolerance_variable() {
    let bin = env!("CARGO_BIN_EXE_extlip");
    let out = Command::new(bin)
        .args(["dual", "--space", "m3", "--x", "a"])
        .env("EXTLIP_TOL", "0.25")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["checks"][0]["tolerance"], 0.25);

    let out = Command::new(bin)
        .args(["dual", "--space", "m3", "--x", "a"])
        .env("EXTLIP_TOL", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("EXTLIP_TOL"));
}
