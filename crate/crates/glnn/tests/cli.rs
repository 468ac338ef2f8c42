//! End-to-end checks of the binary: exit codes, JSON fields, determinism,
//! and the render output contract.

use serde_json::Value;
use std::process::{Command, Output};

fn glnn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glnn"))
        .args(args)
        .env_remove("GLNN_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON object")
}

#[test]
fn info_json_matches_library_values() {
    let out = glnn(&["info", "[2,1,0]", "--json"]);
    let v = json_of(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["weight"], serde_json::json!([2, 1, 0]));
    assert_eq!(v["sdim"], serde_json::json!(-6));
    assert_eq!(v["duality"]["kind"], "SD");
    assert_eq!(v["duality"]["pairing"], "odd");
    assert_eq!(v["duality"]["proper"], true);
    assert_eq!(v["group"]["family"], "Sp");
    assert_eq!(v["group"]["dim"], 6);
    assert_eq!(v["group"]["conditional"], false);
    assert_eq!(v["D"], 0);
    assert_eq!(v["ell"], 0);
    assert_eq!(v["depth"], 6);

    let out = glnn(&["info", "[6,6,1,1]", "--json"]);
    let v = json_of(&out);
    assert_eq!(v["duality"]["proper"], false);
    assert_eq!(v["group"]["family"], "GSO");
    assert_eq!(v["ell"], 15);

    let out = glnn(&["info", "[0,0,0,0]", "--json"]);
    let v = json_of(&out);
    assert_eq!(v["sdim"], 1);
    assert_eq!(v["ell"], 0);
    assert_eq!(v["group"]["family"], "Torus");
}

#[test]
fn info_human_output_has_legend() {
    let out = glnn(&["info", "[3,2,1,0]"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("group     SO(24)*"));
    assert!(text.contains("* conditional"));
}

#[test]
fn ds_examples() {
    let out = glnn(&["ds", "[7,7,4,2,2,2]", "--json"]);
    let v = json_of(&out);
    let s = v["summands"].as_array().unwrap();
    assert_eq!(s.len(), 2);
    assert_eq!(s[0]["weight"], serde_json::json!([7, 7, 4, 2, 2]));
    assert_eq!(s[0]["shift"], 0);
    assert_eq!(s[1]["weight"], serde_json::json!([7, 3, 1, 1, 1]));
    assert_eq!(s[1]["shift"], 1);

    let out = glnn(&["ds", "[1,0]", "--steps", "2", "--json"]);
    let v = json_of(&out);
    let s = v["summands"].as_array().unwrap();
    assert_eq!(s.len(), 2);
    for t in s {
        assert_eq!(t["weight"], serde_json::json!([]));
        assert_eq!(t["shift"], 1);
    }
}

#[test]
fn tensor_examples() {
    let out = glnn(&["tensor", "[2,1,0]", "[2,1,0]", "--json"]);
    let v = json_of(&out);
    assert_eq!(v["equivalent"], true);
    assert_eq!(v["superdim_total"], 36);
    let terms = v["terms"].as_array().unwrap();
    let dims: Vec<u64> = terms.iter().map(|t| t["superdim"].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![21, 14, 1]);

    let out = glnn(&["tensor", "[4,0]", "[2,0]", "--json"]);
    let v = json_of(&out);
    assert_eq!(v["equivalent"], false);
    assert_eq!(v["terms"][0]["superdim"], 4);
    assert_eq!(v["terms"][0]["label"], Value::Null);

    let out = glnn(&["tensor", "[3,0]", "[3,0]", "--json"]);
    let v = json_of(&out);
    let offsets: Vec<i64> =
        v["terms"].as_array().unwrap().iter().map(|t| t["berezin_offset"].as_i64().unwrap()).collect();
    assert_eq!(offsets, vec![2, 2]);
}

#[test]
fn enumerate_examples() {
    let out = glnn(&["enumerate", "4", "--json"]);
    let v = json_of(&out);
    assert_eq!(v["count"], 14);

    let out = glnn(&["enumerate", "5", "--sd-only", "--json"]);
    let v = json_of(&out);
    assert_eq!(v["count"], 10);
    let mut dims: Vec<i64> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["sdim"].as_i64().unwrap().abs())
        .collect();
    dims.sort_unstable();
    assert_eq!(dims, vec![1, 2, 6, 6, 12, 20, 24, 30, 40, 120]);

    let out = glnn(&["enumerate", "0", "--json"]);
    let v = json_of(&out);
    assert_eq!(v["count"], 1);

    let out = glnn(&["enumerate", "3", "--classes", "--json"]);
    let v = json_of(&out);
    assert_eq!(v["count"], 4);
    let fams: Vec<String> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["group"]["family"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(fams, vec!["Torus", "SL", "SL", "Sp"]);
}

#[test]
fn render_contract() {
    let out = glnn(&["render", "[3,2,1,0]"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert_eq!(text.lines().nth(2).unwrap().matches("\\_/").count(), 4);

    let out = glnn(&["render", "[0]"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\\_/"));

    let dir = std::env::temp_dir().join(format!("glnn-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("d.svg");
    let out = glnn(&["render", "[7,7,4,2,2,2]", "--format", "svg", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<path").count(), 6);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn byte_determinism() {
    for args in [
        vec!["info", "[6,6,1,1]", "--json"],
        vec!["tensor", "[2,1,0]", "[2,1,0]", "--json"],
        vec!["enumerate", "4", "--json"],
        vec!["render", "[7,7,4,2,2,2]", "--format", "svg"],
    ] {
        let a = glnn(&args);
        let b = glnn(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    // 2: unparseable weight, non-decreasing weight, rank mismatch, bad steps.
    assert_eq!(glnn(&["info", "[1,2,3]"]).status.code(), Some(2));
    assert_eq!(glnn(&["info", "oops"]).status.code(), Some(2));
    assert_eq!(glnn(&["tensor", "[1,0]", "[1,0,0]"]).status.code(), Some(2));
    assert_eq!(glnn(&["ds", "[1,0]", "--steps", "3"]).status.code(), Some(2));
    // 3: unwritable render target.
    let out = glnn(&["render", "[1,0]", "--output", "/nonexistent-dir/x.svg"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
}

#[test]
fn oversized_requests_fail_cleanly() {
    // A far-flung weight is analyzable but too wide to draw.
    let out = glnn(&["info", "[1000000000000,0]", "--json"]);
    let v = json_of(&out);
    assert_eq!(v["ell"], 999999999999i64);
    assert_eq!(glnn(&["render", "[1000000000000,0]"]).status.code(), Some(2));
    // A twelve-step staircase has superdimension 12!, far past the explicit
    // fusion bound.
    let out = glnn(&["tensor", "[11,10,9,8,7,6,5,4,3,2,1,0]", "[11,10,9,8,7,6,5,4,3,2,1,0]"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("too large"));
    // Superdimensions past the 128-bit range fail as input errors, not
    // with a backtrace.
    let staircase36: Vec<String> = (0..36).rev().map(|i| i.to_string()).collect();
    let out = glnn(&["info", &format!("[{}]", staircase36.join(","))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("128-bit"));
}

#[test]
fn cache_env_var_is_honored_and_harmless() {
    let dir = std::env::temp_dir().join(format!("glnn-cache-cli-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    let run = |envs: bool| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_glnn"));
        c.args(["tensor", "[2,1,0]", "[2,1,0]", "--json"]);
        if envs {
            c.env("GLNN_CACHE_DIR", &dir);
        } else {
            c.env_remove("GLNN_CACHE_DIR");
        }
        c.output().unwrap()
    };
    let cold = run(true);
    assert!(cold.status.success());
    assert!(dir.read_dir().map(|mut d| d.next().is_some()).unwrap_or(false), "cache file written");
    let warm = run(true);
    let off = run(false);
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(cold.stdout, off.stdout, "results identical with the cache disabled");
    std::fs::remove_dir_all(&dir).unwrap();
}
