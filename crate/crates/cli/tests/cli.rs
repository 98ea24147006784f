use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn zstruct(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zstruct"))
        .args(args)
        .current_dir(dir)
        .env_remove("ZSTRUCT_MAX_ELEMENTS")
        .env_remove("ZSTRUCT_MAX_STATES")
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

const PENTAGON: &str =
    r#"{"generators":["a","b","c","d","e"],"commuting":[[0,2],[0,3],[1,3],[1,4],[2,4]]}"#;

#[test]
fn relators_of_bs12() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = zstruct(&["verify-relators", "--bs", "1,2", "--out", out.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["pass"], true);
    assert_eq!(r["result"]["relators"].as_array().unwrap().len(), 1);
    assert_eq!(r["provenance"]["config_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn nullity_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("n{k}.json"));
        let csv = dir.path().join(format!("n{k}.csv"));
        let o = zstruct(
            &["nullity", "--wordlen", "8", "--out", out.to_str().unwrap(), "--csv", csv.to_str().unwrap()],
            dir.path(),
        );
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        reports.push((fs::read(&out).unwrap(), fs::read(&csv).unwrap()));
    }
    assert_eq!(reports[0], reports[1]);
    let header = String::from_utf8(reports[0].1.clone()).unwrap();
    assert!(header.starts_with("rep,wordlen,tree_dist,tree_diam,fiber_diam,visual_diam\n"));
}

#[test]
fn uncompressed_nullity_fails_with_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("n.json");
    let ce = dir.path().join("ce.json");
    let o = zstruct(
        &["nullity", "--compress", "none", "--out", out.to_str().unwrap(), "--counterexample", ce.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&out)["pass"], false);
    assert!(json(&ce)["violations"].as_u64().unwrap() > 0);
}

#[test]
fn log_compressed_nullity_certifies_at_length_twelve() {
    let dir = tempfile::tempdir().unwrap();
    let o = zstruct(&["nullity", "--compress", "log", "--wordlen", "12"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["certified_at_scale"]["wordlen"], 12);
    assert_eq!(r["certified_at_scale"]["net_resolution"], 4);
}

#[test]
fn malformed_graph_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("bad.json");
    fs::write(&g, "{\"vertices\": [").unwrap();
    let o = zstruct(&["verify-relators", "--input", g.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
}

#[test]
fn ball_guard_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_zstruct"))
        .args(["nullity"])
        .current_dir(dir.path())
        .env("ZSTRUCT_MAX_ELEMENTS", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn growth_of_the_pentagon() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.json");
    fs::write(&p, PENTAGON).unwrap();
    let o = zstruct(&["growth", "--racg", p.to_str().unwrap(), "--n", "5"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    let sphere: Vec<u64> = serde_json::from_value(r["result"]["table"]["sphere"].clone()).unwrap();
    assert_eq!(sphere, [1, 5, 15, 40, 105, 275]);

    let o = Command::new(env!("CARGO_BIN_EXE_zstruct"))
        .args(["growth", "--racg", p.to_str().unwrap()])
        .env("ZSTRUCT_MAX_STATES", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn davis_index_default() {
    let dir = tempfile::tempdir().unwrap();
    let o = zstruct(&["davis"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["result"]["n"], 7);
}

#[test]
fn t4_witness() {
    let dir = tempfile::tempdir().unwrap();
    let o = zstruct(&["witness", "t4", "--phi", "log", "--c", "1"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["result"]["index"]["n"], 5);

    let o = zstruct(&["witness", "t4", "--phi", "pow:1:0.9"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(dir.path().join("counterexample.json").exists());
}

#[test]
fn boundary_and_cover_pass_by_default() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in ["boundary", "cover"] {
        let o = zstruct(&[cmd], dir.path());
        assert_eq!(o.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn unknown_flag_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(zstruct(&["davis", "--nope"], dir.path()).status.code(), Some(1));
    assert_eq!(zstruct(&["--help"], dir.path()).status.code(), Some(0));
}
