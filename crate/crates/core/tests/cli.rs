//! End-to-end runs of the `qk` binary.

use std::process::{Command, Output};

use qk_comin::table::{from_json, read_jsonl};

fn qk(cache: &std::path::Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qk")).args(args).env("QK_CACHE_DIR", cache).output().expect("qk runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

#[test]
fn product_of_point_and_identity_on_p1() {
    let dir = tempfile::tempdir().unwrap();
    let out = qk(dir.path(), &["product", "--space", "gr:1,2", "--u", "1", "--v", "", "--v-basis", "plain"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "{\"space\":\"gr:1,2\",\"equivariant\":false,\"u\":\"1\",\"v\":\"\",\"v_basis\":\"plain\",\"terms\":[{\"w\":\"\",\"d\":1,\"N\":\"1\"}],\"sum_check\":\"1\"}\n"
    );
}

#[test]
fn equivariant_product_reads_back() {
    let dir = tempfile::tempdir().unwrap();
    let out = qk(dir.path(), &["--equivariant", "--oracle", "product", "--space", "gr:2,4", "--u", "1", "--v", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let t = from_json(stdout(&out).trim()).unwrap();
    assert!(t.equivariant);
    assert!(t.sum_check_consistent());
    assert!(t.sum_check().is_one());
}

#[test]
fn dist_and_neighborhood_with_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let out = qk(dir.path(), &["--oracle", "dist", "--space", "gr:2,4", "--u", "2,2", "--v", ""]);
    assert_eq!(stdout(&out), "{\"dist\":2}\n");
    let out = qk(dir.path(), &["--oracle", "neighborhood", "--space", "gr:2,5", "--w", "3,1", "--d", "1"]);
    assert_eq!(stdout(&out), "{\"w_minus_d\":\"\"}\n");
    let out = qk(dir.path(), &["--oracle", "neighborhood", "--space", "gr:3,6", "--w", "3,2,1", "--d", "1"]);
    assert_eq!(stdout(&out), "{\"w_minus_d\":\"1\"}\n");
}

#[test]
fn verify_passes_and_reports_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let out = qk(dir.path(), &["--oracle", "verify", "--space", "gr:2,4"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "PASS pairs=36\n");
    let out = qk(dir.path(), &["verify", "--space", "gr:2,4", "--theorem", "2"]);
    assert_eq!(stdout(&out), "PASS pairs=36\n");
}

#[test]
fn table_is_complete_and_ordered() {
    let dir = tempfile::tempdir().unwrap();
    let out = qk(dir.path(), &["table", "--space", "gr:2,5", "--v-basis", "plain"]);
    assert!(out.status.success());
    let rows = read_jsonl(&stdout(&out)).unwrap();
    assert_eq!(rows.len(), 100);
    assert!(rows.iter().all(|r| r.sum_check_consistent() && r.sum_check().specialize_ones() == 1.into()));
    let sizes: Vec<usize> = rows.iter().step_by(10).map(|r| {
        let t = &r.table;
        qk_comin::weyl::minrep_to_partition(&t.u, t.m).unwrap().size()
    }).collect();
    assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("t.jsonl");
    let direct = qk(dir.path(), &["table", "--space", "gr:1,3"]);
    let out = qk(dir.path(), &["table", "--space", "gr:1,3", "--out", file.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&file).unwrap(), direct.stdout);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // over budget
    assert_eq!(qk(dir.path(), &["table", "--space", "gr:4,9"]).status.code(), Some(2));
    assert_eq!(qk(dir.path(), &["--equivariant", "table", "--space", "gr:3,6"]).status.code(), Some(2));
    // malformed input
    assert_eq!(qk(dir.path(), &["product", "--space", "gr:2,4", "--u", "3", "--v", ""]).status.code(), Some(2));
    assert_eq!(qk(dir.path(), &["product", "--space", "gr2,4", "--u", "", "--v", ""]).status.code(), Some(2));
    assert_eq!(qk(dir.path(), &["frobnicate"]).status.code(), Some(2));
    let out = qk(dir.path(), &["dist", "--space", "gr:2,4", "--u", "1", "--v", "9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn cache_commands() {
    let dir = tempfile::tempdir().unwrap();
    let path = qk(dir.path(), &["cache", "path"]);
    assert_eq!(stdout(&path).trim(), dir.path().to_str().unwrap());
    assert!(qk(dir.path(), &["table", "--space", "gr:2,4"]).status.success());
    let stats: serde_json::Value = serde_json::from_str(&stdout(&qk(dir.path(), &["cache", "stats"]))).unwrap();
    assert!(stats["files"].as_u64().unwrap() > 0);
    let cleared = stdout(&qk(dir.path(), &["cache", "clear"]));
    assert_eq!(cleared, format!("removed {}\n", stats["files"]));
    let stats: serde_json::Value = serde_json::from_str(&stdout(&qk(dir.path(), &["cache", "stats"]))).unwrap();
    assert_eq!(stats["files"], 0);
}
