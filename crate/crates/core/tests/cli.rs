use std::path::Path;
use std::process::{Command, Output};

fn ftoracle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ftoracle")).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn build_rpc_reports_params() {
    let dir = tempfile::tempdir().unwrap();
    let edges: String = (0..1000).map(|i| format!("{} {}\n", i, (i + 1) % 1000)).collect();
    let g = write(dir.path(), "ring.edges", &edges);
    let out = dir.path().join("ring.rpc");
    let o = ftoracle(&["build", "--kind", "rpc", "--f", "1", "--L", "16", "--c", "4", "--seed", "42", "--out", out.to_str().unwrap(), &g]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let stats = json(&o);
    assert_eq!((stats["h"].as_u64(), stats["alpha"].as_u64(), stats["K"].as_u64()), (Some(2), Some(4), Some(70)));
    assert!(out.exists());
    let sidecar: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("ring.rpc.json")).unwrap()).unwrap();
    assert_eq!(sidecar["format"], "RPC1");
}

#[test]
fn dso_build_and_query() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "tri.edges", "0 1\n1 2\n2 0\n");
    let out = dir.path().join("tri.dso");
    let out_s = out.to_str().unwrap();
    let o = ftoracle(&["build", "--kind", "dso", "--f", "1", "--L", "2", "--out", out_s, &g]);
    assert_eq!(o.status.code(), Some(0));
    let stats = json(&o);
    let k = stats["K"].as_u64().unwrap();
    let a = stats["alpha"].as_u64().unwrap();
    let h = stats["h"].as_u64().unwrap() as u32;
    assert_eq!(stats["sidecar"]["tables"]["count"].as_u64().unwrap(), k * a.pow(h));
    let before = std::fs::read(&out).unwrap();

    let q = ftoracle(&["query", "--oracle", out_s, "--s", "0", "--t", "1"]);
    assert_eq!(q.status.code(), Some(0));
    assert_eq!(json(&q)["distance"].as_f64(), Some(1.0));

    let q = ftoracle(&["query", "--oracle", out_s, "--graph", &g, "--fail", "e:0-1", "--s", "0", "--t", "1"]);
    assert_eq!(q.status.code(), Some(0));
    assert_eq!(json(&q)["distance"].as_f64(), Some(2.0));

    let q = ftoracle(&["query", "--oracle", out_s, "--fail", "eid:0", "--fail", "eid:1", "--s", "0", "--t", "1"]);
    assert_eq!(q.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&q.stderr).contains("at most 1"));

    let q = ftoracle(&["query", "--oracle", out_s, "--fail", "e:0-1", "--s", "0", "--t", "1"]);
    assert_eq!(q.status.code(), Some(2));

    let ff = write(dir.path(), "f.json", "[\"eid:0\"]");
    let q = ftoracle(&["query", "--oracle", out_s, "--fail-file", &ff, "--s", "0", "--t", "1"]);
    assert_eq!(json(&q)["distance"].as_f64(), Some(2.0));
    assert_eq!(std::fs::read(&out).unwrap(), before);
}

#[test]
fn motif_query_not_found() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "p5.edges", "0 1\n1 2\n2 3\n3 4\n");
    let out = dir.path().join("p5.mtf");
    let out_s = out.to_str().unwrap();
    let o = ftoracle(&["build", "--kind", "motif", "--motif", "path", "--k", "3", "--f", "1", "--out", out_s, &g]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let q = ftoracle(&["query", "--oracle", out_s, "--graph", &g, "--fail", "e:1-2"]);
    assert_eq!(q.status.code(), Some(1));
    assert_eq!(json(&q)["found"], false);
    let q = ftoracle(&["query", "--oracle", out_s]);
    assert_eq!(q.status.code(), Some(0));
    assert_eq!(json(&q)["edges"].as_array().unwrap().len(), 3);
}

#[test]
fn error_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x");
    let out_s = out.to_str().unwrap();
    assert_eq!(ftoracle(&["build", "--kind", "rpc", "--L", "4", "--out", out_s, "/nonexistent.edges"]).status.code(), Some(3));
    let bad = write(dir.path(), "bad.edges", "0 0\n");
    assert_eq!(ftoracle(&["build", "--kind", "rpc", "--L", "4", "--out", out_s, &bad]).status.code(), Some(3));
    let g = write(dir.path(), "c.edges", "0 1\n1 2\n2 0\n");
    assert_eq!(ftoracle(&["build", "--kind", "rpc", "--f", "5", "--L", "4", "--out", out_s, &g]).status.code(), Some(2));
    assert_eq!(ftoracle(&["build", "--kind", "dso", "--L", "2", "--max-bytes", "10", "--out", out_s, &g]).status.code(), Some(4));
    assert_eq!(ftoracle(&["build", "--kind", "nope", "--out", out_s, &g]).status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn verify_and_bench() {
    let o = ftoracle(&["verify", "--kind", "dso", "--generator", "gnp:14:0.3:3", "--f", "1", "--L", "4", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["trials"], 0);
    let o = ftoracle(&["verify", "--kind", "dso", "--generator", "gnp:14:0.3:3", "--f", "1", "--L", "4", "--trials", "40"]);
    assert_eq!(o.status.code(), Some(0));
    let o = ftoracle(&["verify", "--kind", "motif", "--generator", "petersen", "--k", "3", "--c", "1", "--trials", "10", "--format", "table"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("pass"));
    let o = ftoracle(&["bench", "--f", "2", "--L", "8", "--queries", "5", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&o.stdout).lines().count(), 6);
}

#[test]
fn verify_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "cfg.json",
        r#"{"builder": {"oracle": "rpc", "graph": {"kind": "cycle", "n": 8}, "f": 1, "L": 4, "motif": null, "c": 4.0, "seed": 42, "mode": "edges"},
            "trial": {"trials": 30, "seed": 1, "tolerance": 0.99}}"#,
    );
    let o = ftoracle(&["verify", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(json(&o)["trials"], 30);
}
