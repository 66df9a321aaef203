use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn zsf(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_zsf"));
    cmd.args(args);
    match cache {
        Some(dir) => cmd.env("ZSF_CACHE_DIR", dir),
        None => cmd.arg("--no-cache"),
    };
    cmd.output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn invariant_values_and_exit_codes() {
    let o = zsf(&["invariant", "c0", "3x3"], None);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["value"], 5);

    let o = zsf(&["invariant", "m", "6x6"], None);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["value"], 18);

    let o = zsf(&["invariant", "c0", "12x60"], None);
    assert_eq!(code(&o), 2);
    let v = json(&o);
    assert_eq!(v["partial"]["reason"], "bound_exceeded");
    assert_eq!(v["partial"]["bound"], "lower");
    assert_eq!(v["value"], 360);

    let o = zsf(&["invariant", "f", "3", "--k", "2"], None);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["value"], "infinity");

    let o = zsf(&["invariant", "D", "2x4"], None);
    assert_eq!(json(&o)["value"], 5);
}

#[test]
fn usage_errors_leave_stdout_empty() {
    for args in [
        &["invariant", "c0", "3x4"][..],
        &["invariant", "c0", "abc"],
        &["invariant", "nope", "3"],
        &["invariant", "f", "5"],
        &["verify", "L9.9"],
        &["table", "c0", "weird:1..2"],
        &["frobnicate"],
    ] {
        let o = zsf(args, None);
        assert_eq!(code(&o), 1, "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn timeouts_give_partial_results() {
    let o = zsf(
        &[
            "invariant",
            "c0",
            "4x8",
            "--timeout-sec",
            "0",
            "--max-order",
            "64",
        ],
        None,
    );
    assert_eq!(code(&o), 2);
    let v = json(&o);
    assert_eq!(v["partial"]["reason"], "timeout");
    assert_eq!(v["partial"]["bound"], "lower");
}

#[test]
fn csv_format() {
    let o = zsf(&["invariant", "c0", "2x2", "--format", "csv"], None);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "kind,group,k,value,method,witness,nodes_visited,partial"
    );
    assert!(lines.next().unwrap().starts_with("c0,2x2,,3,exhaustive,"));
}

#[test]
fn certificates_check_out() {
    let dir = tempfile::tempdir().unwrap();
    let o = zsf(&["invariant", "c0", "2x4"], None);
    let cert = json(&o)["witness"].clone();
    let good = dir.path().join("good.json");
    std::fs::write(&good, serde_json::to_string_pretty(&cert).unwrap()).unwrap();
    let o = zsf(&["check-certificate", good.to_str().unwrap()], None);
    assert_eq!(code(&o), 0);

    let mut bad = cert.clone();
    let text = bad["payload"]["sequence"].as_str().unwrap().to_string();
    bad["payload"]["sequence"] = Value::String(format!("{text},(1,1)^1"));
    let bad_path = dir.path().join("bad.json");
    std::fs::write(&bad_path, serde_json::to_string(&bad).unwrap()).unwrap();
    assert_eq!(
        code(&zsf(
            &["check-certificate", bad_path.to_str().unwrap()],
            None
        )),
        3
    );

    let full = serde_json::to_string(&cert).unwrap();
    let cut = dir.path().join("cut.json");
    std::fs::write(&cut, &full[..full.len() / 2]).unwrap();
    assert_eq!(
        code(&zsf(&["check-certificate", cut.to_str().unwrap()], None)),
        1
    );

    let mut v2 = cert.clone();
    v2["schema_version"] = 2.into();
    let v2_path = dir.path().join("v2.json");
    std::fs::write(&v2_path, serde_json::to_string(&v2).unwrap()).unwrap();
    let o = zsf(&["check-certificate", v2_path.to_str().unwrap()], None);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("schema"));

    let missing = dir.path().join("missing.json");
    assert_eq!(
        code(&zsf(
            &["check-certificate", missing.to_str().unwrap()],
            None
        )),
        1
    );
}

#[test]
fn verify_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = zsf(&["verify", "L3.4", "--max-order", "20", "--out", out], None);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["lemma_id"], "L3.4");
    assert!(v["cases_checked"].as_u64().unwrap() > 0);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
    let on_disk: Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("report-L3.4.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(on_disk, v);
}

#[test]
fn verify_all_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let run = |dir: &Path, jobs: &str| {
        zsf(
            &[
                "verify",
                "all",
                "--seed",
                "42",
                "--jobs",
                jobs,
                "--out",
                dir.to_str().unwrap(),
            ],
            None,
        )
    };
    let (x, y) = (run(a.path(), "1"), run(b.path(), "2"));
    assert_eq!(code(&x), 0, "{}", String::from_utf8_lossy(&x.stderr));
    assert_eq!(x.stdout, y.stdout);
    assert_eq!(json(&x).as_array().unwrap().len(), 8);
    for entry in std::fs::read_dir(a.path()).unwrap() {
        let p = entry.unwrap().path();
        let q = b.path().join(p.file_name().unwrap());
        assert_eq!(std::fs::read(&p).unwrap(), std::fs::read(&q).unwrap());
    }
}

#[test]
fn tables() {
    let o = zsf(&["table", "c0", "cyclic:2..10", "--format", "csv"], None);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r.ends_with(",true,exact")));

    let o = zsf(&["table", "c0", "rank2:..20"], None);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r["match"] == true));

    let o = zsf(&["table", "c0", ""], None);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o), Value::Array(vec![]));

    let o = zsf(&["table", "c0", "3x3,12x60", "--format", "csv"], None);
    assert_eq!(code(&o), 2);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().last().unwrap().ends_with(",,bound_exceeded"));
}

#[test]
fn cache_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["invariant", "c0", "3x3"][..],
        &["invariant", "D", "3x6"],
        &["invariant", "f", "8", "--k", "3"],
        &["table", "c0", "all:..12"],
    ] {
        let fresh = zsf(args, None);
        let first = zsf(args, Some(dir.path()));
        let hit = zsf(args, Some(dir.path()));
        assert_eq!(fresh.stdout, first.stdout, "{args:?}");
        assert_eq!(fresh.stdout, hit.stdout, "{args:?}");
        assert_eq!(code(&fresh), code(&hit));
    }
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
}
