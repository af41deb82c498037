use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use magrand_core::codec::deserialize;
use magrand_core::report::graph_id;
use serde_json::Value;

fn magrand(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_magrand"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn gen(dir: &Path, name: &str, extra: &[&str]) -> String {
    let out = path(dir, name);
    let mut args = vec!["gen", "-o", &out];
    args.extend_from_slice(extra);
    let o = magrand(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    out
}

#[test]
fn gen_then_analyze_produces_a_passing_report() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(
        dir.path(),
        "g.magc",
        &["--tau", "8,16", "--kind", "uniform-half", "--seed", "7"],
    );
    let report = path(dir.path(), "g.json");
    let o = magrand(&["analyze", &g, "-o", &report, "--expect-random"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let r: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    let mag = deserialize(&fs::read(&g).unwrap()).unwrap();
    assert_eq!(r["report_version"], 1);
    assert_eq!(r["graph_id"], graph_id(&mag));
    assert_eq!(r["signature"]["n_composite"], 128);
    assert_eq!(r["certificate"]["raw_len"], 8128);
    assert_eq!(r["topology"]["diameter"], 2);
    assert_eq!(r["config"]["c_deficiency"], 3.0);
    assert_eq!(r["config"]["c_degree"], 2.0);
    for (name, v) in r["corollary_verdicts"].as_object().unwrap() {
        assert_eq!(v["status"], "pass", "{name}");
        assert!(v.get("measured").is_some() && v.get("threshold").is_some());
    }
    assert_eq!(r["witness_verdicts"][0]["aspect"], 2);
    assert_eq!(r["temporal"]["witness_sweeps"][0]["failures"], 0);
}

#[test]
fn analyze_writes_to_stdout_without_output_flag() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(
        dir.path(),
        "g.magc",
        &["--tau", "6,6", "--kind", "complete", "--seed", "0"],
    );
    let o = magrand(&["analyze", &g]);
    assert_eq!(o.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["topology"]["diameter"], 1);
    assert_eq!(r["corollary_verdicts"]["rigidity"]["status"], "fail");
}

#[test]
fn expect_random_exits_one_on_planted_graph() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(
        dir.path(),
        "e.magc",
        &["--tau", "16,16", "--kind", "empty", "--seed", "0"],
    );
    let report = path(dir.path(), "e.json");
    let o = magrand(&["analyze", &g, "-o", &report, "--expect-random"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("log_randomness"));
    // the report is still written
    assert!(Path::new(&report).exists());
    assert_eq!(
        magrand(&["analyze", &g, "-o", &report]).status.code(),
        Some(0)
    );
}

#[test]
fn thresholds_are_configurable() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(
        dir.path(),
        "g.magc",
        &["--tau", "8,16", "--kind", "uniform-half", "--seed", "1"],
    );
    let o = magrand(&["analyze", &g, "--c-deficiency", "5.5", "--c-degree", "0.01"]);
    assert_eq!(o.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["config"]["c_deficiency"], 5.5);
    assert_eq!(
        r["corollary_verdicts"]["degree_concentration"]["status"],
        "fail"
    );
    assert_eq!(
        magrand(&["analyze", &g, "--c-deficiency", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        magrand(&["analyze", &g, "--c-degree", "-1"]).status.code(),
        Some(2)
    );
}

#[test]
fn witness_answers_a_query() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(
        dir.path(),
        "g.magc",
        &["--tau", "8,16", "--kind", "uniform-half", "--seed", "7"],
    );
    let o = magrand(&["witness", &g, "--u", "0,0", "--v", "3,9"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let w: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(w["edge_kind"], "transtemporal");
    let (a, b) = (
        w["edge"]["a"][1].as_u64().unwrap(),
        w["edge"]["b"][1].as_u64().unwrap(),
    );
    assert!(a.abs_diff(b) >= 2);
}

#[test]
fn witness_rejects_hypothesis_violation() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(
        dir.path(),
        "g.magc",
        &["--tau", "8,16", "--kind", "uniform-half", "--seed", "7"],
    );
    for (u, v) in [("0,3", "3,5"), ("0,3", "3,4"), ("1,9", "2,3")] {
        let o = magrand(&["witness", &g, "--u", u, "--v", v]);
        assert_eq!(o.status.code(), Some(2), "{u} {v}");
        assert!(stderr(&o).contains("hypothesis"), "{}", stderr(&o));
    }
}

#[test]
fn witness_without_path_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(
        dir.path(),
        "e.magc",
        &["--tau", "2,6", "--kind", "empty", "--seed", "0"],
    );
    let o = magrand(&["witness", &g, "--u", "0,0", "--v", "1,5"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen(
        dir.path(),
        "g.magc",
        &["--tau", "8,16", "--kind", "uniform-half", "--seed", "7"],
    );
    let bytes = fs::read(&g).unwrap();
    for cut in [10, 40, bytes.len() - 1] {
        let t = path(dir.path(), &format!("t{cut}.magc"));
        fs::write(&t, &bytes[..cut]).unwrap();
        let o = magrand(&["analyze", &t]);
        assert_eq!(o.status.code(), Some(2), "cut at {cut}");
        assert!(stderr(&o).contains("error"), "{}", stderr(&o));
    }
    let missing = path(dir.path(), "missing.magc");
    assert_eq!(magrand(&["analyze", &missing]).status.code(), Some(2));
    assert_eq!(magrand(&["analyze", &g, "--bogus"]).status.code(), Some(2));
    assert_eq!(
        magrand(&["witness", &g, "--u", "0,x", "--v", "3,9"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        magrand(&["witness", &g, "--u", "0,0", "--v", "3,99"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(magrand(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(magrand(&["--help"]).status.code(), Some(0));
}

#[test]
fn gen_validates_flags() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "x.magc");
    for args in [
        vec![
            "gen", "--tau", "8,16", "--kind", "banded", "--seed", "0", "-o", &out,
        ],
        vec![
            "gen",
            "--tau",
            "8,16",
            "--kind",
            "banded",
            "--window",
            "1",
            "--time-aspect",
            "none",
            "--seed",
            "0",
            "-o",
            &out,
        ],
        vec![
            "gen", "--tau", "8,16", "--kind", "periodic", "--period", "0", "--seed", "0", "-o",
            &out,
        ],
        vec![
            "gen", "--tau", "8,0", "--kind", "empty", "--seed", "0", "-o", &out,
        ],
        vec![
            "gen",
            "--tau",
            "8,16",
            "--kind",
            "empty",
            "--time-aspect",
            "3",
            "--seed",
            "0",
            "-o",
            &out,
        ],
        vec![
            "gen", "--tau", "300,300", "--kind", "empty", "--seed", "0", "-o", &out,
        ],
    ] {
        assert_eq!(magrand(&args).status.code(), Some(2), "{args:?}");
    }
    assert!(!Path::new(&out).exists());
}

#[test]
fn payload_formats_describe_the_same_graph() {
    let dir = tempfile::tempdir().unwrap();
    let flags = [
        "--tau", "4,4,3", "--kind", "banded", "--window", "1", "--seed", "9",
    ];
    let bits = gen(dir.path(), "b.magc", &flags);
    let mut with_edges = flags.to_vec();
    with_edges.extend(["--payload", "edges"]);
    let edges = gen(dir.path(), "e.magc", &with_edges);
    assert_ne!(fs::read(&bits).unwrap(), fs::read(&edges).unwrap());
    let (x, y) = (
        magrand(&["analyze", &bits]).stdout,
        magrand(&["analyze", &edges]).stdout,
    );
    assert_eq!(x, y);
}

#[test]
fn gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let flags = [
        "--tau", "8,16", "--kind", "periodic", "--period", "13", "--seed", "3",
    ];
    let a = gen(dir.path(), "a.magc", &flags);
    let b = gen(dir.path(), "b.magc", &flags);
    assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
}

#[test]
fn batch_writes_reports_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "batch");
    let o = magrand(&[
        "batch",
        "--tau",
        "8,16",
        "--kind",
        "uniform-half",
        "--seed",
        "5",
        "--seeds",
        "4",
        "-o",
        &out,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for s in 5..9 {
        let g = deserialize(&fs::read(Path::new(&out).join(format!("seed-{s}.magc"))).unwrap())
            .unwrap();
        let r: Value = serde_json::from_slice(
            &fs::read(Path::new(&out).join(format!("seed-{s}.json"))).unwrap(),
        )
        .unwrap();
        assert_eq!(r["graph_id"], graph_id(&g));
        assert_eq!(r["config"]["generator"]["seed"], s);
        assert_eq!(r["config"]["generator"]["kind"], "uniform-half");
    }
    let summary: Value =
        serde_json::from_slice(&fs::read(Path::new(&out).join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["n_reports"], 4);
    assert_eq!(summary["seeds"], serde_json::json!([5, 6, 7, 8]));
    assert_eq!(summary["verdicts"]["diameter"]["total"], 4);

    let o = magrand(&[
        "batch",
        "--tau",
        "8,16",
        "--kind",
        "empty",
        "--seed",
        "0",
        "--seeds",
        "2",
        "--expect-random",
        "-o",
        &out,
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(
        magrand(&[
            "batch", "--tau", "8,16", "--kind", "empty", "--seed", "0", "--seeds", "0", "-o", &out
        ])
        .status
        .code(),
        Some(2)
    );
}
