use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use wedgekit_cli::input::{CliError, EXIT_INPUT, EXIT_INVARIANT};
use wedgekit_cli::reports::Report;

fn wedgekit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wedgekit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn structured(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "structured"];
    full.extend_from_slice(args);
    let o = wedgekit(&full);
    let v = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(&o)));
    (o.status.code().unwrap(), v)
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn e8_graph_check() {
    let o = wedgekit(&["graph", "check", "fixtures/E8"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("negative definite: true"));
    assert!(text.contains("det: 1\n"));
    assert!(text.contains("M^-1 entries: all negative"));

    let (code, v) = structured(&["graph", "check", "fixtures/E8"]);
    assert_eq!(code, 0);
    assert_eq!(v["report"], "graph");
    assert_eq!(v["determinant"], "1");
    assert_eq!(v["inverse_all_negative"], true);
    assert_eq!(v["intersection_matrix"].as_array().unwrap().len(), 8);
}

#[test]
fn chain2_obstruction_is_not_ruled_out() {
    let (code, v) = structured(&["adj", "obstruct", "chain2", "0", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"]["status"], "NOT_RULED_OUT");
    assert_eq!(v["adjacency"], "N_{F_1} ⊂ N_{F_0}");
}

#[test]
fn ruled_out_reports_carry_witnesses() {
    let (_, v) = structured(&["adj", "obstruct", "chain2", "1", "0"]);
    assert_eq!(v["verdict"]["status"], "RULED_OUT");
    let w = &v["verdict"]["witness"];
    assert_eq!(w["kind"], "curvette");
    assert!(w["polynomial"].is_string());

    let (_, v) = structured(&["adj", "obstruct", "A2", "--returns", "0,1"]);
    assert_eq!(v["report"], "returns");
    assert_eq!(v["a"], serde_json::json!(["1/3", "-1/3"]));
    assert_eq!(v["verdict"]["witness"]["kind"], "solution");
    assert_eq!(v["verdict"]["witness"]["negative"], serde_json::json!([1]));

    let (_, v) = structured(&["adj", "table", "satellite3"]);
    for entry in v["entries"].as_array().unwrap() {
        if entry["verdict"]["status"] == "RULED_OUT" {
            assert!(entry["verdict"]["witness"].is_object());
        }
    }
}

#[test]
fn a1_euler_certificate() {
    let o = wedgekit(&["euler", "bound", "fixtures/A1", "--coeffs", "1", "--attach", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("bound: 0\n"));
    assert!(text.contains("certificate: issued"));

    let (_, v) = structured(&["euler", "bound", "fixtures/A1", "--coeffs", "1", "--attach", "0"]);
    assert_eq!(v["certificate"]["bound"], 0);
    assert_eq!(v["certificate"]["certified"], true);
}

#[test]
fn structured_output_roundtrips() {
    let dir = tempfile::tempdir().unwrap();
    let dfd = write(
        dir.path(),
        "model.json",
        r#"{"version":1,"cluster":"chain2","special":1,"c":[0,0],"d":[0,1]}"#,
    );
    let kb = dir.path().join("kb.jsonl").display().to_string();
    let runs: Vec<Vec<&str>> = vec![
        vec!["graph", "check", "D5"],
        vec!["cluster", "build", "satellite3"],
        vec!["val", "compare", "two_directions", "1", "2"],
        vec!["val", "ord", "chain2", "1", "--poly", "y^2 - x^3"],
        vec!["adj", "obstruct", "two_directions", "1", "2"],
        vec!["adj", "obstruct", "A1", "--returns", "0"],
        vec!["adj", "table", "two_directions_plus"],
        vec!["euler", "bound", "E6", "--coeffs", "1,1,1,1,1,1", "--attach", "0"],
        vec!["dfd", "check", &dfd, "--minimal-target"],
        vec!["pair", "canon", "satellite3", "0", "2", "--kb", &kb],
        vec!["pair", "canon", "A3"],
    ];
    for args in runs {
        let mut full = vec!["--format", "structured"];
        full.extend_from_slice(&args);
        let o = wedgekit(&full);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        let text = stdout(&o);
        let report: Report = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        let again = serde_json::to_string_pretty(&report).unwrap();
        assert_eq!(again.trim_end(), text.trim_end(), "{args:?}");
    }
}

#[test]
fn reports_echo_matrices() {
    let (_, v) = structured(&["val", "ord", "chain2", "1", "--poly", "y - x^2"]);
    assert_eq!(v["intersection_matrix"], serde_json::json!([["-2", "1"], ["1", "-1"]]));
    assert_eq!(v["inverse"], serde_json::json!([["-1", "-1"], ["-1", "-2"]]));
    assert_eq!(v["ord"], 2);
}

#[test]
fn malformed_documents_exit_2_with_locations() {
    let dir = tempfile::tempdir().unwrap();
    let looped = write(
        dir.path(),
        "loop.json",
        r#"{"version":1,"vertices":[{"id":0,"self_int":-2}],"edges":[[0,0]]}"#,
    );
    let o = wedgekit(&["graph", "check", &looped]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("$.edges[0]"), "{err}");
    assert!(err.contains("loop"), "{err}");

    let broken = write(dir.path(), "broken.json", "{\"version\":1,\n \"points\": [,]}");
    let (code, v) = structured(&["cluster", "build", &broken]);
    assert_eq!(code, 2);
    assert_eq!(v["diagnostics"][0]["line"], 2);

    let (code, v) = structured(&["validate", "cluster", &write(dir.path(), "p.json", r#"{"version":1,"points":[{},{"parent":1}]}"#)]);
    assert_eq!(code, 2);
    assert_eq!(v["diagnostics"][0]["path"], "$.points[1].parent");

    let (code, v) = structured(&["validate", "graph", &write(dir.path(), "v.json", r#"{"version":9,"vertices":[],"edges":[]}"#)]);
    assert_eq!(code, 2);
    assert_eq!(v["diagnostics"][0]["path"], "$.version");

    let good = write(dir.path(), "good.json", r#"{"version":1,"points":[{},{"parent":0}]}"#);
    let o = wedgekit(&["validate", "cluster", &good]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with(": ok\n"));
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(wedgekit(&["graph", "check", "no_such_thing"]).status.code(), Some(2));
    assert_eq!(wedgekit(&["val", "compare", "chain2", "0", "7"]).status.code(), Some(2));
    assert_eq!(wedgekit(&["adj", "obstruct", "chain2"]).status.code(), Some(2));
    assert_eq!(wedgekit(&["euler", "bound", "A2", "--coeffs", "0,1", "--attach", "0"]).status.code(), Some(2));
    assert_eq!(wedgekit(&["val", "ord", "A3", "0", "--poly", "x"]).status.code(), Some(2));
}

#[test]
fn invariant_errors_map_to_exit_3() {
    let e: CliError = wedgekit::Error::Invariant("M differs from -P^T P".into()).into();
    assert_eq!(e.code, EXIT_INVARIANT);
    let e: CliError = wedgekit::Error::InvalidInput("bad".into()).into();
    assert_eq!(e.code, EXIT_INPUT);
}

#[test]
fn dot_export() {
    let o = wedgekit(&["graph", "check", "D4", "--dot"]);
    let text = stdout(&o);
    assert!(text.starts_with("graph"));
    assert_eq!(text.matches(" -- ").count(), 3);
}

#[test]
fn kb_store_and_lookup() {
    let dir = tempfile::tempdir().unwrap();
    let kb = dir.path().join("verdicts.jsonl");
    let kb_s = kb.display().to_string();

    let (code, first) = structured(&["pair", "canon", "chain2", "1", "0", "--kb", &kb_s]);
    assert_eq!(code, 0);
    assert_eq!(first["kb"]["hit"], false);
    assert_eq!(first["kb"]["outcome"], "inserted");

    let (_, second) = structured(&["pair", "canon", "chain2", "1", "0", "--kb", &kb_s]);
    assert_eq!(second["kb"]["hit"], true);
    assert_eq!(second["kb"]["stored"], "RULED_OUT");
    assert_eq!(second["kb"]["outcome"], "already_present");
    assert_eq!(second["canonical_key"], first["canonical_key"]);

    let lines = fs::read_to_string(&kb).unwrap();
    assert_eq!(lines.lines().count(), 1);

    fs::write(&kb, "not json\n").unwrap();
    let o = wedgekit(&["pair", "canon", "chain2", "1", "0", "--kb", &kb_s]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains(":1:"));
}
