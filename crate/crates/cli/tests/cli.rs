use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lpattack_core::fixtures;
use lpattack_core::io::{
    annotations_to_string, debates_to_string, save_annotations, save_debates, ANNOTATIONS_SCHEMA, DEBATES_SCHEMA,
    REPORT_SCHEMA,
};
use lpattack_core::model::RelationKind;
use serde_json::Value;

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpattack")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn report_schema() -> jsonschema::Validator {
    jsonschema::validator_for(&serde_json::from_str(REPORT_SCHEMA).unwrap()).unwrap()
}

#[test]
fn bundled_data_matches_fixtures() {
    let (debates, a, b) = fixtures::agreement_corpus();
    let read = |rel: &str| std::fs::read_to_string(data(rel)).unwrap();
    assert_eq!(read("synthetic/debates.json"), debates_to_string(&debates));
    assert_eq!(read("synthetic/annotator_a.json"), annotations_to_string(&a).unwrap());
    assert_eq!(read("synthetic/annotator_b.json"), annotations_to_string(&b).unwrap());
    let (_, fig1) = fixtures::fig1();
    assert!(read("fig1/annotations.json").contains(&fig1.nodes[1].span_ref().unwrap().text));
}

#[test]
fn bundled_data_matches_file_schemas() {
    let check = |schema: &str, rel: &str| {
        let v = jsonschema::validator_for(&serde_json::from_str(schema).unwrap()).unwrap();
        let doc: Value = serde_json::from_str(&std::fs::read_to_string(data(rel)).unwrap()).unwrap();
        let errors: Vec<String> = v.iter_errors(&doc).map(|e| format!("{}: {e}", e.instance_path)).collect();
        assert!(errors.is_empty(), "{rel}: {errors:?}");
    };
    for rel in ["fig1/debates.json", "synthetic/debates.json"] {
        check(DEBATES_SCHEMA, rel);
    }
    for rel in ["fig1/annotations.json", "synthetic/annotator_a.json", "synthetic/annotator_b.json"] {
        check(ANNOTATIONS_SCHEMA, rel);
    }
}

#[test]
fn validate_fig1_corpus_exits_zero() {
    let o = run(&["validate", "--debates", s(&data("fig1/debates.json")), "--annotations", s(&data("fig1/annotations.json"))]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("3 annotations, 0 failed"));

    // two of the bundled examples carry polarity warnings
    let o = run(&[
        "validate",
        "--strict",
        "--debates",
        s(&data("fig1/debates.json")),
        "--annotations",
        s(&data("fig1/annotations.json")),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn validate_failures_exit_one_and_io_errors_two() {
    let dir = tempfile::tempdir().unwrap();
    let (debate, mut ann) = fixtures::fig1();
    ann.relations.retain(|r| r.kind != RelationKind::Nullify);
    let debates = dir.path().join("d.json");
    let anns = dir.path().join("a.json");
    save_debates(&debates, &[debate]).unwrap();
    save_annotations(&anns, &[ann]).unwrap();

    let o = run(&["validate", "--debates", s(&debates), "--annotations", s(&anns)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("E_ATTACK_MISSING"));

    let o = run(&["validate", "--json", "--debates", s(&debates), "--annotations", s(&anns)]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["report"]["errors"][0]["code"], "E_ATTACK_MISSING");

    let missing = dir.path().join("nope.json");
    let o = run(&["validate", "--debates", s(&debates), "--annotations", s(&missing)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());

    std::fs::write(&anns, "{\"format_version\": \"1\", \"annotations\": [{\"debate_id\": 3}]}").unwrap();
    let o = run(&["validate", "--debates", s(&debates), "--annotations", s(&anns)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/annotations/0/debate_id"));

    let o = run(&["validate", "--debates"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["agree", "--debates", "x", "--a", "y", "--b", "z", "--mode", "sideways"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn render_prints_golden_text_form() {
    let o = run(&["render", "--debates", s(&data("fig1/debates.json")), "--annotations", s(&data("fig1/annotations.json"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(fixtures::FIG1_TEXT_FORM));
}

#[test]
fn agree_on_identical_corpora_is_perfect() {
    let a = data("synthetic/annotator_a.json");
    let o = run(&["agree", "--debates", s(&data("synthetic/debates.json")), "--a", s(&a), "--b", s(&a), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["report"]["kappa_per_markable"], 1.0);
    assert_eq!(v["report"]["kappa_concatenated"], 1.0);

    let o = run(&["agree", "--debates", s(&data("synthetic/debates.json")), "--a", s(&a), "--b", s(&a)]);
    let table = stdout(&o);
    assert!(table.contains("kappa (per-markable)         1.0000"), "{table}");
    assert!(table.contains("kappa (concatenated)         1.0000"), "{table}");
}

#[test]
fn agree_on_synthetic_fixture_matches_oracle() {
    let (d, a, b) = (
        data("synthetic/debates.json"),
        data("synthetic/annotator_a.json"),
        data("synthetic/annotator_b.json"),
    );
    let args = [
        "agree",
        "--debates",
        s(&d),
        "--a",
        s(&a),
        "--b",
        s(&b),
        "--mode",
        "concatenated",
        "--json",
    ];
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(report_schema().is_valid(&v));
    let r = &v["report"];
    assert_eq!(r["coverage_a"], 0.9);
    assert_eq!(r["coverage_b"], 0.9);
    assert!((r["kappa_per_markable"].as_f64().unwrap() - 203.0 / 263.0).abs() < 1e-9);
    assert!((r["kappa_concatenated"].as_f64().unwrap() - 12.0 / 17.0).abs() < 1e-9);
    assert_eq!(r["span_match_concatenated"], serde_json::json!({"exact": 6, "lenient": 1, "mismatch": 1}));
    assert_eq!(r["config"]["mode"], "concatenated");

    // byte-identical output across runs
    assert_eq!(run(&args).stdout, o.stdout);
}

#[test]
fn agree_reports_one_sided_debates() {
    let dir = tempfile::tempdir().unwrap();
    let (debates, a, mut b) = fixtures::agreement_corpus();
    b.pop();
    let (dp, ap, bp) = (dir.path().join("d.json"), dir.path().join("a.json"), dir.path().join("b.json"));
    save_debates(&dp, &debates).unwrap();
    save_annotations(&ap, &a).unwrap();
    save_annotations(&bp, &b).unwrap();
    let o = run(&["agree", "--debates", s(&dp), "--a", s(&ap), "--b", s(&bp), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1 debate(s)"));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["report"]["n_debates"], 9);

    let o = run(&["agree", "--debates", s(&dp), "--a", s(&ap), "--b", s(&bp), "--lenient-threshold", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn stats_json_matches_schema() {
    let o = run(&[
        "stats",
        "--json",
        "--debates",
        s(&data("synthetic/debates.json")),
        "--annotations",
        s(&data("synthetic/annotator_b.json")),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let schema = report_schema();
    assert!(schema.is_valid(&v), "{:?}", schema.iter_errors(&v).map(|e| e.to_string()).collect::<Vec<_>>());
    assert_eq!(v["kind"], "stats");
    assert_eq!(v["report"]["coverage"], 0.9);

    let mut broken = v.clone();
    broken["report"]["coverage"] = serde_json::json!("high");
    assert!(!schema.is_valid(&broken));
}

#[test]
fn serve_rejects_missing_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["serve", "--port", "0", "--corpus", s(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unreadable"));
}
