//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.
//!
//! Set `LPATTACK_RELEASED_CORPUS` to a directory holding `debates.json`,
//! `annotator_a.json` and `annotator_b.json` to also run `agree` on real
//! dual-annotated data and print the gap to the published figures.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use lpattack_core::agreement::{agreement_report, cohen_kappa, AgreementConfig, SpanTally};
use lpattack_core::canon::{canonical_form, signature};
use lpattack_core::fixtures;
use lpattack_core::io::{annotations_to_string, parse_annotations, save_annotations, save_debates, REPORT_SCHEMA};
use lpattack_core::model::{compose_function, compose_kinds, ArgRef, Region, RelationInstance, RelationKind};
use lpattack_core::render::render_text_form;
use lpattack_core::validate::validate;
use serde_json::Value;

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Check {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

const REGIONS: [Region; 3] = [Region::IaPattern, Region::CaPattern, Region::AttackPattern];

fn fig1_golden() -> Check {
    let t = Instant::now();
    let (debate, ann) = fixtures::fig1();
    let report = validate(&ann, &debate);
    ensure(report.passes(true), || format!("fig1: {:?} {:?}", report.errors, report.warnings))?;
    let mutations = fixtures::fig1_mutations();
    ensure(mutations.len() == 6, || format!("{} mutations", mutations.len()))?;
    for (name, m, code) in mutations {
        let r = validate(&m, &debate);
        let codes: Vec<_> = r.errors.iter().map(|d| d.code).collect();
        ensure(codes == [code], || format!("{name}: expected [{}], got {codes:?}", code.as_str()))?;
    }
    within(t.elapsed(), Duration::from_secs(1))
}

fn canonicalizer() -> Check {
    let t = Instant::now();
    // no-X Promote Y against its hand-rewritten X Suppress Y form
    let (_, ann) = fixtures::homework_value_judgement();
    let mut rewritten = ann.clone();
    let x = ann
        .relations
        .iter()
        .find(|r| r.kind == RelationKind::Promote)
        .and_then(|r| r.args[0].as_node())
        .ok_or("homework example has no Promote")?
        .to_string();
    ensure(ann.node(&x).is_some_and(|n| n.negated), || "antecedent is not negated".into())?;
    for n in &mut rewritten.nodes {
        if n.id == x {
            n.negated = false;
        }
    }
    for r in &mut rewritten.relations {
        if r.kind == RelationKind::Promote {
            r.kind = RelationKind::Suppress;
        }
    }
    for region in REGIONS {
        let (a, b) = (signature(&ann, region, false), signature(&rewritten, region, false));
        ensure(a == b, || format!("{region:?}: {} != {}", a.label, b.label))?;
    }

    for seed in 0..1000u64 {
        let (_, ann) = fixtures::random_valid(seed);
        for drop_aux in [false, true] {
            let once = canonical_form(&ann, drop_aux);
            ensure(canonical_form(&once, drop_aux) == once, || format!("seed {seed}: not idempotent"))?;
            let shuffled = fixtures::rename_and_shuffle(&ann, seed ^ 0x5eed);
            for region in REGIONS {
                ensure(signature(&ann, region, drop_aux) == signature(&shuffled, region, drop_aux), || {
                    format!("seed {seed}: {region:?} signature depends on ids or order")
                })?;
            }
        }
    }
    within(t.elapsed(), Duration::from_secs(10))
}

fn kappa_oracle() -> Check {
    let cases: [(&[&str], &[&str], f64); 6] = [
        (&["P", "P", "Q", "Q"], &["P", "Q", "Q", "Q"], 0.5),
        (&["P", "Q", "R"], &["P", "Q", "R"], 1.0),
        (&["P", "P"], &["Q", "Q"], 0.0),
        (&["P", "Q"], &["Q", "Q"], 0.0),
        (&["P", "Q"], &["Q", "P"], -1.0),
        (&["P", "P", "P", "Q", "Q", "R"], &["P", "P", "Q", "Q", "R", "R"], 0.5),
    ];
    for (a, b, expected) in cases {
        let got = cohen_kappa(a, b).map_err(|e| e.to_string())?;
        ensure((got - expected).abs() < 1e-9, || format!("{a:?}/{b:?}: {got} != {expected}"))?;
    }
    Ok(())
}

fn renderer_golden() -> Check {
    let (debate, ann) = fixtures::fig1();
    let text = render_text_form(&ann, &debate).map_err(|e| e.to_string())?;
    ensure(text == fixtures::FIG1_TEXT_FORM, || format!("got:\n{text}"))
}

fn composition() -> Check {
    use RelationKind::{Promote, Suppress};
    let table = [
        (Promote, Promote, Promote),
        (Promote, Suppress, Suppress),
        (Suppress, Promote, Suppress),
        (Suppress, Suppress, Promote),
    ];
    for (first, second, expected) in table {
        ensure(compose_kinds(first, second) == expected, || format!("{first:?}∘{second:?}"))?;
        let chain = [
            RelationInstance::new("r1", first, Region::IaPattern, vec![ArgRef::node("a"), ArgRef::node("b")]),
            RelationInstance::new("r2", second, Region::IaPattern, vec![ArgRef::node("b"), ArgRef::node("c")]),
        ];
        let derived = compose_function(&[&chain[0], &chain[1]]).map_err(|e| e.to_string())?;
        ensure(
            derived.kind == expected && derived.antecedent == "a" && derived.consequent == "c",
            || format!("{first:?} then {second:?}: {derived:?}"),
        )?;
    }
    // the worked example: Suppress then Promote is a Suppress
    ensure(compose_kinds(Suppress, Promote) == Suppress, || "Suppress∘Promote".into())
}

fn synthetic_agreement() -> Check {
    let t = Instant::now();
    let (_, a, b) = fixtures::agreement_corpus();
    let r = agreement_report(&a, &b, &AgreementConfig::default()).map_err(|e| e.to_string())?;
    let got = (
        r.n_debates,
        r.coverage_a,
        r.coverage_b,
        r.agreed_markables.count,
        r.agreed_debates.len(),
        r.span_match_per_markable,
        r.span_match_concatenated,
    );
    let want = (
        10,
        0.9,
        0.9,
        24,
        8,
        SpanTally {
            exact: 14,
            lenient: 1,
            mismatch: 1,
        },
        SpanTally {
            exact: 6,
            lenient: 1,
            mismatch: 1,
        },
    );
    ensure(got == want, || format!("got {got:?}"))?;
    ensure((r.kappa_per_markable - 203.0 / 263.0).abs() < 1e-9, || format!("kappa (i) {}", r.kappa_per_markable))?;
    ensure((r.kappa_concatenated - 12.0 / 17.0).abs() < 1e-9, || format!("kappa (ii) {}", r.kappa_concatenated))?;
    within(t.elapsed(), Duration::from_secs(1))
}

fn round_trip() -> Check {
    let anns: Vec<_> = (0..1000u64).map(|s| fixtures::random_valid(s).1).collect();
    let text = annotations_to_string(&anns).map_err(|e| e.to_string())?;
    let back = parse_annotations(&text).map_err(|e| e.to_string())?;
    ensure(back == anns, || "load(save(x)) != x".into())?;
    ensure(annotations_to_string(&back).map_err(|e| e.to_string())? == text, || "bytes changed".into())?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("a.json");
    for (i, ann) in anns.iter().enumerate() {
        let one = std::slice::from_ref(ann);
        save_annotations(&path, one).map_err(|e| e.to_string())?;
        let bytes = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        ensure(parse_annotations(&bytes).map_err(|e| e.to_string())? == one, || format!("#{i} differs"))?;
        ensure(bytes == annotations_to_string(one).map_err(|e| e.to_string())?, || format!("#{i} bytes"))?;
    }
    Ok(())
}

/// Runs `lpattack agree --json` and checks the report against the schema.
fn agree_json(debates: &Path, a: &Path, b: &Path, mode: &str) -> Result<Value, String> {
    let o = Command::new(env!("CARGO_BIN_EXE_lpattack"))
        .args(["agree", "--json", "--mode", mode, "--debates"])
        .arg(debates)
        .arg("--a")
        .arg(a)
        .arg("--b")
        .arg(b)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(o.status.success(), || String::from_utf8_lossy(&o.stderr).into_owned())?;
    let v: Value = serde_json::from_slice(&o.stdout).map_err(|e| e.to_string())?;
    let schema: Value = serde_json::from_str(REPORT_SCHEMA).map_err(|e| e.to_string())?;
    let validator = jsonschema::validator_for(&schema).map_err(|e| e.to_string())?;
    let errors: Vec<String> = validator.iter_errors(&v).map(|e| format!("{}: {e}", e.instance_path)).collect();
    ensure(errors.is_empty(), || format!("schema: {errors:?}"))?;
    Ok(v)
}

fn emitted(v: &Value) -> Check {
    let r = &v["report"];
    for key in ["coverage_a", "coverage_b", "kappa_per_markable", "kappa_concatenated"] {
        ensure(r[key].is_number(), || format!("{key} missing"))?;
    }
    for key in ["span_match_per_markable", "span_match_concatenated"] {
        for tally in ["exact", "lenient", "mismatch"] {
            ensure(r[key][tally].is_u64(), || format!("{key}.{tally} missing"))?;
        }
    }
    Ok(())
}

fn corpus_ingest() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (debates, a, b) = fixtures::dual_corpus(50, 2024);
    let (dp, ap, bp) = (dir.path().join("d.json"), dir.path().join("a.json"), dir.path().join("b.json"));
    save_debates(&dp, &debates).map_err(|e| e.to_string())?;
    save_annotations(&ap, &a).map_err(|e| e.to_string())?;
    save_annotations(&bp, &b).map_err(|e| e.to_string())?;
    for mode in ["per-markable", "concatenated"] {
        let v = agree_json(&dp, &ap, &bp, mode)?;
        emitted(&v)?;
        ensure(v["report"]["n_debates"] == 50, || format!("n_debates {}", v["report"]["n_debates"]))?;
    }
    Ok(())
}

fn share(tally: &Value, lenient: bool) -> f64 {
    let n = |k: &str| tally[k].as_u64().unwrap_or(0) as f64;
    let hits = n("exact") + if lenient { n("lenient") } else { 0.0 };
    let total = n("exact") + n("lenient") + n("mismatch");
    if total == 0.0 {
        f64::NAN
    } else {
        hits / total
    }
}

/// Published figures: κ 0.63 / 0.49, coverage 90%, span match 68% / 46%.
fn released_corpus(dir: &Path) -> Check {
    let v = agree_json(
        &dir.join("debates.json"),
        &dir.join("annotator_a.json"),
        &dir.join("annotator_b.json"),
        "per-markable",
    )?;
    emitted(&v)?;
    let r = &v["report"];
    let f = |k: &str| r[k].as_f64().unwrap_or(f64::NAN);
    let rows = [
        ("kappa (per-markable)", f("kappa_per_markable"), 0.63),
        ("kappa (concatenated)", f("kappa_concatenated"), 0.49),
        ("coverage a", f("coverage_a"), 0.90),
        ("coverage b", f("coverage_b"), 0.90),
        ("span exact (per-markable)", share(&r["span_match_per_markable"], false), 0.68),
        ("span exact+lenient (per-markable)", share(&r["span_match_per_markable"], true), 0.68),
        ("span exact (concatenated)", share(&r["span_match_concatenated"], false), 0.46),
        ("span exact+lenient (concatenated)", share(&r["span_match_concatenated"], true), 0.46),
    ];
    for (name, got, published) in rows {
        println!("      {name:<36} {got:.4}  published {published:.2}  gap {:+.4}", got - published);
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("fig1 golden fixture and single-mutation codes", fig1_golden),
        ("canonicalizer signature, idempotence and invariance", canonicalizer),
        ("cohen kappa hand-computed fixtures", kappa_oracle),
        ("renderer golden text form", renderer_golden),
        ("function composition sign table", composition),
        ("synthetic agreement corpus report", synthetic_agreement),
        ("save/load round trip and byte stability", round_trip),
        ("corpus ingest through `agree`", corpus_ingest),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let t = Instant::now();
        let outcome = check();
        let ms = t.elapsed().as_secs_f64() * 1e3;
        match outcome {
            Ok(()) => println!("PASS  {name} ({ms:.0} ms)"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {name} ({ms:.0} ms): {msg}");
            }
        }
    }

    match std::env::var_os("LPATTACK_RELEASED_CORPUS") {
        Some(dir) => match released_corpus(Path::new(&dir)) {
            Ok(()) => println!("PASS  released corpus ingest (gaps above are reported, not gated)"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  released corpus ingest: {msg}");
            }
        },
        None => println!(
            "NOTE  published agreement figures not compared: LPATTACK_RELEASED_CORPUS is unset, ingest ran on a generated 50-debate corpus"
        ),
    }

    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion/criteria failed");
        ExitCode::FAILURE
    }
}
