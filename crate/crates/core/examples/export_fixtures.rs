//! Writes the bundled fixture corpora as JSON files.
//!
//! `cargo run -p lpattack-core --example export_fixtures -- <out-dir>`

use std::path::PathBuf;

use lpattack_core::fixtures;
use lpattack_core::io::{save_annotations, save_debates};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "data".into()));

    let fig1 = out.join("fig1");
    std::fs::create_dir_all(&fig1)?;
    let (debate, ann) = fixtures::fig1();
    let (hw_debate, hw) = fixtures::homework_value_judgement();
    let (limit_debate, limit) = fixtures::limit_example();
    let mut debates = vec![debate];
    for d in [hw_debate, limit_debate] {
        if !debates.iter().any(|x| x.id == d.id) {
            debates.push(d);
        }
    }
    save_debates(fig1.join("debates.json"), &debates)?;
    save_annotations(fig1.join("annotations.json"), &[ann, hw, limit])?;

    let synthetic = out.join("synthetic");
    std::fs::create_dir_all(&synthetic)?;
    let (debates, a, b) = fixtures::agreement_corpus();
    save_debates(synthetic.join("debates.json"), &debates)?;
    save_annotations(synthetic.join("annotator_a.json"), &a)?;
    save_annotations(synthetic.join("annotator_b.json"), &b)?;
    Ok(())
}
