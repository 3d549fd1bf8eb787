//! `lpattack`: batch entry points over the annotation core.
//!
//! Exit codes: 0 success, 1 validation (or rendering) failure, 2 I/O or usage
//! error. Data goes to stdout, diagnostics to stderr.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lpattack_core::agreement::{agreement_report, AgreementConfig, Mode};
use lpattack_core::io::{dangling_debate_ids, load_annotations, load_debates, report_to_json};
use lpattack_core::model::{Annotation, Debate};
use lpattack_core::render::{render_text_form, RenderError};
use lpattack_core::stats::stats_report;
use lpattack_core::validate::{validate, ValidationReport};
use lpattack_service::{serve, ServiceConfig};

#[derive(Parser)]
#[command(name = "lpattack", version, about = "Validate, render and measure logic-pattern attack annotations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every annotation against the scheme; exit 1 if any fails.
    Validate {
        #[arg(long)]
        debates: PathBuf,
        #[arg(long)]
        annotations: PathBuf,
        /// Treat warnings as errors.
        #[arg(long)]
        strict: bool,
        /// Print reports as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Print the text form of every annotation.
    Render {
        #[arg(long)]
        debates: PathBuf,
        #[arg(long)]
        annotations: PathBuf,
    },
    /// Inter-annotator agreement between two annotation files.
    Agree {
        #[arg(long)]
        debates: PathBuf,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = CliMode::PerMarkable)]
        mode: CliMode,
        #[arg(long)]
        drop_aux_rationale: bool,
        #[arg(long, default_value_t = 0.5, value_parser = threshold)]
        lenient_threshold: f64,
        /// Print the report as JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Coverage, relation/attribute distribution and attack motifs.
    Stats {
        #[arg(long)]
        debates: PathBuf,
        #[arg(long)]
        annotations: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, env = "LPATTACK_PORT", default_value_t = 8080)]
        port: u16,
        /// Directory holding debates.json and annotations/.
        #[arg(long, env = "LPATTACK_CORPUS")]
        corpus: PathBuf,
        #[arg(long, env = "LPATTACK_HOST", default_value = "127.0.0.1")]
        host: std::net::IpAddr,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CliMode {
    PerMarkable,
    Concatenated,
}

impl From<CliMode> for Mode {
    fn from(m: CliMode) -> Mode {
        match m {
            CliMode::PerMarkable => Mode::PerMarkable,
            CliMode::Concatenated => Mode::Concatenated,
        }
    }
}

fn threshold(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&t) {
        Ok(t)
    } else {
        Err("must lie in [0, 1]".into())
    }
}

/// An error that ends the run with exit code 2.
struct Fatal(String);

impl<E: std::fmt::Display> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate {
            debates,
            annotations,
            strict,
            json,
        } => run_validate(&debates, &annotations, strict, json),
        Command::Render { debates, annotations } => run_render(&debates, &annotations),
        Command::Agree {
            debates,
            a,
            b,
            mode,
            drop_aux_rationale,
            lenient_threshold,
            json,
        } => {
            let cfg = AgreementConfig {
                mode: mode.into(),
                drop_aux_rationale,
                lenient_threshold,
            };
            run_agree(&debates, &a, &b, &cfg, json)
        }
        Command::Stats {
            debates,
            annotations,
            json,
        } => run_stats(&debates, &annotations, json),
        Command::Serve { port, corpus, host } => run_serve(ServiceConfig {
            host,
            port,
            corpus_dir: corpus,
        }),
    };
    match result {
        Ok(code) => code,
        Err(Fatal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load(debates: &PathBuf, annotations: &PathBuf) -> Result<(Vec<Debate>, Vec<Annotation>), Fatal> {
    let ds = load_debates(debates).map_err(|e| Fatal(format!("{}: {e}", debates.display())))?;
    let anns = load_annotations(annotations).map_err(|e| Fatal(format!("{}: {e}", annotations.display())))?;
    for id in dangling_debate_ids(&anns, &ds) {
        eprintln!("warning: {}: debate {id:?} is not in {}", annotations.display(), debates.display());
    }
    Ok((ds, anns))
}

fn debate<'a>(debates: &'a [Debate], id: &str) -> Option<&'a Debate> {
    debates.iter().find(|d| d.id == id)
}

fn label(ann: &Annotation) -> String {
    format!("{}/{}", ann.annotator_id, ann.debate_id)
}

fn run_validate(debates: &PathBuf, annotations: &PathBuf, strict: bool, json: bool) -> Result<ExitCode, Fatal> {
    let (ds, anns) = load(debates, annotations)?;
    let reports: Vec<(String, ValidationReport)> = anns
        .iter()
        .map(|a| {
            let report = match debate(&ds, &a.debate_id) {
                Some(d) => validate(a, d),
                None => ValidationReport::missing_debate(a),
            };
            (label(a), report)
        })
        .collect();
    let failed = reports.iter().filter(|(_, r)| !r.passes(strict)).count();
    if json {
        let items: Vec<serde_json::Value> = reports
            .iter()
            .map(|(id, r)| serde_json::json!({ "id": id, "report": r }))
            .collect();
        println!("{}", serde_json::to_string_pretty(&items)?);
    } else {
        let mut out = String::new();
        for (id, r) in &reports {
            let verdict = if r.passes(strict) { "ok" } else { "FAILED" };
            writeln!(out, "{id}: {verdict}")?;
            for d in r.errors.iter().chain(&r.warnings) {
                writeln!(out, "  {} [{}] {}", d.code.as_str(), d.subject_id, d.message)?;
            }
        }
        writeln!(out, "{} annotations, {} failed", reports.len(), failed)?;
        print!("{out}");
    }
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run_render(debates: &PathBuf, annotations: &PathBuf) -> Result<ExitCode, Fatal> {
    let (ds, anns) = load(debates, annotations)?;
    let mut failed = false;
    let mut out = String::new();
    for a in &anns {
        let Some(d) = debate(&ds, &a.debate_id) else {
            eprintln!("{}: skipped, unknown debate", label(a));
            failed = true;
            continue;
        };
        match render_text_form(a, d) {
            Ok(text) => writeln!(out, "# {}\n{text}\n", label(a))?,
            Err(RenderError::NotApplicable) => writeln!(out, "# {}\n(not applicable)\n", label(a))?,
            Err(e) => {
                eprintln!("{}: {e}", label(a));
                failed = true;
            }
        }
    }
    print!("{out}");
    Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn run_agree(
    debates: &PathBuf,
    a_path: &PathBuf,
    b_path: &PathBuf,
    cfg: &AgreementConfig,
    json: bool,
) -> Result<ExitCode, Fatal> {
    let (_, a) = load(debates, a_path)?;
    let (_, b) = load(debates, b_path)?;
    let in_a: BTreeSet<&str> = a.iter().map(|x| x.debate_id.as_str()).collect();
    let in_b: BTreeSet<&str> = b.iter().map(|x| x.debate_id.as_str()).collect();
    let only = in_a.symmetric_difference(&in_b).count();
    if only > 0 {
        eprintln!("note: {only} debate(s) annotated by only one side are left out");
    }
    let shared: BTreeSet<&str> = in_a.intersection(&in_b).copied().collect();
    let keep = |c: &[Annotation]| -> Vec<Annotation> {
        c.iter().filter(|x| shared.contains(x.debate_id.as_str())).cloned().collect()
    };
    let report = agreement_report(&keep(&a), &keep(&b), cfg)?;
    if json {
        print!("{}", report_to_json("agreement", &report));
    } else {
        print!("{}", report.to_table());
    }
    Ok(ExitCode::SUCCESS)
}

fn run_stats(debates: &PathBuf, annotations: &PathBuf, json: bool) -> Result<ExitCode, Fatal> {
    let (_, anns) = load(debates, annotations)?;
    let report = stats_report(&anns);
    if json {
        print!("{}", report_to_json("stats", &report));
    } else {
        print!("{}", report.to_table());
    }
    Ok(ExitCode::SUCCESS)
}

fn run_serve(config: ServiceConfig) -> Result<ExitCode, Fatal> {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .with_writer(std::io::stderr)
        .init();
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(serve(config))?;
    Ok(ExitCode::SUCCESS)
}
