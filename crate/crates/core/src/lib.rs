//! Annotation model and corpus tooling for logic-pattern attack annotations
//! of debate argument pairs.
//!
//! An [`Annotation`] fills a base pattern for one debate: an initial argument
//! (IA) and a counterargument (CA) linked through relations over text spans.
//! The crate validates annotations against the scheme's rules, rewrites them
//! to a canonical form, renders their text form, and measures agreement and
//! descriptive statistics over corpora.

pub mod agreement;
pub mod canon;
pub mod fixtures;
pub mod io;
pub mod model;
pub mod render;
pub mod stats;
pub mod validate;

pub use agreement::{agreement_report, cohen_kappa, span_match, AgreementConfig, AgreementReport, Mode, SpanMatch};
pub use canon::{canonical_form, canonicalize, signature, CanonError, RuleSet, RULESET_VERSION};
pub use model::{
    compose_function, compose_kinds, new_annotation, Annotation, ArgRef, BasePattern, Debate, Node, NodeContent,
    Polarity, Region, RelationInstance, RelationKind, Source, Span, Status,
};
pub use render::{render_text_form, RenderError};
pub use stats::{coverage, motif_histogram, relation_distribution, stats_report, StatsReport};
pub use validate::{validate, validate_with, Code, Diagnostic, ValidationReport, ValidatorConfig};
