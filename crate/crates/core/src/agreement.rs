//! Inter-annotator agreement.
//!
//! Markable labels are canonical signatures; Cohen's κ is computed over them
//! in two modes: one item per markable (IA, CA, attack) or one concatenated
//! item per debate. Span agreement is then measured on the IA/CA markables
//! whose labels agree, pairing spans positionally in canonical order.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::Hash;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::{canonical_form, serialize_region, RuleSet, NA_LABEL, RULESET_VERSION};
use crate::model::{Annotation, Region};
use crate::stats::coverage;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AgreementError {
    #[error("label lists differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("no items to compare")]
    Empty,
    #[error("annotations refer to different debates ({0:?} vs {1:?})")]
    DebateMismatch(String, String),
    #[error("debate {0:?} is annotated by only one annotator")]
    DebateSetMismatch(String),
    #[error("debate {debate:?} has more than one annotation from annotator {annotator}")]
    DuplicateDebate { debate: String, annotator: char },
}

/// Cohen's κ for two parallel label lists.
///
/// `p_o` is the fraction of equal positions and `p_e` the dot product of the
/// two marginal label distributions. When both annotators use one and the
/// same label throughout (`p_e = 1`) the result is 1.
pub fn cohen_kappa<L: Eq + Hash>(labels_a: &[L], labels_b: &[L]) -> Result<f64, AgreementError> {
    if labels_a.len() != labels_b.len() {
        return Err(AgreementError::LengthMismatch(labels_a.len(), labels_b.len()));
    }
    if labels_a.is_empty() {
        return Err(AgreementError::Empty);
    }
    let n = labels_a.len();
    let mut marginals: HashMap<&L, (u64, u64)> = HashMap::new();
    let mut observed = 0u64;
    for (a, b) in labels_a.iter().zip(labels_b) {
        marginals.entry(a).or_default().0 += 1;
        marginals.entry(b).or_default().1 += 1;
        if a == b {
            observed += 1;
        }
    }
    let chance: u64 = marginals.values().map(|(ca, cb)| ca * cb).sum();
    let n2 = (n as u64) * (n as u64);
    if chance == n2 {
        return Ok(1.0);
    }
    let p_o = observed as f64 / n as f64;
    let p_e = chance as f64 / n2 as f64;
    Ok((p_o - p_e) / (1.0 - p_e))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[default]
    PerMarkable,
    Concatenated,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::PerMarkable => "per-markable",
            Mode::Concatenated => "concatenated",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpanMatch {
    Exact,
    Lenient,
    Mismatch,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanTally {
    pub exact: usize,
    pub lenient: usize,
    pub mismatch: usize,
}

impl SpanTally {
    pub fn add(&mut self, m: SpanMatch) {
        match m {
            SpanMatch::Exact => self.exact += 1,
            SpanMatch::Lenient => self.lenient += 1,
            SpanMatch::Mismatch => self.mismatch += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.exact + self.lenient + self.mismatch
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgreementConfig {
    /// Headline mode for human-readable output; reports always carry both.
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub drop_aux_rationale: bool,
    #[serde(default = "default_lenient_threshold")]
    pub lenient_threshold: f64,
}

fn default_lenient_threshold() -> f64 {
    0.5
}

impl Default for AgreementConfig {
    fn default() -> Self {
        AgreementConfig {
            mode: Mode::PerMarkable,
            drop_aux_rationale: false,
            lenient_threshold: default_lenient_threshold(),
        }
    }
}

/// One compared item: a markable (per-markable mode) or a whole debate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparedItem {
    pub debate_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub markable: Option<Region>,
    pub label_a: String,
    pub label_b: String,
    pub agreed: bool,
}

struct Labelled {
    not_applicable: bool,
    regions: [(String, Vec<String>); 3],
}

impl Labelled {
    fn of(ann: &Annotation, drop_aux_rationale: bool) -> Self {
        let canon = canonical_form(ann, drop_aux_rationale);
        let ser = |r: Region| {
            let s = serialize_region(&canon, r);
            (s.label, s.spans)
        };
        Labelled {
            not_applicable: ann.is_not_applicable(),
            regions: [ser(Region::IaPattern), ser(Region::CaPattern), ser(Region::AttackPattern)],
        }
    }

    fn concatenated(&self) -> String {
        if self.not_applicable {
            return NA_LABEL.to_string();
        }
        let [ia, ca, at] = &self.regions;
        format!("{}|{}|{}", ia.0, ca.0, at.0)
    }
}

/// Labels both annotations of one debate for κ.
pub fn compare_markables(
    a: &Annotation,
    b: &Annotation,
    mode: Mode,
    drop_aux_rationale: bool,
) -> Result<Vec<ComparedItem>, AgreementError> {
    if a.debate_id != b.debate_id {
        return Err(AgreementError::DebateMismatch(a.debate_id.clone(), b.debate_id.clone()));
    }
    let la = Labelled::of(a, drop_aux_rationale);
    let lb = Labelled::of(b, drop_aux_rationale);
    Ok(items(&a.debate_id, &la, &lb, mode))
}

fn items(debate_id: &str, la: &Labelled, lb: &Labelled, mode: Mode) -> Vec<ComparedItem> {
    match mode {
        Mode::PerMarkable => Region::ALL
            .iter()
            .enumerate()
            .map(|(i, &region)| {
                let label_a = la.regions[i].0.clone();
                let label_b = lb.regions[i].0.clone();
                ComparedItem {
                    debate_id: debate_id.to_string(),
                    markable: Some(region),
                    agreed: label_a == label_b,
                    label_a,
                    label_b,
                }
            })
            .collect(),
        Mode::Concatenated => {
            let label_a = la.concatenated();
            let label_b = lb.concatenated();
            vec![ComparedItem {
                debate_id: debate_id.to_string(),
                markable: None,
                agreed: label_a == label_b,
                label_a,
                label_b,
            }]
        }
    }
}

/// Lowercases, collapses whitespace and strips punctuation at both ends.
pub fn normalize_span(text: &str) -> String {
    let collapsed = text.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase();
    collapsed
        .trim_matches(|c: char| c.is_ascii_punctuation() || "…“”‘’«»".contains(c) || c.is_whitespace())
        .to_string()
}

fn leniently_equal(a: &str, b: &str, threshold: f64) -> bool {
    let ta: Vec<&str> = a.split(' ').filter(|t| !t.is_empty()).collect();
    let tb: Vec<&str> = b.split(' ').filter(|t| !t.is_empty()).collect();
    let contains = |long: &[&str], short: &[&str]| {
        !short.is_empty() && long.windows(short.len()).any(|w| w == short)
    };
    if contains(&ta, &tb) || contains(&tb, &ta) {
        return true;
    }
    let sa: BTreeSet<&str> = ta.iter().copied().collect();
    let sb: BTreeSet<&str> = tb.iter().copied().collect();
    let union = sa.union(&sb).count();
    union > 0 && sa.intersection(&sb).count() as f64 / union as f64 >= threshold
}

/// Classifies two positionally paired span lists.
///
/// Exact when every pair is equal after normalization; lenient when every
/// pair is at least leniently equal (token containment or token-set Jaccard
/// at or above `threshold`); otherwise, or when the lists differ in length,
/// a mismatch.
pub fn span_match<S: AsRef<str>>(spans_a: &[S], spans_b: &[S], threshold: f64) -> SpanMatch {
    if spans_a.len() != spans_b.len() {
        return SpanMatch::Mismatch;
    }
    let mut all_exact = true;
    for (a, b) in spans_a.iter().zip(spans_b) {
        let (a, b) = (normalize_span(a.as_ref()), normalize_span(b.as_ref()));
        if a == b {
            continue;
        }
        if !leniently_equal(&a, &b, threshold) {
            return SpanMatch::Mismatch;
        }
        all_exact = false;
    }
    if all_exact {
        SpanMatch::Exact
    } else {
        SpanMatch::Lenient
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreedMarkable {
    pub debate_id: String,
    pub markable: Region,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreedMarkables {
    pub count: usize,
    /// In debate order, then IA, CA, attack.
    pub items: Vec<AgreedMarkable>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub mode: Mode,
    pub drop_aux_rationale: bool,
    pub lenient_threshold: f64,
    pub ruleset_version: String,
    pub rules: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub n_debates: usize,
    pub coverage_a: f64,
    pub coverage_b: f64,
    pub kappa_per_markable: f64,
    pub kappa_concatenated: f64,
    pub agreed_markables: AgreedMarkables,
    /// Debates whose concatenated labels agree.
    pub agreed_debates: Vec<String>,
    pub span_match_per_markable: SpanTally,
    pub span_match_concatenated: SpanTally,
    pub config: ReportConfig,
}

impl AgreementReport {
    pub fn headline_kappa(&self) -> f64 {
        match self.config.mode {
            Mode::PerMarkable => self.kappa_per_markable,
            Mode::Concatenated => self.kappa_concatenated,
        }
    }

    /// Plain-text table. Span rows give raw counts with percentages of the
    /// compared total.
    pub fn to_table(&self) -> String {
        let pct = |n: usize, d: usize| if d == 0 { 0.0 } else { 100.0 * n as f64 / d as f64 };
        let tally = |name: &str, t: &SpanTally| {
            let d = t.total();
            format!(
                "{name:<28} exact {} ({:.1}%)  lenient {} ({:.1}%)  mismatch {} ({:.1}%)  of {d}\n",
                t.exact,
                pct(t.exact, d),
                t.lenient,
                pct(t.lenient, d),
                t.mismatch,
                pct(t.mismatch, d),
            )
        };
        let mut out = String::new();
        out.push_str(&format!("{:<28} {}\n", "debates", self.n_debates));
        out.push_str(&format!("{:<28} {:.4}\n", "coverage A", self.coverage_a));
        out.push_str(&format!("{:<28} {:.4}\n", "coverage B", self.coverage_b));
        out.push_str(&format!("{:<28} {:.4}\n", "kappa (per-markable)", self.kappa_per_markable));
        out.push_str(&format!("{:<28} {:.4}\n", "kappa (concatenated)", self.kappa_concatenated));
        out.push_str(&format!(
            "{:<28} {} of {}\n",
            "agreed markables",
            self.agreed_markables.count,
            3 * self.n_debates
        ));
        out.push_str(&format!("{:<28} {} of {}\n", "agreed debates", self.agreed_debates.len(), self.n_debates));
        out.push_str(&tally("spans (per-markable)", &self.span_match_per_markable));
        out.push_str(&tally("spans (concatenated)", &self.span_match_concatenated));
        out.push_str(&format!(
            "{:<28} mode={} drop_aux_rationale={} lenient_threshold={} ruleset={} [{}]\n",
            "config",
            self.config.mode,
            self.config.drop_aux_rationale,
            self.config.lenient_threshold,
            self.config.ruleset_version,
            self.config.rules.join(", ")
        ));
        out
    }
}

struct DebateOutcome {
    per_markable: Vec<ComparedItem>,
    concatenated: ComparedItem,
    spans_per_markable: Vec<(Region, SpanMatch)>,
    span_concatenated: Option<SpanMatch>,
}

fn pair_by_debate<'a>(
    corpus_a: &'a [Annotation],
    corpus_b: &'a [Annotation],
) -> Result<Vec<(&'a Annotation, &'a Annotation)>, AgreementError> {
    let mut by_id: HashMap<&str, &Annotation> = HashMap::new();
    for ann in corpus_b {
        if by_id.insert(&ann.debate_id, ann).is_some() {
            return Err(AgreementError::DuplicateDebate {
                debate: ann.debate_id.clone(),
                annotator: 'B',
            });
        }
    }
    let mut seen = BTreeSet::new();
    let mut pairs = Vec::with_capacity(corpus_a.len());
    for a in corpus_a {
        if !seen.insert(a.debate_id.as_str()) {
            return Err(AgreementError::DuplicateDebate {
                debate: a.debate_id.clone(),
                annotator: 'A',
            });
        }
        let b = by_id
            .remove(a.debate_id.as_str())
            .ok_or_else(|| AgreementError::DebateSetMismatch(a.debate_id.clone()))?;
        pairs.push((a, b));
    }
    if let Some(extra) = corpus_b.iter().find(|b| by_id.contains_key(b.debate_id.as_str())) {
        return Err(AgreementError::DebateSetMismatch(extra.debate_id.clone()));
    }
    Ok(pairs)
}

/// Full agreement report for two corpora covering the same debates.
///
/// Items are ordered by annotator A's corpus order; NA is an ordinary label.
pub fn agreement_report(
    corpus_a: &[Annotation],
    corpus_b: &[Annotation],
    config: &AgreementConfig,
) -> Result<AgreementReport, AgreementError> {
    let pairs = pair_by_debate(corpus_a, corpus_b)?;
    if pairs.is_empty() {
        return Err(AgreementError::Empty);
    }
    let threshold = config.lenient_threshold;
    let outcomes: Vec<DebateOutcome> = pairs
        .par_iter()
        .map(|(a, b)| {
            let la = Labelled::of(a, config.drop_aux_rationale);
            let lb = Labelled::of(b, config.drop_aux_rationale);
            let per_markable = items(&a.debate_id, &la, &lb, Mode::PerMarkable);
            let concatenated = items(&a.debate_id, &la, &lb, Mode::Concatenated).remove(0);
            let both_annotated = !la.not_applicable && !lb.not_applicable;
            let mut spans_per_markable = Vec::new();
            if both_annotated {
                for (i, item) in per_markable.iter().enumerate().take(2) {
                    if item.agreed {
                        let m = span_match(&la.regions[i].1, &lb.regions[i].1, threshold);
                        spans_per_markable.push((Region::ALL[i], m));
                    }
                }
            }
            let span_concatenated = (both_annotated && concatenated.agreed).then(|| {
                let joined = |l: &Labelled| [l.regions[0].1.clone(), l.regions[1].1.clone()].concat();
                span_match(&joined(&la), &joined(&lb), threshold)
            });
            DebateOutcome {
                per_markable,
                concatenated,
                spans_per_markable,
                span_concatenated,
            }
        })
        .collect();

    let per: Vec<&ComparedItem> = outcomes.iter().flat_map(|o| &o.per_markable).collect();
    let (pa, pb): (Vec<&str>, Vec<&str>) = per.iter().map(|i| (i.label_a.as_str(), i.label_b.as_str())).unzip();
    let (ca, cb): (Vec<&str>, Vec<&str>) = outcomes
        .iter()
        .map(|o| (o.concatenated.label_a.as_str(), o.concatenated.label_b.as_str()))
        .unzip();

    let mut span_match_per_markable = SpanTally::default();
    let mut span_match_concatenated = SpanTally::default();
    for o in &outcomes {
        for (_, m) in &o.spans_per_markable {
            span_match_per_markable.add(*m);
        }
        if let Some(m) = o.span_concatenated {
            span_match_concatenated.add(m);
        }
    }

    let corpus_a: Vec<&Annotation> = pairs.iter().map(|(a, _)| *a).collect();
    let corpus_b: Vec<&Annotation> = pairs.iter().map(|(_, b)| *b).collect();
    Ok(AgreementReport {
        n_debates: pairs.len(),
        coverage_a: coverage(corpus_a.iter().copied()).map_err(|_| AgreementError::Empty)?,
        coverage_b: coverage(corpus_b.iter().copied()).map_err(|_| AgreementError::Empty)?,
        kappa_per_markable: cohen_kappa(&pa, &pb)?,
        kappa_concatenated: cohen_kappa(&ca, &cb)?,
        agreed_markables: {
            let items: Vec<AgreedMarkable> = per
                .iter()
                .filter(|i| i.agreed)
                .map(|i| AgreedMarkable {
                    debate_id: i.debate_id.clone(),
                    markable: i.markable.expect("per-markable items carry a markable"),
                })
                .collect();
            AgreedMarkables {
                count: items.len(),
                items,
            }
        },
        agreed_debates: outcomes
            .iter()
            .filter(|o| o.concatenated.agreed)
            .map(|o| o.concatenated.debate_id.clone())
            .collect(),
        span_match_per_markable,
        span_match_concatenated,
        config: ReportConfig {
            mode: config.mode,
            drop_aux_rationale: config.drop_aux_rationale,
            lenient_threshold: config.lenient_threshold,
            ruleset_version: RULESET_VERSION.to_string(),
            rules: RuleSet::standard(config.drop_aux_rationale)
                .ids()
                .into_iter()
                .map(str::to_string)
                .collect(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn kappa_examples() {
        assert_eq!(cohen_kappa(&["P", "Q", "Q"], &["P", "Q", "Q"]).unwrap(), 1.0);
        let k = cohen_kappa(&["P", "P", "Q", "Q"], &["P", "Q", "Q", "Q"]).unwrap();
        assert!((k - 0.5).abs() < 1e-12);
        assert_eq!(cohen_kappa(&["P"; 4], &["Q"; 4]).unwrap(), 0.0);
        assert_eq!(cohen_kappa(&["P"; 3], &["P"; 3]).unwrap(), 1.0);
    }

    #[test]
    fn kappa_errors() {
        assert_eq!(cohen_kappa(&["P"], &["P", "Q"]), Err(AgreementError::LengthMismatch(1, 2)));
        assert_eq!(cohen_kappa::<&str>(&[], &[]), Err(AgreementError::Empty));
    }

    #[test]
    fn span_match_examples() {
        assert_eq!(span_match(&["a b", "c"], &["a b", "c"], 0.5), SpanMatch::Exact);
        assert_eq!(
            span_match(&["chance of rehabilitation of the criminals"], &["rehabilitation of the criminals"], 0.5),
            SpanMatch::Lenient
        );
        assert_eq!(
            span_match(
                &["learns the importance of scheduling"],
                &["learns that the way to succeed is by making schedule"],
                0.5
            ),
            SpanMatch::Mismatch
        );
        assert_eq!(span_match(&["a"], &["a", "b"], 0.5), SpanMatch::Mismatch);
        assert_eq!(span_match(&["Free  Time."], &["free time"], 0.5), SpanMatch::Exact);
        // token-set overlap 3/4 without containment
        assert_eq!(span_match(&["a b c"], &["c b a d"], 0.5), SpanMatch::Lenient);
        assert_eq!(span_match(&["a b c"], &["c b a d"], 0.8), SpanMatch::Mismatch);
    }

    #[test]
    fn identical_fig1_agrees_everywhere() {
        let (_, a) = fixtures::fig1();
        let b = fixtures::rename_and_shuffle(&a, 3);
        let items = compare_markables(&a, &b, Mode::PerMarkable, false).unwrap();
        assert_eq!(items.len(), 3);
        assert!(items.iter().all(|i| i.agreed));
        let concat = compare_markables(&a, &b, Mode::Concatenated, false).unwrap();
        assert_eq!(concat.len(), 1);
        assert!(concat[0].agreed);
    }

    #[test]
    fn na_against_annotated_never_agrees() {
        let (d, a) = fixtures::fig1();
        let na = Annotation::not_applicable(&d.id, "b");
        let items = compare_markables(&a, &na, Mode::PerMarkable, false).unwrap();
        assert!(items.iter().all(|i| !i.agreed && i.label_b == NA_LABEL));
        let other = Annotation::not_applicable("elsewhere", "b");
        assert!(matches!(
            compare_markables(&a, &other, Mode::PerMarkable, false),
            Err(AgreementError::DebateMismatch(..))
        ));
    }

    #[test]
    fn same_reading_different_structure_disagrees_on_ca() {
        use crate::model::{ArgRef, Node, Polarity, RelationInstance, RelationKind as K, Source, Span};
        let d = fixtures::synthetic_debate("hw", "homework");
        let base = fixtures::template_annotation(
            &d,
            "A",
            fixtures::Template::Value,
            fixtures::SpanChoice::default(),
            "",
            false,
        );
        // value judgement over two causal relations instead of two concepts
        let mut other = base.clone();
        other.annotator_id = "B".into();
        other.relations.retain(|r| r.region != Region::CaPattern && r.region != Region::AttackPattern);
        other.nodes.push(Node::span("found", Span::find(&d, Source::Ca, "basic foundations of study").unwrap()).with_polarity(Polarity::Good));
        other.relations.extend([
            RelationInstance::new("c1", K::Promote, Region::CaPattern, vec![ArgRef::node("x"), ArgRef::node("found")]),
            RelationInstance::new("mi", K::MoreImportant, Region::CaPattern, vec![ArgRef::relation("c1"), ArgRef::relation("ia")]),
            RelationInstance::new("deny", K::Nullify, Region::AttackPattern, vec![ArgRef::relation("mi"), ArgRef::IaConclusion]),
        ]);
        assert!(crate::validate::validate(&other, &d).is_valid);
        let items = compare_markables(&base, &other, Mode::PerMarkable, false).unwrap();
        assert!(items[0].agreed);
        assert!(!items[1].agreed);
    }

    #[test]
    fn report_rejects_mismatched_debate_sets() {
        let (_, a) = fixtures::fig1();
        let b = Annotation::not_applicable("other", "B");
        assert!(matches!(
            agreement_report(std::slice::from_ref(&a), &[b], &AgreementConfig::default()),
            Err(AgreementError::DebateSetMismatch(_))
        ));
        assert!(matches!(
            agreement_report(&[a.clone(), a.clone()], &[a], &AgreementConfig::default()),
            Err(AgreementError::DuplicateDebate { .. })
        ));
    }
}
