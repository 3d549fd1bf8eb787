//! Typed hypergraph model for attack-logic-pattern annotations.
//!
//! An [`Annotation`] holds one annotator's reading of a [`Debate`]: a base
//! pattern fixing the two conclusions, a central concept `X`, concept
//! [`Node`]s filled from text spans, and [`RelationInstance`]s. Relations may
//! take other relations as arguments (value judgements over causal statements,
//! contradictions, attacks), so the structure is a DAG-shaped hypergraph whose
//! edges are addressed by id.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Fields found in a document that this version does not know about.
/// They are carried through load/save untouched.
pub type Extra = BTreeMap<String, serde_json::Value>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Debate {
    pub id: String,
    pub topic: String,
    pub ia_text: String,
    pub ca_text: String,
}

impl Debate {
    pub fn new(
        id: impl Into<String>,
        topic: impl Into<String>,
        ia_text: impl Into<String>,
        ca_text: impl Into<String>,
    ) -> Self {
        Debate {
            id: id.into(),
            topic: topic.into(),
            ia_text: ia_text.into(),
            ca_text: ca_text.into(),
        }
    }

    pub fn text(&self, source: Source) -> &str {
        match source {
            Source::Ia => &self.ia_text,
            Source::Ca => &self.ca_text,
        }
    }
}

/// Which speech of the debate a span is taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Source {
    #[serde(rename = "IA")]
    Ia,
    #[serde(rename = "CA")]
    Ca,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Ia => "IA",
            Source::Ca => "CA",
        })
    }
}

/// A slot filler selected from one of the debate texts.
///
/// Offsets count Unicode scalar values, `start` inclusive and `end`
/// exclusive. The selected text is stored next to the offsets so that a
/// later edit of the debate text is detectable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Span {
    pub source: Source,
    pub start: usize,
    pub end: usize,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpanError {
    #[error("span [{start}, {end}) is out of bounds for {side:?} text of {len} characters")]
    OutOfBounds {
        side: Source,
        start: usize,
        end: usize,
        len: usize,
    },
    #[error("span text {stored:?} does not match debate text {actual:?}")]
    TextMismatch { stored: String, actual: String },
}

impl Span {
    /// Builds a span from character offsets, copying the text out of the debate.
    pub fn from_offsets(
        debate: &Debate,
        source: Source,
        start: usize,
        end: usize,
    ) -> Result<Span, SpanError> {
        let text = char_slice(debate.text(source), start, end).ok_or(SpanError::OutOfBounds {
            side: source,
            start,
            end,
            len: debate.text(source).chars().count(),
        })?;
        Ok(Span {
            source,
            start,
            end,
            text: text.to_string(),
        })
    }

    /// Span of the first occurrence of `needle` in the chosen text.
    pub fn find(debate: &Debate, source: Source, needle: &str) -> Option<Span> {
        let haystack = debate.text(source);
        let byte_start = haystack.find(needle)?;
        let start = haystack[..byte_start].chars().count();
        let end = start + needle.chars().count();
        Span::from_offsets(debate, source, start, end).ok()
    }

    pub fn char_len(&self) -> usize {
        self.text.chars().count()
    }
}

/// Substring by character offsets; `None` when the range is empty or out of bounds.
fn char_slice(text: &str, start: usize, end: usize) -> Option<&str> {
    if start >= end {
        return None;
    }
    let mut indices = text.char_indices().map(|(i, _)| i).chain(std::iter::once(text.len()));
    let byte_start = indices.nth(start)?;
    let byte_end = indices.nth(end - start - 1)?;
    Some(&text[byte_start..byte_end])
}

/// Resolves `span` against `debate`, checking both the offsets and the stored text.
pub fn resolve_span<'d>(debate: &'d Debate, span: &Span) -> Result<&'d str, SpanError> {
    let text = debate.text(span.source);
    let actual = char_slice(text, span.start, span.end).ok_or(SpanError::OutOfBounds {
        side: span.source,
        start: span.start,
        end: span.end,
        len: text.chars().count(),
    })?;
    if actual != span.text {
        return Err(SpanError::TextMismatch {
            stored: span.text.clone(),
            actual: actual.to_string(),
        });
    }
    Ok(actual)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum NodeContent {
    /// The shared concept slot; resolves to the annotation's central concept.
    CentralX,
    Span(Span),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    Good,
    Bad,
    #[default]
    None,
}

impl Polarity {
    pub fn is_marked(self) -> bool {
        !matches!(self, Polarity::None)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    pub content: NodeContent,
    #[serde(default)]
    pub polarity: Polarity,
    #[serde(default)]
    pub negated: bool,
    #[serde(skip)]
    pub extra: Extra,
}

impl Node {
    pub fn central(id: impl Into<String>) -> Self {
        Node {
            id: id.into(),
            content: NodeContent::CentralX,
            polarity: Polarity::None,
            negated: false,
            extra: Extra::new(),
        }
    }

    pub fn span(id: impl Into<String>, span: Span) -> Self {
        Node {
            id: id.into(),
            content: NodeContent::Span(span),
            polarity: Polarity::None,
            negated: false,
            extra: Extra::new(),
        }
    }

    pub fn with_polarity(mut self, polarity: Polarity) -> Self {
        self.polarity = polarity;
        self
    }

    pub fn negated(mut self) -> Self {
        self.negated = true;
        self
    }

    pub fn span_ref(&self) -> Option<&Span> {
        match &self.content {
            NodeContent::Span(span) => Some(span),
            NodeContent::CentralX => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    Promote,
    Suppress,
    MoreImportant,
    Contradiction,
    RationaleCondition,
    Acknowledgement,
    Nullify,
    Limit,
    Function,
}

impl RelationKind {
    pub const ALL: [RelationKind; 9] = [
        RelationKind::Promote,
        RelationKind::Suppress,
        RelationKind::MoreImportant,
        RelationKind::Contradiction,
        RelationKind::RationaleCondition,
        RelationKind::Acknowledgement,
        RelationKind::Nullify,
        RelationKind::Limit,
        RelationKind::Function,
    ];

    pub fn is_causal(self) -> bool {
        matches!(self, RelationKind::Promote | RelationKind::Suppress)
    }

    /// Acknowledgement, Nullify and Limit link the CA side to the IA side.
    pub fn is_attack_region_kind(self) -> bool {
        matches!(
            self,
            RelationKind::Acknowledgement | RelationKind::Nullify | RelationKind::Limit
        )
    }

    /// Nullify and Limit, the relations that deny IA logic.
    pub fn is_attacking(self) -> bool {
        matches!(self, RelationKind::Nullify | RelationKind::Limit)
    }

    /// Flips Promote and Suppress; other kinds are returned unchanged.
    pub fn flipped(self) -> RelationKind {
        match self {
            RelationKind::Promote => RelationKind::Suppress,
            RelationKind::Suppress => RelationKind::Promote,
            other => other,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RelationKind::Promote => "Promote",
            RelationKind::Suppress => "Suppress",
            RelationKind::MoreImportant => "MoreImportant",
            RelationKind::Contradiction => "Contradiction",
            RelationKind::RationaleCondition => "RationaleCondition",
            RelationKind::Acknowledgement => "Acknowledgement",
            RelationKind::Nullify => "Nullify",
            RelationKind::Limit => "Limit",
            RelationKind::Function => "Function",
        }
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The three agreement units of an annotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    IaPattern,
    CaPattern,
    AttackPattern,
}

impl Region {
    pub const ALL: [Region; 3] = [Region::IaPattern, Region::CaPattern, Region::AttackPattern];

    pub fn name(self) -> &'static str {
        match self {
            Region::IaPattern => "IA-pattern",
            Region::CaPattern => "CA-pattern",
            Region::AttackPattern => "attack-pattern",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One argument slot of a relation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawArgRef", into = "RawArgRef")]
pub enum ArgRef {
    Node(String),
    Relation(String),
    /// The synthetic IA conclusion implied by the base pattern.
    IaConclusion,
    /// The synthetic CA conclusion implied by the base pattern.
    CaConclusion,
}

impl ArgRef {
    pub fn node(id: impl Into<String>) -> Self {
        ArgRef::Node(id.into())
    }

    pub fn relation(id: impl Into<String>) -> Self {
        ArgRef::Relation(id.into())
    }

    pub fn as_node(&self) -> Option<&str> {
        match self {
            ArgRef::Node(id) => Some(id),
            _ => None,
        }
    }

    pub fn as_relation(&self) -> Option<&str> {
        match self {
            ArgRef::Relation(id) => Some(id),
            _ => None,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RawArgRef {
    ref_type: RefType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ref_id: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RefType {
    Node,
    Relation,
    IaConclusion,
    CaConclusion,
}

impl TryFrom<RawArgRef> for ArgRef {
    type Error = String;

    fn try_from(raw: RawArgRef) -> Result<Self, Self::Error> {
        match (raw.ref_type, raw.ref_id) {
            (RefType::Node, Some(id)) => Ok(ArgRef::Node(id)),
            (RefType::Relation, Some(id)) => Ok(ArgRef::Relation(id)),
            (RefType::Node | RefType::Relation, None) => {
                Err("ref_id is required for node and relation references".to_string())
            }
            (RefType::IaConclusion, _) => Ok(ArgRef::IaConclusion),
            (RefType::CaConclusion, _) => Ok(ArgRef::CaConclusion),
        }
    }
}

impl From<ArgRef> for RawArgRef {
    fn from(arg: ArgRef) -> Self {
        let (ref_type, ref_id) = match arg {
            ArgRef::Node(id) => (RefType::Node, Some(id)),
            ArgRef::Relation(id) => (RefType::Relation, Some(id)),
            ArgRef::IaConclusion => (RefType::IaConclusion, None),
            ArgRef::CaConclusion => (RefType::CaConclusion, None),
        };
        RawArgRef { ref_type, ref_id }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationInstance {
    pub id: String,
    pub kind: RelationKind,
    pub args: Vec<ArgRef>,
    #[serde(default)]
    pub negated: bool,
    #[serde(default)]
    pub mitigated: bool,
    pub region: Region,
    #[serde(skip)]
    pub extra: Extra,
}

impl RelationInstance {
    pub fn new(id: impl Into<String>, kind: RelationKind, region: Region, args: Vec<ArgRef>) -> Self {
        RelationInstance {
            id: id.into(),
            kind,
            args,
            negated: false,
            mitigated: false,
            region,
            extra: Extra::new(),
        }
    }

    pub fn negated(mut self) -> Self {
        self.negated = true;
        self
    }

    pub fn mitigated(mut self) -> Self {
        self.mitigated = true;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Annotated,
    NotApplicable,
}

/// Stance template. Pattern 1: the IA argues against `X`; pattern 2: for it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasePattern {
    Pattern1,
    Pattern2,
}

impl BasePattern {
    pub fn ia_predicate(self) -> &'static str {
        match self {
            BasePattern::Pattern1 => "is negative",
            BasePattern::Pattern2 => "is positive",
        }
    }

    pub fn ca_predicate(self) -> &'static str {
        match self {
            BasePattern::Pattern1 => "is not negative",
            BasePattern::Pattern2 => "is not positive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    pub debate_id: String,
    pub annotator_id: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_pattern: Option<BasePattern>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub central_concept: Option<Span>,
    #[serde(default)]
    pub nodes: Vec<Node>,
    #[serde(default)]
    pub relations: Vec<RelationInstance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text_form: Option<String>,
    #[serde(skip)]
    pub extra: Extra,
}

/// Starts an annotation: fixes the base pattern and fills slot `X`.
pub fn new_annotation(
    debate: &Debate,
    annotator: impl Into<String>,
    base_pattern: BasePattern,
    central: Span,
) -> Result<Annotation, SpanError> {
    resolve_span(debate, &central)?;
    Ok(Annotation {
        debate_id: debate.id.clone(),
        annotator_id: annotator.into(),
        status: Status::Annotated,
        base_pattern: Some(base_pattern),
        central_concept: Some(central),
        nodes: Vec::new(),
        relations: Vec::new(),
        text_form: None,
        extra: Extra::new(),
    })
}

impl Annotation {
    /// An explicit "the scheme cannot represent this attack" mark.
    pub fn not_applicable(debate_id: impl Into<String>, annotator: impl Into<String>) -> Self {
        Annotation {
            debate_id: debate_id.into(),
            annotator_id: annotator.into(),
            status: Status::NotApplicable,
            base_pattern: None,
            central_concept: None,
            nodes: Vec::new(),
            relations: Vec::new(),
            text_form: None,
            extra: Extra::new(),
        }
    }

    pub fn is_not_applicable(&self) -> bool {
        self.status == Status::NotApplicable
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn relation(&self, id: &str) -> Option<&RelationInstance> {
        self.relations.iter().find(|r| r.id == id)
    }

    pub fn relations_in(&self, region: Region) -> impl Iterator<Item = &RelationInstance> {
        self.relations.iter().filter(move |r| r.region == region)
    }

    pub fn relation_index(&self) -> HashMap<&str, &RelationInstance> {
        self.relations.iter().map(|r| (r.id.as_str(), r)).collect()
    }

    pub fn node_index(&self) -> HashMap<&str, &Node> {
        self.nodes.iter().map(|n| (n.id.as_str(), n)).collect()
    }

    pub fn central_text(&self) -> Option<&str> {
        self.central_concept.as_ref().map(|s| s.text.as_str())
    }

    /// Text of a node's filler: its span, or the central concept for `X`.
    pub fn node_text<'a>(&'a self, node: &'a Node) -> Option<&'a str> {
        match &node.content {
            NodeContent::Span(span) => Some(&span.text),
            NodeContent::CentralX => self.central_text(),
        }
    }

    /// The conclusion sentence an anchor stands for, e.g. `death penalty is negative`.
    pub fn conclusion(&self, anchor: &ArgRef) -> Option<String> {
        let base = self.base_pattern?;
        let x = self.central_text()?;
        match anchor {
            ArgRef::IaConclusion => Some(format!("{x} {}", base.ia_predicate())),
            ArgRef::CaConclusion => Some(format!("{x} {}", base.ca_predicate())),
            _ => None,
        }
    }

    /// Removes a relation and, transitively, every relation that references it.
    pub fn remove_relation_cascade(&mut self, id: &str) {
        let mut doomed = vec![id.to_string()];
        while let Some(target) = doomed.pop() {
            self.relations.retain(|r| r.id != target);
            for r in &self.relations {
                if r.args.iter().any(|a| a.as_relation() == Some(target.as_str())) && !doomed.contains(&r.id) {
                    doomed.push(r.id.clone());
                }
            }
        }
    }
}

/// A causal statement derived by joining a chain of causal relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedCausal {
    pub kind: RelationKind,
    pub antecedent: String,
    pub consequent: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComposeError {
    #[error("a function joins at least two relations, got {0}")]
    TooShort(usize),
    #[error("relation {0} is not a causal (promote/suppress) relation between two nodes")]
    NonCausal(String),
    #[error("chain broken: consequent of {from} is not the antecedent of {to}")]
    ChainBroken { from: String, to: String },
}

/// Sign product of two causal kinds: Promote is +, Suppress is −.
pub fn compose_kinds(first: RelationKind, second: RelationKind) -> RelationKind {
    if first == second {
        RelationKind::Promote
    } else {
        RelationKind::Suppress
    }
}

/// Joins a chain of causal relations into one derived causal statement.
///
/// The consequent node of each link must be the antecedent node of the next.
pub fn compose_function(chain: &[&RelationInstance]) -> Result<DerivedCausal, ComposeError> {
    if chain.len() < 2 {
        return Err(ComposeError::TooShort(chain.len()));
    }
    let endpoints = |r: &RelationInstance| -> Result<(String, String), ComposeError> {
        match (r.kind.is_causal(), r.args.as_slice()) {
            (true, [ArgRef::Node(a), ArgRef::Node(b)]) => Ok((a.clone(), b.clone())),
            _ => Err(ComposeError::NonCausal(r.id.clone())),
        }
    };
    let (antecedent, mut consequent) = endpoints(chain[0])?;
    let mut kind = chain[0].kind;
    for pair in chain.windows(2) {
        let (next_ante, next_cons) = endpoints(pair[1])?;
        if next_ante != consequent {
            return Err(ComposeError::ChainBroken {
                from: pair[0].id.clone(),
                to: pair[1].id.clone(),
            });
        }
        kind = compose_kinds(kind, pair[1].kind);
        consequent = next_cons;
    }
    Ok(DerivedCausal {
        kind,
        antecedent,
        consequent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn debate() -> Debate {
        Debate::new(
            "d1",
            "Death penalty should be abolished",
            "The death penalty deprives criminals of rehabilitation.",
            "Executions deter crime → surely.",
        )
    }

    #[test]
    fn resolves_valid_span() {
        let d = debate();
        let span = Span::find(&d, Source::Ia, "death penalty").unwrap();
        assert_eq!(span.start, 4);
        assert_eq!(resolve_span(&d, &span).unwrap(), "death penalty");
    }

    #[test]
    fn offsets_count_scalar_values() {
        let d = debate();
        let span = Span::find(&d, Source::Ca, "surely").unwrap();
        // "Executions deter crime → " is 25 chars but 27 bytes
        assert_eq!(span.start, 25);
        assert_eq!(resolve_span(&d, &span).unwrap(), "surely");
    }

    #[test]
    fn span_past_end_is_out_of_bounds() {
        let d = debate();
        let len = d.ia_text.chars().count();
        let span = Span {
            source: Source::Ia,
            start: len - 2,
            end: len + 3,
            text: "x".into(),
        };
        assert!(matches!(resolve_span(&d, &span), Err(SpanError::OutOfBounds { .. })));
        assert!(Span::from_offsets(&d, Source::Ia, 0, len).is_ok());
        assert!(Span::from_offsets(&d, Source::Ia, 0, len + 1).is_err());
    }

    #[test]
    fn stale_text_is_a_mismatch() {
        let mut d = debate();
        let span = Span::find(&d, Source::Ia, "criminals").unwrap();
        d.ia_text = d.ia_text.replace("criminals", "offenders");
        assert!(matches!(resolve_span(&d, &span), Err(SpanError::TextMismatch { .. })));
    }

    #[test]
    fn new_annotation_fixes_conclusions() {
        let d = debate();
        let x = Span::find(&d, Source::Ia, "death penalty").unwrap();
        let ann = new_annotation(&d, "a1", BasePattern::Pattern1, x).unwrap();
        assert!(ann.nodes.is_empty() && ann.relations.is_empty());
        assert_eq!(ann.conclusion(&ArgRef::IaConclusion).unwrap(), "death penalty is negative");
        assert_eq!(ann.conclusion(&ArgRef::CaConclusion).unwrap(), "death penalty is not negative");
    }

    #[test]
    fn new_annotation_rejects_degenerate_span() {
        let d = debate();
        let bad = Span {
            source: Source::Ia,
            start: 5,
            end: 5,
            text: String::new(),
        };
        assert!(matches!(
            new_annotation(&d, "a1", BasePattern::Pattern1, bad),
            Err(SpanError::OutOfBounds { .. })
        ));
    }

    fn causal(id: &str, kind: RelationKind, a: &str, b: &str) -> RelationInstance {
        RelationInstance::new(id, kind, Region::IaPattern, vec![ArgRef::node(a), ArgRef::node(b)])
    }

    #[test]
    fn composes_homework_chain() {
        let r1 = causal("r1", RelationKind::Suppress, "homework", "free-time");
        let r2 = causal("r2", RelationKind::Promote, "free-time", "unproductive");
        let derived = compose_function(&[&r1, &r2]).unwrap();
        assert_eq!(
            derived,
            DerivedCausal {
                kind: RelationKind::Suppress,
                antecedent: "homework".into(),
                consequent: "unproductive".into()
            }
        );
    }

    #[test]
    fn compose_rejects_broken_and_non_causal_chains() {
        let r1 = causal("r1", RelationKind::Promote, "a", "b");
        let r2 = causal("r2", RelationKind::Promote, "c", "d");
        assert!(matches!(compose_function(&[&r1, &r2]), Err(ComposeError::ChainBroken { .. })));
        let mi = RelationInstance::new(
            "m",
            RelationKind::MoreImportant,
            Region::CaPattern,
            vec![ArgRef::node("b"), ArgRef::node("c")],
        );
        assert_eq!(compose_function(&[&r1, &mi]), Err(ComposeError::NonCausal("m".into())));
        assert_eq!(compose_function(&[&r1]), Err(ComposeError::TooShort(1)));
    }

    #[test]
    fn cascade_removes_dependents() {
        let mut ann = Annotation::not_applicable("d", "a");
        ann.relations = vec![
            causal("r1", RelationKind::Promote, "a", "b"),
            RelationInstance::new(
                "ack",
                RelationKind::Acknowledgement,
                Region::AttackPattern,
                vec![ArgRef::relation("r2"), ArgRef::relation("r1")],
            ),
            causal("r2", RelationKind::Promote, "c", "d"),
        ];
        ann.remove_relation_cascade("r1");
        let ids: Vec<_> = ann.relations.iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, ["r2"]);
    }

    #[test]
    fn arg_ref_wire_shape() {
        let v = serde_json::to_value(ArgRef::node("n1")).unwrap();
        assert_eq!(v, serde_json::json!({"ref_type": "node", "ref_id": "n1"}));
        let v = serde_json::to_value(ArgRef::IaConclusion).unwrap();
        assert_eq!(v, serde_json::json!({"ref_type": "ia_conclusion"}));
        let err = serde_json::from_value::<ArgRef>(serde_json::json!({"ref_type": "relation"}));
        assert!(err.is_err());
    }
}
