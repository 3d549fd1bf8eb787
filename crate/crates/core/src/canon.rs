//! Canonical forms and markable signatures.
//!
//! Annotators may encode the same reading in different ways. The rules here
//! rewrite an annotation into a canonical form so that equivalent encodings
//! compare equal, and [`signature`] serializes one markable of the canonical
//! form into a span-free structural label used as the agreement category.
//!
//! Rule registry, version [`RULESET_VERSION`]:
//!
//! * `causal-type-a`: `no X promote Y` is rewritten to `X suppress Y` and
//!   `no X suppress Y` to `X promote Y`. Only node negation on the antecedent
//!   is moved; relation negation (`X doesn't promote Y`) is kept because the
//!   absence of an effect is not the inverse effect.
//! * `auxiliary-rationale` (opt-in): a rationale/condition attached to an
//!   argument of a value judgement is dropped, unless it is the only
//!   relation of its markable.
//!
//! Only these two equivalences are implemented. Further rules can be
//! registered under a new ruleset version; labels produced under an older
//! version are not rewritten retroactively.
//!
//! # Label syntax
//!
//! * `X` is the central concept, `N` any other filler; attributes follow in
//!   brackets: `N[no,good]`, `X[no]`.
//! * A relation is `Kind[flags](arg, ...)` with flags `neg` and `mit`, e.g.
//!   `Promote[neg](X, N[bad])`. Contradiction arguments are sorted; all
//!   other argument lists keep their order.
//! * `IA_CONCLUSION` / `CA_CONCLUSION` are the conclusion anchors.
//! * In the attack-pattern, arguments that live in a premise markable are
//!   abbreviated to their side and head kind, e.g. `Nullify(CA:RationaleCondition, IA_CONCLUSION)`.
//! * Top-level relations of a markable are sorted and joined with ` & `;
//!   an empty markable is `EMPTY` and a Not-Applicable annotation is `NA`.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Annotation, ArgRef, Node, NodeContent, Polarity, Region, RelationInstance, RelationKind, Source};
use crate::validate::{node_regions, validate_structure, ValidationReport, ValidatorConfig};

pub const RULESET_VERSION: &str = "1";
pub const NA_LABEL: &str = "NA";
pub const EMPTY_LABEL: &str = "EMPTY";

/// A semantics-preserving rewrite. `apply` reports whether anything changed.
pub trait Rule: Send + Sync {
    fn id(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn apply(&self, ann: &mut Annotation) -> bool;
}

pub struct CausalTypeA;

impl Rule for CausalTypeA {
    fn id(&self) -> &'static str {
        "causal-type-a"
    }

    fn description(&self) -> &'static str {
        "no X promote Y == X suppress Y; no X suppress Y == X promote Y"
    }

    fn apply(&self, ann: &mut Annotation) -> bool {
        let mut changed = false;
        let negated: Vec<String> = ann.nodes.iter().filter(|n| n.negated).map(|n| n.id.clone()).collect();
        for node_id in negated {
            let mut antecedent_of = Vec::new();
            let mut other_uses = 0usize;
            for (i, rel) in ann.relations.iter().enumerate() {
                for (pos, arg) in rel.args.iter().enumerate() {
                    if arg.as_node() == Some(node_id.as_str()) {
                        if rel.kind.is_causal() && pos == 0 {
                            antecedent_of.push(i);
                        } else {
                            other_uses += 1;
                        }
                    }
                }
            }
            if antecedent_of.is_empty() {
                continue;
            }
            let target = if other_uses == 0 {
                let node = ann.nodes.iter_mut().find(|n| n.id == node_id).expect("collected from nodes");
                node.negated = false;
                node_id.clone()
            } else {
                // The negated node is still needed elsewhere: give the causal
                // antecedents their own un-negated copy.
                let mut copy = ann.nodes.iter().find(|n| n.id == node_id).expect("collected from nodes").clone();
                let mut copy_id = format!("{node_id}~pos");
                while ann.node(&copy_id).is_some() || ann.relation(&copy_id).is_some() {
                    copy_id.push('~');
                }
                copy.id = copy_id.clone();
                copy.negated = false;
                ann.nodes.push(copy);
                copy_id
            };
            for i in antecedent_of {
                let rel = &mut ann.relations[i];
                rel.args[0] = ArgRef::Node(target.clone());
                rel.kind = rel.kind.flipped();
            }
            changed = true;
        }
        changed
    }
}

pub struct AuxiliaryRationale;

impl AuxiliaryRationale {
    fn removable(ann: &Annotation, rat: &RelationInstance) -> bool {
        if rat.kind != RelationKind::RationaleCondition || rat.args.len() != 2 {
            return false;
        }
        if ann.relations_in(rat.region).count() <= 1 {
            return false;
        }
        let supported = &rat.args[0];
        let self_ref = ArgRef::Relation(rat.id.clone());
        let value_args: Vec<&ArgRef> = ann
            .relations
            .iter()
            .filter(|r| r.kind == RelationKind::MoreImportant)
            .flat_map(|r| r.args.iter())
            .collect();
        let auxiliary = value_args.contains(&supported) || value_args.contains(&&self_ref);
        if !auxiliary {
            return false;
        }
        let referenced = ann.relations.iter().any(|r| r.args.contains(&self_ref));
        match supported {
            // Rewiring references onto the supported relation must not move
            // them to another markable.
            ArgRef::Relation(id) => ann.relation(id).is_some_and(|s| s.region == rat.region),
            ArgRef::Node(_) => !referenced,
            _ => false,
        }
    }
}

impl Rule for AuxiliaryRationale {
    fn id(&self) -> &'static str {
        "auxiliary-rationale"
    }

    fn description(&self) -> &'static str {
        "drop a rationale/condition attached to an argument of a value judgement"
    }

    fn apply(&self, ann: &mut Annotation) -> bool {
        let Some(pos) = ann.relations.iter().position(|r| Self::removable(ann, r)) else {
            return false;
        };
        let rat = ann.relations.remove(pos);
        let old = ArgRef::Relation(rat.id.clone());
        for rel in &mut ann.relations {
            for arg in &mut rel.args {
                if *arg == old {
                    *arg = rat.args[0].clone();
                }
            }
        }
        if let ArgRef::Node(reason) = &rat.args[1] {
            let still_used = ann.relations.iter().any(|r| r.args.iter().any(|a| a.as_node() == Some(reason)));
            if !still_used {
                ann.nodes.retain(|n| &n.id != reason);
            }
        }
        true
    }
}

/// An ordered set of rewrite rules applied to a fixpoint.
pub struct RuleSet {
    rules: Vec<Box<dyn Rule>>,
}

impl RuleSet {
    pub fn standard(drop_aux_rationale: bool) -> Self {
        let mut rules: Vec<Box<dyn Rule>> = vec![Box::new(CausalTypeA)];
        if drop_aux_rationale {
            rules.push(Box::new(AuxiliaryRationale));
        }
        RuleSet { rules }
    }

    pub fn version(&self) -> &'static str {
        RULESET_VERSION
    }

    pub fn ids(&self) -> Vec<&'static str> {
        self.rules.iter().map(|r| r.id()).collect()
    }

    pub fn rules(&self) -> impl Iterator<Item = &dyn Rule> {
        self.rules.iter().map(|r| r.as_ref())
    }

    pub fn apply(&self, ann: &Annotation) -> Annotation {
        let mut out = ann.clone();
        if out.is_not_applicable() {
            return out;
        }
        // every rule strictly shrinks negations or relations, so this terminates
        loop {
            let mut changed = false;
            for rule in &self.rules {
                while rule.apply(&mut out) {
                    changed = true;
                }
            }
            if !changed {
                return out;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonError {
    #[error("cannot canonicalize an invalid annotation: {}", codes(.0))]
    Invalid(ValidationReport),
}

fn codes(report: &ValidationReport) -> String {
    report.errors.iter().map(|d| d.code.as_str()).collect::<Vec<_>>().join(", ")
}

/// Rewrites a structurally valid annotation into canonical form.
pub fn canonicalize(ann: &Annotation, drop_aux_rationale: bool) -> Result<Annotation, CanonError> {
    let report = validate_structure(ann, &ValidatorConfig::default());
    if !report.is_valid {
        return Err(CanonError::Invalid(report));
    }
    Ok(canonical_form(ann, drop_aux_rationale))
}

/// Canonical form without the validity precondition; total on any input.
pub fn canonical_form(ann: &Annotation, drop_aux_rationale: bool) -> Annotation {
    RuleSet::standard(drop_aux_rationale).apply(ann)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MarkableSignature {
    pub markable: Region,
    pub label: String,
}

/// Canonical structural label of one markable.
pub fn signature(ann: &Annotation, markable: Region, drop_aux_rationale: bool) -> MarkableSignature {
    let label = if ann.is_not_applicable() {
        NA_LABEL.to_string()
    } else {
        let canon = canonical_form(ann, drop_aux_rationale);
        serialize_region(&canon, markable).label
    };
    MarkableSignature { markable, label }
}

/// Label and ordered span texts of one markable of an already-canonical annotation.
///
/// Spans are listed in the same order the label serializes their nodes, so
/// two annotations with equal labels pair their spans positionally.
pub fn serialize_region(canon: &Annotation, region: Region) -> SerializedMarkable {
    if canon.is_not_applicable() {
        return SerializedMarkable {
            label: NA_LABEL.to_string(),
            spans: Vec::new(),
        };
    }
    let ser = Serializer::new(canon);
    let members: Vec<&RelationInstance> = canon.relations_in(region).collect();
    if members.is_empty() {
        return SerializedMarkable {
            label: EMPTY_LABEL.to_string(),
            spans: Vec::new(),
        };
    }
    let referenced: BTreeSet<&str> = members
        .iter()
        .flat_map(|r| r.args.iter().filter_map(ArgRef::as_relation))
        .collect();
    let mut covered: BTreeSet<&str> = BTreeSet::new();
    let mut roots: Vec<SerializedMarkable> = Vec::new();
    for rel in members.iter().filter(|r| !referenced.contains(r.id.as_str())) {
        roots.push(ser.relation(rel, region, &mut Vec::new(), &mut covered));
    }
    // relations reachable only through a cycle have no root; list them too
    for rel in &members {
        if !covered.contains(rel.id.as_str()) {
            roots.push(ser.relation(rel, region, &mut Vec::new(), &mut covered));
        }
    }
    roots.sort();
    SerializedMarkable {
        label: roots.iter().map(|r| r.label.as_str()).collect::<Vec<_>>().join(" & "),
        spans: roots.into_iter().flat_map(|r| r.spans).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SerializedMarkable {
    pub label: String,
    pub spans: Vec<String>,
}

struct Serializer<'a> {
    ann: &'a Annotation,
    nodes: HashMap<&'a str, &'a Node>,
    relations: HashMap<&'a str, &'a RelationInstance>,
    node_regions: HashMap<&'a str, BTreeSet<Region>>,
}

impl<'a> Serializer<'a> {
    fn new(ann: &'a Annotation) -> Self {
        Serializer {
            ann,
            nodes: ann.node_index(),
            relations: ann.relation_index(),
            node_regions: node_regions(ann),
        }
    }

    fn node(&self, node: &Node) -> SerializedMarkable {
        let mut attrs = Vec::new();
        if node.negated {
            attrs.push("no");
        }
        match node.polarity {
            Polarity::Good => attrs.push("good"),
            Polarity::Bad => attrs.push("bad"),
            Polarity::None => {}
        }
        let head = match node.content {
            NodeContent::CentralX => "X",
            NodeContent::Span(_) => "N",
        };
        let label = if attrs.is_empty() {
            head.to_string()
        } else {
            format!("{head}[{}]", attrs.join(","))
        };
        SerializedMarkable {
            label,
            spans: self.ann.node_text(node).map(str::to_string).into_iter().collect(),
        }
    }

    fn side_prefix(&self, region: Region) -> &'static str {
        match region {
            Region::IaPattern => "IA:",
            Region::CaPattern => "CA:",
            Region::AttackPattern => "",
        }
    }

    fn arg(
        &self,
        arg: &ArgRef,
        context: Region,
        stack: &mut Vec<&'a str>,
        covered: &mut BTreeSet<&'a str>,
    ) -> SerializedMarkable {
        let leaf = |label: String| SerializedMarkable { label, spans: Vec::new() };
        match arg {
            ArgRef::IaConclusion => leaf("IA_CONCLUSION".into()),
            ArgRef::CaConclusion => leaf("CA_CONCLUSION".into()),
            ArgRef::Node(id) => match self.nodes.get(id.as_str()) {
                Some(node) if context == Region::AttackPattern => {
                    let side = match self.node_regions.get(id.as_str()).and_then(|r| r.iter().next()) {
                        Some(region) => self.side_prefix(*region),
                        None => match node.span_ref().map(|s| s.source) {
                            Some(Source::Ia) => "IA:",
                            Some(Source::Ca) => "CA:",
                            None => "",
                        },
                    };
                    leaf(format!("{side}{}", self.node(node).label))
                }
                Some(node) => self.node(node),
                None => leaf("?".into()),
            },
            ArgRef::Relation(id) => match self.relations.get(id.as_str()) {
                Some(rel) if context == Region::AttackPattern && rel.region != Region::AttackPattern => {
                    covered.insert(&rel.id);
                    leaf(format!("{}{}", self.side_prefix(rel.region), rel.kind.name()))
                }
                Some(rel) => self.relation(rel, context, stack, covered),
                None => leaf("?".into()),
            },
        }
    }

    fn relation(
        &self,
        rel: &'a RelationInstance,
        context: Region,
        stack: &mut Vec<&'a str>,
        covered: &mut BTreeSet<&'a str>,
    ) -> SerializedMarkable {
        if stack.contains(&rel.id.as_str()) {
            return SerializedMarkable {
                label: "@cycle".into(),
                spans: Vec::new(),
            };
        }
        covered.insert(&rel.id);
        stack.push(&rel.id);
        let mut args: Vec<SerializedMarkable> = rel.args.iter().map(|a| self.arg(a, context, stack, covered)).collect();
        stack.pop();
        if rel.kind == RelationKind::Contradiction {
            args.sort();
        }
        let mut flags = Vec::new();
        if rel.negated {
            flags.push("neg");
        }
        if rel.mitigated {
            flags.push("mit");
        }
        let flags = if flags.is_empty() {
            String::new()
        } else {
            format!("[{}]", flags.join(","))
        };
        let label = format!(
            "{}{flags}({})",
            rel.kind.name(),
            args.iter().map(|a| a.label.as_str()).collect::<Vec<_>>().join(", ")
        );
        SerializedMarkable {
            label,
            spans: args.into_iter().flat_map(|a| a.spans).collect(),
        }
    }
}
