//! Verbalizes an annotation into its text form.
//!
//! Output is one line per block: `IA: …`, `CA: …` and, when the
//! attack-pattern is non-empty, `Attack: …`. Each premise block reads
//! `{conclusion} because {premise}`. The phrase table below is a golden
//! contract; wording changes must update the stored text forms.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::model::{compose_function, Annotation, ArgRef, Debate, Node, Region, RelationInstance, RelationKind};
use crate::validate::{validate, ValidationReport};

pub const MORE_IMPORTANT: &str = "is more important/severe/has greater weight than";
pub const RATIONALE: &str = "given the rationale/condition that";
pub const MITIGATED: &str = "can be mitigated";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("a Not-Applicable annotation has no text form")]
    NotApplicable,
    #[error("cannot render an invalid annotation: {}", .0.errors.iter().map(|d| d.code.as_str()).collect::<Vec<_>>().join(", "))]
    Invalid(ValidationReport),
}

/// Renders a valid annotation. Warnings do not block rendering.
pub fn render_text_form(ann: &Annotation, debate: &Debate) -> Result<String, RenderError> {
    if ann.is_not_applicable() {
        return Err(RenderError::NotApplicable);
    }
    let report = validate(ann, debate);
    if !report.is_valid {
        return Err(RenderError::Invalid(report));
    }
    Ok(Renderer::new(ann).render())
}

struct Renderer<'a> {
    ann: &'a Annotation,
    nodes: HashMap<&'a str, &'a Node>,
    relations: HashMap<&'a str, &'a RelationInstance>,
}

impl<'a> Renderer<'a> {
    fn new(ann: &'a Annotation) -> Self {
        Renderer {
            ann,
            nodes: ann.node_index(),
            relations: ann.relation_index(),
        }
    }

    fn render(&self) -> String {
        let mut lines = vec![
            self.premise_block("IA", &ArgRef::IaConclusion, Region::IaPattern),
            self.premise_block("CA", &ArgRef::CaConclusion, Region::CaPattern),
        ];
        let mut attacks: Vec<&RelationInstance> = self.ann.relations_in(Region::AttackPattern).collect();
        // acknowledgements first, then document order
        attacks.sort_by_key(|r| r.kind != RelationKind::Acknowledgement);
        if !attacks.is_empty() {
            let items: Vec<String> = attacks.iter().map(|r| self.relation(r)).collect();
            lines.push(format!("Attack: {}", items.join("; ")));
        }
        lines.join("\n")
    }

    fn premise_block(&self, tag: &str, anchor: &ArgRef, region: Region) -> String {
        let conclusion = self.conclusion(anchor);
        let members: Vec<&RelationInstance> = self.ann.relations_in(region).collect();
        let referenced: BTreeSet<&str> = members
            .iter()
            .flat_map(|r| r.args.iter().filter_map(ArgRef::as_relation))
            .collect();
        let roots: Vec<String> = members
            .iter()
            .filter(|r| !referenced.contains(r.id.as_str()))
            .map(|r| self.relation(r))
            .collect();
        if roots.is_empty() {
            format!("{tag}: {{{conclusion}}}")
        } else {
            format!("{tag}: {{{conclusion}}} because {{{}}}", roots.join(" and "))
        }
    }

    fn conclusion(&self, anchor: &ArgRef) -> String {
        let base = self.ann.base_pattern.expect("validated annotations have a base pattern");
        let x = quote(self.ann.central_text().unwrap_or_default());
        match anchor {
            ArgRef::IaConclusion => format!("{x} {}", base.ia_predicate()),
            _ => format!("{x} {}", base.ca_predicate()),
        }
    }

    fn node_base(&self, node: &Node) -> String {
        let text = quote(self.ann.node_text(node).unwrap_or_default());
        if node.negated {
            format!("no {text}")
        } else {
            text
        }
    }

    fn polarity_suffix(node: &Node) -> Option<&'static str> {
        match node.polarity {
            crate::model::Polarity::Good => Some("which is good"),
            crate::model::Polarity::Bad => Some("which is bad"),
            crate::model::Polarity::None => None,
        }
    }

    /// Node as it appears in a causal slot: polarity is parenthesized.
    fn causal_node(&self, id: &str) -> String {
        let node = self.nodes[id];
        match Self::polarity_suffix(node) {
            Some(suffix) => format!("({} {suffix})", self.node_base(node)),
            None => self.node_base(node),
        }
    }

    fn plain_node(&self, node: &Node) -> String {
        match Self::polarity_suffix(node) {
            Some(suffix) => format!("{} {suffix}", self.node_base(node)),
            None => self.node_base(node),
        }
    }

    /// Argument of a non-causal relation: nested relations go in braces.
    fn braced(&self, arg: &ArgRef) -> String {
        match arg {
            ArgRef::Node(id) => self.plain_node(self.nodes[id.as_str()]),
            ArgRef::Relation(id) => format!("{{{}}}", self.relation(self.relations[id.as_str()])),
            anchor => format!("{{{}}}", self.conclusion(anchor)),
        }
    }

    fn inline(&self, arg: &ArgRef) -> String {
        match arg {
            ArgRef::Node(id) => self.plain_node(self.nodes[id.as_str()]),
            ArgRef::Relation(id) => self.relation(self.relations[id.as_str()]),
            anchor => self.conclusion(anchor),
        }
    }

    fn causal_phrase(&self, kind: RelationKind, negated: bool, ante: &str, cons: &str) -> String {
        let verb = if kind == RelationKind::Promote { "promote" } else { "suppress" };
        let ante = self.causal_node(ante);
        let cons = self.causal_node(cons);
        if negated {
            format!("{ante} doesn't {verb} {cons}")
        } else {
            format!("{ante} {verb} {cons}")
        }
    }

    fn relation(&self, rel: &RelationInstance) -> String {
        let a = &rel.args;
        match rel.kind {
            RelationKind::Promote | RelationKind::Suppress => {
                let ante = a[0].as_node().expect("validated causal args are nodes");
                let cons = a[1].as_node().expect("validated causal args are nodes");
                let phrase = self.causal_phrase(rel.kind, rel.negated, ante, cons);
                if rel.mitigated {
                    format!("{phrase} {MITIGATED}")
                } else {
                    phrase
                }
            }
            RelationKind::MoreImportant => {
                let phrase = if rel.negated {
                    "is not more important/severe/has greater weight than"
                } else {
                    MORE_IMPORTANT
                };
                format!("{} {phrase} {}", self.braced(&a[0]), self.braced(&a[1]))
            }
            RelationKind::Contradiction => {
                let verb = if rel.negated { "doesn't contradict" } else { "contradicts" };
                format!("{} {verb} {}", self.braced(&a[0]), self.braced(&a[1]))
            }
            RelationKind::RationaleCondition => {
                let link = if rel.negated { "not given the rationale/condition that" } else { RATIONALE };
                format!("{} {link} {}", self.inline(&a[0]), self.inline(&a[1]))
            }
            RelationKind::Function => {
                let chain: Vec<&RelationInstance> = a
                    .iter()
                    .map(|arg| self.relations[arg.as_relation().expect("validated function args are relations")])
                    .collect();
                let derived = compose_function(&chain).expect("validated function chains compose");
                let parts: Vec<String> = chain.iter().map(|r| format!("{{{}}}", self.relation(r))).collect();
                let (last, init) = parts.split_last().expect("at least two links");
                let produce = if rel.negated { "would not produce" } else { "would produce" };
                format!(
                    "joining {} and {last} {produce} {{{}}}",
                    init.join(", "),
                    self.causal_phrase(derived.kind, false, &derived.antecedent, &derived.consequent)
                )
            }
            RelationKind::Acknowledgement | RelationKind::Nullify | RelationKind::Limit => {
                let verb = match rel.kind {
                    RelationKind::Acknowledgement => "acknowledge",
                    RelationKind::Nullify => "nullify",
                    _ => "limit",
                };
                let verb = if rel.negated { format!("doesn't {verb}") } else { verb.to_string() };
                format!("{{{}}} which {verb} {{{}}}", self.inline(&a[0]), self.inline(&a[1]))
            }
        }
    }
}

fn quote(text: &str) -> String {
    format!("\"{text}\"")
}
