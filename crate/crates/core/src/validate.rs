//! Scheme validation with stable diagnostic codes.
//!
//! Codes are a public vocabulary shared by the CLI, the HTTP service and the
//! editor; messages are for humans and may change. Checks run in a fixed
//! order so the same input always yields a byte-identical report.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{
    compose_function, resolve_span, Annotation, ArgRef, Debate, Node, NodeContent, Polarity, Region,
    RelationInstance, RelationKind, Source, Span,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Code {
    #[serde(rename = "E_BASE_MISSING")]
    BaseMissing,
    #[serde(rename = "E_SPAN_MISMATCH")]
    SpanMismatch,
    #[serde(rename = "E_DUPLICATE_ID")]
    DuplicateId,
    #[serde(rename = "E_DANGLING_REF")]
    DanglingRef,
    #[serde(rename = "E_ARITY")]
    Arity,
    #[serde(rename = "E_ARG_KIND")]
    ArgKind,
    #[serde(rename = "E_REGION")]
    Region,
    #[serde(rename = "E_IA_NO_CAUSAL")]
    IaNoCausal,
    #[serde(rename = "E_IA_BUDGET")]
    IaBudget,
    #[serde(rename = "E_CA_BUDGET")]
    CaBudget,
    #[serde(rename = "E_ATTACK_MISSING")]
    AttackMissing,
    #[serde(rename = "E_CYCLE")]
    Cycle,
    #[serde(rename = "W_SPAN_LONG")]
    SpanLong,
    #[serde(rename = "W_NO_POLARITY")]
    NoPolarity,
}

impl Code {
    pub const ALL: [Code; 14] = [
        Code::BaseMissing,
        Code::SpanMismatch,
        Code::DuplicateId,
        Code::DanglingRef,
        Code::Arity,
        Code::ArgKind,
        Code::Region,
        Code::IaNoCausal,
        Code::IaBudget,
        Code::CaBudget,
        Code::AttackMissing,
        Code::Cycle,
        Code::SpanLong,
        Code::NoPolarity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Code::BaseMissing => "E_BASE_MISSING",
            Code::SpanMismatch => "E_SPAN_MISMATCH",
            Code::DuplicateId => "E_DUPLICATE_ID",
            Code::DanglingRef => "E_DANGLING_REF",
            Code::Arity => "E_ARITY",
            Code::ArgKind => "E_ARG_KIND",
            Code::Region => "E_REGION",
            Code::IaNoCausal => "E_IA_NO_CAUSAL",
            Code::IaBudget => "E_IA_BUDGET",
            Code::CaBudget => "E_CA_BUDGET",
            Code::AttackMissing => "E_ATTACK_MISSING",
            Code::Cycle => "E_CYCLE",
            Code::SpanLong => "W_SPAN_LONG",
            Code::NoPolarity => "W_NO_POLARITY",
        }
    }

    pub fn is_warning(self) -> bool {
        matches!(self, Code::SpanLong | Code::NoPolarity)
    }

    /// Short default explanation, for UIs that show a code catalog.
    pub fn summary(self) -> &'static str {
        match self {
            Code::BaseMissing => "annotated without a base pattern or central concept",
            Code::SpanMismatch => "span offsets or text do not match the debate",
            Code::DuplicateId => "node or relation id used more than once",
            Code::DanglingRef => "reference to a missing node, relation or debate",
            Code::Arity => "wrong number of relation arguments",
            Code::ArgKind => "relation argument of the wrong kind",
            Code::Region => "relation placed in or pointing at the wrong markable",
            Code::IaNoCausal => "IA-pattern has no promote/suppress relation",
            Code::IaBudget => "IA-pattern uses more relations/attributes than allowed",
            Code::CaBudget => "CA-pattern uses more relations/attributes than allowed",
            Code::AttackMissing => "attack-pattern has no nullify or limit relation",
            Code::Cycle => "relations reference each other in a cycle",
            Code::SpanLong => "span is longer than the configured limit",
            Code::NoPolarity => "markable uses no good/bad attribute",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub code: Code,
    pub subject_id: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub errors: Vec<Diagnostic>,
    pub warnings: Vec<Diagnostic>,
    pub is_valid: bool,
}

impl ValidationReport {
    fn from_diagnostics(diags: Vec<Diagnostic>) -> Self {
        let (warnings, errors): (Vec<_>, Vec<_>) = diags.into_iter().partition(|d| d.code.is_warning());
        ValidationReport {
            is_valid: errors.is_empty(),
            errors,
            warnings,
        }
    }

    /// Report for an annotation whose debate could not be found.
    pub fn missing_debate(annotation: &Annotation) -> Self {
        ValidationReport::from_diagnostics(vec![Diagnostic {
            code: Code::DanglingRef,
            subject_id: annotation.debate_id.clone(),
            message: format!("debate {:?} is not in the corpus", annotation.debate_id),
        }])
    }

    pub fn error_codes(&self) -> Vec<Code> {
        self.errors.iter().map(|d| d.code).collect()
    }

    pub fn warning_codes(&self) -> Vec<Code> {
        self.warnings.iter().map(|d| d.code).collect()
    }

    /// Valid and, when `strict`, free of warnings too.
    pub fn passes(&self, strict: bool) -> bool {
        self.is_valid && (!strict || self.warnings.is_empty())
    }
}

/// What counts against the IA/CA relation-or-attribute budgets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetPolicy {
    pub relations: bool,
    pub polarity_marks: bool,
    pub mitigation: bool,
    pub negation: bool,
}

impl Default for BudgetPolicy {
    fn default() -> Self {
        BudgetPolicy {
            relations: true,
            polarity_marks: true,
            mitigation: true,
            negation: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidatorConfig {
    pub ia_budget: usize,
    pub ca_budget: usize,
    /// Character-length stand-in for "two small sentences".
    pub max_span_chars: usize,
    pub budget: BudgetPolicy,
}

impl Default for ValidatorConfig {
    fn default() -> Self {
        ValidatorConfig {
            ia_budget: 2,
            ca_budget: 3,
            max_span_chars: 240,
            budget: BudgetPolicy::default(),
        }
    }
}

pub fn validate(annotation: &Annotation, debate: &Debate) -> ValidationReport {
    validate_with(annotation, debate, &ValidatorConfig::default())
}

pub fn validate_with(annotation: &Annotation, debate: &Debate, config: &ValidatorConfig) -> ValidationReport {
    Checker::new(annotation, config).run(Some(debate))
}

/// Every check except span resolution, for callers that have no debate text.
pub fn validate_structure(annotation: &Annotation, config: &ValidatorConfig) -> ValidationReport {
    Checker::new(annotation, config).run(None)
}

/// Relation-or-attribute count of one premise markable under `policy`.
///
/// Attack-region relations never count. Good/bad marks are counted once per
/// distinct marked filler in the region.
pub fn region_budget(annotation: &Annotation, region: Region, policy: &BudgetPolicy) -> usize {
    let in_region: Vec<&RelationInstance> = annotation
        .relations
        .iter()
        .filter(|r| r.region == region && !r.kind.is_attack_region_kind())
        .collect();
    let nodes = annotation.node_index();
    let mut marked: BTreeSet<(FillerKey, Polarity)> = BTreeSet::new();
    let mut negated_nodes: BTreeSet<&str> = BTreeSet::new();
    for r in &in_region {
        for id in r.args.iter().filter_map(ArgRef::as_node) {
            if let Some(node) = nodes.get(id) {
                if node.polarity.is_marked() {
                    marked.insert((FillerKey::of(node), node.polarity));
                }
                if node.negated {
                    negated_nodes.insert(&node.id);
                }
            }
        }
    }
    let mut total = 0;
    if policy.relations {
        total += in_region.len();
    }
    if policy.polarity_marks {
        total += marked.len();
    }
    if policy.mitigation {
        // a mitigated flag off a causal relation is already E_ARG_KIND
        total += in_region.iter().filter(|r| r.mitigated && r.kind.is_causal()).count();
    }
    if policy.negation {
        total += negated_nodes.len() + in_region.iter().filter(|r| r.negated).count();
    }
    total
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum FillerKey {
    Central,
    Span(Source, usize, usize),
}

impl FillerKey {
    fn of(node: &Node) -> Self {
        match &node.content {
            NodeContent::CentralX => FillerKey::Central,
            NodeContent::Span(s) => FillerKey::Span(s.source, s.start, s.end),
        }
    }
}

/// Premise regions a node participates in, via direct reference from a
/// non-attack relation.
pub(crate) fn node_regions(annotation: &Annotation) -> HashMap<&str, BTreeSet<Region>> {
    let mut out: HashMap<&str, BTreeSet<Region>> = HashMap::new();
    for r in annotation.relations.iter().filter(|r| !r.kind.is_attack_region_kind()) {
        for id in r.args.iter().filter_map(ArgRef::as_node) {
            out.entry(id).or_default().insert(r.region);
        }
    }
    out
}

#[derive(Clone, Copy)]
enum ArgClass<'a> {
    Node(&'a Node),
    Relation(&'a RelationInstance),
    IaConclusion,
    CaConclusion,
    Dangling,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Ia,
    Ca,
}

struct Checker<'a> {
    ann: &'a Annotation,
    config: &'a ValidatorConfig,
    nodes: HashMap<&'a str, &'a Node>,
    relations: HashMap<&'a str, &'a RelationInstance>,
    node_regions: HashMap<&'a str, BTreeSet<Region>>,
    out: Vec<Diagnostic>,
}

impl<'a> Checker<'a> {
    fn new(ann: &'a Annotation, config: &'a ValidatorConfig) -> Self {
        Checker {
            ann,
            config,
            nodes: ann.node_index(),
            relations: ann.relation_index(),
            node_regions: node_regions(ann),
            out: Vec::new(),
        }
    }

    fn push(&mut self, code: Code, subject: impl Into<String>, message: impl Into<String>) {
        self.out.push(Diagnostic {
            code,
            subject_id: subject.into(),
            message: message.into(),
        });
    }

    fn run(mut self, debate: Option<&Debate>) -> ValidationReport {
        if self.ann.is_not_applicable() {
            return ValidationReport::from_diagnostics(Vec::new());
        }
        self.check_base();
        if let Some(debate) = debate {
            self.check_spans(debate);
        }
        self.check_ids();
        for r in &self.ann.relations {
            self.check_relation_shape(r);
        }
        for r in &self.ann.relations {
            self.check_region(r);
        }
        self.check_ia_causal();
        self.check_budgets();
        self.check_attack();
        self.check_cycles();
        self.check_span_lengths();
        self.check_polarity_use();
        ValidationReport::from_diagnostics(self.out)
    }

    fn check_base(&mut self) {
        let mut missing = Vec::new();
        if self.ann.base_pattern.is_none() {
            missing.push("base_pattern");
        }
        if self.ann.central_concept.is_none() {
            missing.push("central_concept");
        }
        if !missing.is_empty() {
            let msg = format!("annotated but missing {}", missing.join(" and "));
            self.push(Code::BaseMissing, self.ann.debate_id.clone(), msg);
        }
    }

    fn check_spans(&mut self, debate: &Debate) {
        if self.ann.debate_id != debate.id {
            let msg = format!(
                "annotation refers to debate {:?} but was checked against {:?}",
                self.ann.debate_id, debate.id
            );
            self.push(Code::DanglingRef, self.ann.debate_id.clone(), msg);
        }
        let mut spans: Vec<(&str, &Span)> = Vec::new();
        if let Some(central) = &self.ann.central_concept {
            spans.push(("central_concept", central));
        }
        for node in &self.ann.nodes {
            if let Some(span) = node.span_ref() {
                spans.push((&node.id, span));
            }
        }
        for (subject, span) in spans {
            if let Err(e) = resolve_span(debate, span) {
                self.push(Code::SpanMismatch, subject, e.to_string());
            }
        }
    }

    fn check_ids(&mut self) {
        let mut seen = HashSet::new();
        let ids = self
            .ann
            .nodes
            .iter()
            .map(|n| n.id.as_str())
            .chain(self.ann.relations.iter().map(|r| r.id.as_str()));
        let mut dups = BTreeSet::new();
        for id in ids {
            if !seen.insert(id) {
                dups.insert(id);
            }
        }
        for id in dups {
            self.push(Code::DuplicateId, id, format!("id {id:?} is used by more than one node or relation"));
        }
    }

    fn classify(&self, arg: &ArgRef) -> ArgClass<'a> {
        match arg {
            ArgRef::Node(id) => self.nodes.get(id.as_str()).map_or(ArgClass::Dangling, |n| ArgClass::Node(n)),
            ArgRef::Relation(id) => self
                .relations
                .get(id.as_str())
                .map_or(ArgClass::Dangling, |r| ArgClass::Relation(r)),
            ArgRef::IaConclusion => ArgClass::IaConclusion,
            ArgRef::CaConclusion => ArgClass::CaConclusion,
        }
    }

    fn check_relation_shape(&mut self, r: &'a RelationInstance) {
        let classes: Vec<ArgClass<'a>> = r.args.iter().map(|a| self.classify(a)).collect();
        for (arg, class) in r.args.iter().zip(&classes) {
            if matches!(class, ArgClass::Dangling) {
                let target = match arg {
                    ArgRef::Node(id) => format!("node {id:?}"),
                    ArgRef::Relation(id) => format!("relation {id:?}"),
                    _ => unreachable!("conclusion anchors always resolve"),
                };
                self.push(Code::DanglingRef, r.id.clone(), format!("{} references missing {target}", r.id));
            }
        }

        let arity_ok = match r.kind {
            RelationKind::Function => r.args.len() >= 2,
            _ => r.args.len() == 2,
        };
        if !arity_ok {
            let expected = if r.kind == RelationKind::Function { "at least 2" } else { "exactly 2" };
            let msg = format!("{} {} takes {expected} arguments, got {}", r.kind, r.id, r.args.len());
            self.push(Code::Arity, r.id.clone(), msg);
        }

        if r.mitigated && !r.kind.is_causal() {
            let msg = format!("mitigation applies only to promote/suppress, not {}", r.kind);
            self.push(Code::ArgKind, r.id.clone(), msg);
        }
        if !arity_ok {
            return;
        }

        use ArgClass as C;
        let is_node = |c: &C| matches!(c, C::Node(_) | C::Dangling);
        let is_rel = |c: &C| matches!(c, C::Relation(_) | C::Dangling);
        let problem: Option<String> = match r.kind {
            RelationKind::Promote | RelationKind::Suppress => {
                (!classes.iter().all(is_node)).then(|| "causal arguments must both be nodes".into())
            }
            RelationKind::MoreImportant => {
                let ok = classes.iter().all(is_node) || classes.iter().all(is_rel);
                (!ok).then(|| "value judgement compares two nodes or two relations".into())
            }
            RelationKind::Contradiction => {
                (!classes.iter().all(is_rel)).then(|| "contradiction arguments must both be relations".into())
            }
            RelationKind::RationaleCondition => {
                let ok = matches!(classes[0], C::Node(_) | C::Relation(_) | C::Dangling) && is_node(&classes[1]);
                (!ok).then(|| "rationale/condition supports a node or relation with a rationale node".into())
            }
            RelationKind::Acknowledgement | RelationKind::Nullify | RelationKind::Limit => {
                let ok = !matches!(classes[0], C::IaConclusion) && !matches!(classes[1], C::CaConclusion);
                (!ok).then(|| "attack relations run from the CA side to the IA side".into())
            }
            RelationKind::Function => self.function_problem(r, &classes),
        };
        if let Some(msg) = problem {
            self.push(Code::ArgKind, r.id.clone(), format!("{} {}: {msg}", r.kind, r.id));
        }
    }

    fn function_problem(&self, r: &RelationInstance, classes: &[ArgClass<'a>]) -> Option<String> {
        let mut chain = Vec::with_capacity(classes.len());
        for class in classes {
            match class {
                ArgClass::Relation(link) if link.kind.is_causal() => chain.push(*link),
                ArgClass::Dangling => return None,
                _ => return Some("function joins promote/suppress relations only".into()),
            }
        }
        compose_function(&chain).err().map(|e| format!("{} cannot be joined: {e}", r.id))
    }

    fn side_of(&self, class: ArgClass<'a>) -> Option<Side> {
        match class {
            ArgClass::Relation(rel) => match rel.region {
                Region::IaPattern => Some(Side::Ia),
                Region::CaPattern => Some(Side::Ca),
                Region::AttackPattern => None,
            },
            ArgClass::Node(node) => match self.node_regions.get(node.id.as_str()) {
                Some(regions) if regions.contains(&Region::CaPattern) && !regions.contains(&Region::IaPattern) => {
                    Some(Side::Ca)
                }
                Some(regions) if regions.contains(&Region::IaPattern) && !regions.contains(&Region::CaPattern) => {
                    Some(Side::Ia)
                }
                Some(_) => None,
                None => match node.span_ref().map(|s| s.source) {
                    Some(Source::Ia) => Some(Side::Ia),
                    Some(Source::Ca) => Some(Side::Ca),
                    None => None,
                },
            },
            ArgClass::IaConclusion => Some(Side::Ia),
            ArgClass::CaConclusion => Some(Side::Ca),
            ArgClass::Dangling => None,
        }
    }

    fn check_region(&mut self, r: &'a RelationInstance) {
        let attack_kind = r.kind.is_attack_region_kind();
        if attack_kind != (r.region == Region::AttackPattern) {
            let msg = if attack_kind {
                format!("{} {} must be placed in the attack-pattern, not {}", r.kind, r.id, r.region)
            } else {
                format!("{} {} cannot be placed in the attack-pattern", r.kind, r.id)
            };
            self.push(Code::Region, r.id.clone(), msg);
        }
        if !attack_kind || r.args.len() != 2 {
            return;
        }
        let from = self.classify(&r.args[0]);
        let to = self.classify(&r.args[1]);
        if !matches!(from, ArgClass::Dangling) && self.side_of(from) != Some(Side::Ca) {
            let msg = format!("{} {} must start from the CA-pattern or CA conclusion", r.kind, r.id);
            self.push(Code::Region, r.id.clone(), msg);
        }
        if !matches!(to, ArgClass::Dangling) && self.side_of(to) != Some(Side::Ia) {
            let msg = format!("{} {} must target the IA-pattern or IA conclusion", r.kind, r.id);
            self.push(Code::Region, r.id.clone(), msg);
        }
    }

    fn check_ia_causal(&mut self) {
        if !self.ann.relations_in(Region::IaPattern).any(|r| r.kind.is_causal()) {
            self.push(
                Code::IaNoCausal,
                "ia_pattern",
                "IA-pattern must contain a promote or suppress relation",
            );
        }
    }

    fn check_budgets(&mut self) {
        let policy = self.config.budget;
        for (region, limit, code) in [
            (Region::IaPattern, self.config.ia_budget, Code::IaBudget),
            (Region::CaPattern, self.config.ca_budget, Code::CaBudget),
        ] {
            let used = region_budget(self.ann, region, &policy);
            if used > limit {
                let subject = region_key(region);
                let msg = format!("{region} uses {used} relations/attributes, at most {limit} allowed");
                self.push(code, subject, msg);
            }
        }
    }

    fn check_attack(&mut self) {
        if !self.ann.relations_in(Region::AttackPattern).any(|r| r.kind.is_attacking()) {
            self.push(
                Code::AttackMissing,
                "attack_pattern",
                "attack-pattern must contain at least one nullify or limit relation",
            );
        }
    }

    fn check_cycles(&mut self) {
        let cycles = find_cycles(self.ann);
        for cycle in cycles {
            let msg = format!("relations reference each other in a cycle: {}", cycle.join(" -> "));
            self.push(Code::Cycle, cycle[0].clone(), msg);
        }
    }

    fn check_span_lengths(&mut self) {
        let limit = self.config.max_span_chars;
        let mut long = Vec::new();
        if let Some(c) = &self.ann.central_concept {
            if c.char_len() > limit {
                long.push(("central_concept".to_string(), c.char_len()));
            }
        }
        for node in &self.ann.nodes {
            if let Some(s) = node.span_ref() {
                if s.char_len() > limit {
                    long.push((node.id.clone(), s.char_len()));
                }
            }
        }
        for (subject, len) in long {
            let msg = format!("span is {len} characters long, guidance is at most {limit}");
            self.push(Code::SpanLong, subject, msg);
        }
    }

    fn check_polarity_use(&mut self) {
        let policy = BudgetPolicy {
            relations: false,
            polarity_marks: true,
            mitigation: false,
            negation: false,
        };
        for region in [Region::IaPattern, Region::CaPattern] {
            let used = self.ann.relations_in(region).next().is_some();
            if used && region_budget(self.ann, region, &policy) == 0 {
                self.push(
                    Code::NoPolarity,
                    region_key(region),
                    format!("{region} uses no good/bad attribute"),
                );
            }
        }
    }
}

pub(crate) fn region_key(region: Region) -> &'static str {
    match region {
        Region::IaPattern => "ia_pattern",
        Region::CaPattern => "ca_pattern",
        Region::AttackPattern => "attack_pattern",
    }
}

/// Distinct reference cycles among relations, each listed from its first
/// member in declaration order.
pub(crate) fn find_cycles(ann: &Annotation) -> Vec<Vec<String>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let index: HashMap<&str, usize> = ann.relations.iter().enumerate().map(|(i, r)| (r.id.as_str(), i)).collect();
    let edges: Vec<Vec<usize>> = ann
        .relations
        .iter()
        .map(|r| {
            r.args
                .iter()
                .filter_map(|a| a.as_relation().and_then(|id| index.get(id).copied()))
                .collect()
        })
        .collect();
    let mut marks = vec![Mark::New; ann.relations.len()];
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut cycles = Vec::new();

    for root in 0..ann.relations.len() {
        if marks[root] != Mark::New {
            continue;
        }
        let mut path: Vec<usize> = vec![root];
        let mut cursor: Vec<usize> = vec![0];
        marks[root] = Mark::Active;
        while let Some(&at) = path.last() {
            let next_edge = cursor.last_mut().expect("cursor tracks path");
            if let Some(&next) = edges[at].get(*next_edge) {
                *next_edge += 1;
                match marks[next] {
                    Mark::New => {
                        marks[next] = Mark::Active;
                        path.push(next);
                        cursor.push(0);
                    }
                    Mark::Active => {
                        let start = path.iter().position(|&p| p == next).expect("active node is on the path");
                        let members = &path[start..];
                        let mut key = members.to_vec();
                        key.sort_unstable();
                        if seen.insert(key) {
                            let first = members.iter().enumerate().min_by_key(|(_, &m)| m).map(|(i, _)| i).unwrap();
                            let mut ids: Vec<String> = members[first..]
                                .iter()
                                .chain(&members[..first])
                                .map(|&m| ann.relations[m].id.clone())
                                .collect();
                            ids.push(ids[0].clone());
                            cycles.push(ids);
                        }
                    }
                    Mark::Done => {}
                }
            } else {
                marks[at] = Mark::Done;
                path.pop();
                cursor.pop();
            }
        }
    }
    cycles
}
