//! Reference annotations and a seeded generator of scheme-valid annotations.
//!
//! These back the test suites, the shipped `data/` corpus and the README
//! walkthrough. Everything here is deterministic for a given seed.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{
    new_annotation, Annotation, ArgRef, BasePattern, Debate, Node, Polarity, Region, RelationInstance,
    RelationKind as K, Source, Span,
};
use crate::validate::Code;

fn span(debate: &Debate, source: Source, needle: &str) -> Span {
    Span::find(debate, source, needle).unwrap_or_else(|| panic!("{needle:?} not found in {source} of {}", debate.id))
}

fn rel(id: &str, kind: K, region: Region, args: Vec<ArgRef>) -> RelationInstance {
    RelationInstance::new(id, kind, region, args)
}

fn n(id: &str) -> ArgRef {
    ArgRef::node(id)
}

fn r(id: &str) -> ArgRef {
    ArgRef::relation(id)
}

pub const FIG1_RATIONALE: &str = "while executing prisoners is completely effective in ensuring that they never reoffend";

pub fn fig1_debate() -> Debate {
    Debate::new(
        "death-penalty-rehabilitation",
        "Death penalty should be abolished",
        "The death penalty should be abolished. It takes away the chance of rehabilitation of the criminals, \
         since an executed person can never reform.",
        "The death penalty must stay. Yes, it ends the chance of rehabilitation of the criminals, but \
         while executing prisoners is completely effective in ensuring that they never reoffend, \
         rehabilitation is never guaranteed.",
    )
}

/// The worked death-penalty example: the CA agrees with the IA premise but
/// weighs the death penalty above rehabilitation, denying the IA conclusion.
pub fn fig1() -> (Debate, Annotation) {
    let d = fig1_debate();
    let x = span(&d, Source::Ia, "death penalty");
    let mut ann = new_annotation(&d, "annotator-1", BasePattern::Pattern1, x).expect("central span resolves");
    ann.nodes = vec![
        Node::central("n_x"),
        Node::span("n_rehab_ia", span(&d, Source::Ia, "chance of rehabilitation of the criminals"))
            .with_polarity(Polarity::Good),
        Node::span("n_rehab_ca", span(&d, Source::Ca, "chance of rehabilitation of the criminals"))
            .with_polarity(Polarity::Good),
        Node::span("n_rationale", span(&d, Source::Ca, FIG1_RATIONALE)),
    ];
    ann.relations = vec![
        rel("r_ia_suppress", K::Suppress, Region::IaPattern, vec![n("n_x"), n("n_rehab_ia")]),
        rel("r_ca_value", K::MoreImportant, Region::CaPattern, vec![n("n_x"), n("n_rehab_ca")]),
        rel("r_ca_rationale", K::RationaleCondition, Region::CaPattern, vec![r("r_ca_value"), n("n_rationale")]),
        rel("r_ack", K::Acknowledgement, Region::AttackPattern, vec![r("r_ca_rationale"), r("r_ia_suppress")]),
        rel("r_nullify", K::Nullify, Region::AttackPattern, vec![r("r_ca_rationale"), ArgRef::IaConclusion]),
    ];
    (d, ann)
}

/// Text form of [`fig1`], one block per line.
pub const FIG1_TEXT_FORM: &str = concat!(
    "IA: {\"death penalty\" is negative} because {\"death penalty\" suppress ",
    "(\"chance of rehabilitation of the criminals\" which is good)}\n",
    "CA: {\"death penalty\" is not negative} because {\"death penalty\" is more important/severe/has greater weight ",
    "than \"chance of rehabilitation of the criminals\" which is good given the rationale/condition that ",
    "\"while executing prisoners is completely effective in ensuring that they never reoffend\"}\n",
    "Attack: {\"death penalty\" is more important/severe/has greater weight than ",
    "\"chance of rehabilitation of the criminals\" which is good given the rationale/condition that ",
    "\"while executing prisoners is completely effective in ensuring that they never reoffend\"} ",
    "which acknowledge {\"death penalty\" suppress (\"chance of rehabilitation of the criminals\" which is good)}; ",
    "{\"death penalty\" is more important/severe/has greater weight than ",
    "\"chance of rehabilitation of the criminals\" which is good given the rationale/condition that ",
    "\"while executing prisoners is completely effective in ensuring that they never reoffend\"} ",
    "which nullify {\"death penalty\" is negative}",
);

/// Single-mutation variants of [`fig1`], each with the one error code it must produce.
pub fn fig1_mutations() -> Vec<(&'static str, Annotation, Code)> {
    let (d, base) = fig1();
    let mut out = Vec::new();

    let mut drop_causal = base.clone();
    drop_causal.remove_relation_cascade("r_ia_suppress");
    out.push(("drop causal", drop_causal, Code::IaNoCausal));

    let mut ia_budget = base.clone();
    ia_budget
        .nodes
        .push(Node::span("n_reform", span(&d, Source::Ia, "an executed person can never reform")));
    ia_budget
        .relations
        .push(rel("r_ia_extra", K::Suppress, Region::IaPattern, vec![n("n_x"), n("n_reform")]));
    out.push(("exceed IA budget", ia_budget, Code::IaBudget));

    let mut ca_budget = base.clone();
    ca_budget
        .relations
        .push(rel("r_ca_extra", K::Suppress, Region::CaPattern, vec![n("n_x"), n("n_rehab_ca")]));
    out.push(("exceed CA budget", ca_budget, Code::CaBudget));

    let mut no_attack = base.clone();
    no_attack.relations.retain(|r| r.id != "r_nullify");
    out.push(("drop attack relation", no_attack, Code::AttackMissing));

    let mut corrupt = base.clone();
    if let Some(crate::model::NodeContent::Span(s)) = corrupt.nodes.iter_mut().find(|n| n.id == "n_rehab_ia").map(|n| &mut n.content) {
        s.start += 1;
        s.end += 1;
    }
    out.push(("corrupt span offsets", corrupt, Code::SpanMismatch));

    let mut cycle = base;
    for rel in &mut cycle.relations {
        if rel.id == "r_ca_rationale" {
            rel.args[0] = r("r_nullify");
        }
    }
    out.push(("introduce cycle", cycle, Code::Cycle));
    out
}

/// The mitigation-and-limit example on executioner's suffering.
pub fn limit_example() -> (Debate, Annotation) {
    let d = Debate::new(
        "death-penalty-executioner",
        "Death penalty should be abolished",
        "The death penalty should be abolished. The death penalty causes executioner's suffering, \
         because they feel responsible for killing the suspect.",
        "The executioner's stress can be reduced by making sure that executioners have a good mental support system.",
    );
    let x = span(&d, Source::Ia, "death penalty");
    let mut ann = new_annotation(&d, "annotator-1", BasePattern::Pattern1, x).expect("central span resolves");
    ann.nodes = vec![
        Node::central("n_x"),
        Node::span("n_suffering_ia", span(&d, Source::Ia, "executioner's suffering")),
        Node::span("n_suffering_ca", span(&d, Source::Ia, "executioner's suffering")),
        Node::span("n_support", span(&d, Source::Ca, "executioners have a good mental support system")),
    ];
    ann.relations = vec![
        rel("r_ia", K::Promote, Region::IaPattern, vec![n("n_x"), n("n_suffering_ia")]),
        rel("r_ca", K::Promote, Region::CaPattern, vec![n("n_x"), n("n_suffering_ca")]).mitigated(),
        rel("r_ca_cond", K::RationaleCondition, Region::CaPattern, vec![r("r_ca"), n("n_support")]),
        rel("r_limit", K::Limit, Region::AttackPattern, vec![r("r_ca_cond"), r("r_ia")]),
    ];
    (d, ann)
}

pub fn homework_debate() -> Debate {
    Debate::new(
        "homework-free-time",
        "Homework should be abolished",
        "Homework should be abolished. If homework were to be abolished, we could have more free time \
         for club activities.",
        "If homework is abolished, more people fail in exam. Not doing homework will lead to lack of preparation.",
    )
}

/// The auxiliary-rationale case: the CA weighs "no homework promote people
/// fail in exam" (with a rationale) above the IA's "no homework promote free time".
pub fn homework_value_judgement() -> (Debate, Annotation) {
    let d = homework_debate();
    let x = span(&d, Source::Ia, "Homework");
    let mut ann = new_annotation(&d, "annotator-1", BasePattern::Pattern1, x).expect("central span resolves");
    ann.nodes = vec![
        Node::central("n_no_homework").negated(),
        Node::span("n_free_time", span(&d, Source::Ia, "free time")).with_polarity(Polarity::Good),
        Node::span("n_fail", span(&d, Source::Ca, "people fail in exam")),
        Node::span("n_prep", span(&d, Source::Ca, "Not doing homework will lead to lack of preparation")),
    ];
    ann.relations = vec![
        rel("r_ia", K::Promote, Region::IaPattern, vec![n("n_no_homework"), n("n_free_time")]),
        rel("r_ca_fail", K::Promote, Region::CaPattern, vec![n("n_no_homework"), n("n_fail")]),
        rel("r_ca_value", K::MoreImportant, Region::CaPattern, vec![r("r_ca_fail"), r("r_ia")]),
        rel("r_ca_rationale", K::RationaleCondition, Region::CaPattern, vec![r("r_ca_fail"), n("n_prep")]),
        rel("r_nullify", K::Nullify, Region::AttackPattern, vec![r("r_ca_value"), ArgRef::IaConclusion]),
    ];
    (d, ann)
}

// ---------------------------------------------------------------------------
// Synthetic corpora
// ---------------------------------------------------------------------------

const TOPICS: [&str; 12] = [
    "homework",
    "death penalty",
    "school uniforms",
    "nuclear power",
    "zoos",
    "standardized testing",
    "space exploration",
    "fast food",
    "social media",
    "online classes",
    "car ownership",
    "tipping",
];

/// A debate whose texts contain every phrase the synthetic templates select.
pub fn synthetic_debate(id: &str, topic: &str) -> Debate {
    Debate::new(
        id,
        format!("{topic} should be abolished"),
        format!(
            "We say {topic} should be abolished. {topic} destroys the chance of rehabilitation of the criminals. \
             Worse, {topic} causes stress among students. It also limits free time for families."
        ),
        format!(
            "We say {topic} must stay. Sure, it touches the chance of rehabilitation of the criminals, \
             while executing prisoners is completely effective in protecting society. It does not cause \
             stress among students, since continuous guidance is needed to learn. A student learns the \
             importance of scheduling. Indeed, one learns that the way to succeed is by making schedule. \
             In fact {topic} brings relief for students and builds basic foundations of study. \
             Those foundations lead to good grades."
        ),
    )
}

/// Structural templates used by the synthetic corpora.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Template {
    /// Value judgement over two concepts, acknowledging the IA premise.
    Value,
    /// Negated causal with rationale, nullifying the IA causal.
    Negate,
    /// Contradicting causal, nullifying the IA conclusion.
    Contra,
}

/// Span choices a template may vary without changing structure.
#[derive(Debug, Clone, Copy)]
pub struct SpanChoice {
    pub ia_good: &'static str,
    pub ca_negated_target: &'static str,
}

impl Default for SpanChoice {
    fn default() -> Self {
        SpanChoice {
            ia_good: "chance of rehabilitation of the criminals",
            ca_negated_target: "stress among students",
        }
    }
}

/// Builds one annotation of `template` over a [`synthetic_debate`]. `prefix`
/// namespaces ids; `reverse` flips declaration order of nodes and relations.
pub fn template_annotation(
    d: &Debate,
    annotator: &str,
    template: Template,
    choice: SpanChoice,
    prefix: &str,
    reverse: bool,
) -> Annotation {
    let topic = d.topic.trim_end_matches(" should be abolished");
    let x = span(d, Source::Ia, topic);
    let mut ann = new_annotation(d, annotator, BasePattern::Pattern1, x).expect("central span resolves");
    let id = |s: &str| format!("{prefix}{s}");
    let ni = |s: &str| ArgRef::node(id(s));
    let ri = |s: &str| ArgRef::relation(id(s));
    let node = |s: &str, src: Source, text: &str| Node::span(id(s), span(d, src, text));
    let rel = |s: &str, k: K, region: Region, args: Vec<ArgRef>| RelationInstance::new(id(s), k, region, args);

    match template {
        Template::Value => {
            ann.nodes = vec![
                Node::central(id("x")),
                node("y", Source::Ia, choice.ia_good).with_polarity(Polarity::Good),
                node("y_ca", Source::Ca, "chance of rehabilitation of the criminals").with_polarity(Polarity::Good),
                node("why", Source::Ca, "while executing prisoners is completely effective in protecting society"),
            ];
            ann.relations = vec![
                rel("ia", K::Suppress, Region::IaPattern, vec![ni("x"), ni("y")]),
                rel("value", K::MoreImportant, Region::CaPattern, vec![ni("x"), ni("y_ca")]),
                rel("because", K::RationaleCondition, Region::CaPattern, vec![ri("value"), ni("why")]),
                rel("ack", K::Acknowledgement, Region::AttackPattern, vec![ri("because"), ri("ia")]),
                rel("deny", K::Nullify, Region::AttackPattern, vec![ri("because"), ArgRef::IaConclusion]),
            ];
        }
        Template::Negate => {
            ann.nodes = vec![
                Node::central(id("x")),
                node("z", Source::Ia, "stress among students").with_polarity(Polarity::Bad),
                node("z_ca", Source::Ca, choice.ca_negated_target).with_polarity(Polarity::Bad),
                node("why", Source::Ca, "continuous guidance is needed to learn"),
            ];
            ann.relations = vec![
                rel("ia", K::Promote, Region::IaPattern, vec![ni("x"), ni("z")]),
                rel("ca", K::Promote, Region::CaPattern, vec![ni("x"), ni("z_ca")]).negated(),
                rel("because", K::RationaleCondition, Region::CaPattern, vec![ri("ca"), ni("why")]),
                rel("deny", K::Nullify, Region::AttackPattern, vec![ri("because"), ri("ia")]),
            ];
        }
        Template::Contra => {
            ann.nodes = vec![
                Node::central(id("x")),
                node("z", Source::Ia, "stress among students").with_polarity(Polarity::Bad),
                node("relief", Source::Ca, "relief for students").with_polarity(Polarity::Good),
            ];
            ann.relations = vec![
                rel("ia", K::Promote, Region::IaPattern, vec![ni("x"), ni("z")]),
                rel("ca", K::Promote, Region::CaPattern, vec![ni("x"), ni("relief")]),
                rel("contra", K::Contradiction, Region::CaPattern, vec![ri("ca"), ri("ia")]),
                rel("deny", K::Nullify, Region::AttackPattern, vec![ri("contra"), ArgRef::IaConclusion]),
            ];
        }
    }
    if reverse {
        ann.nodes.reverse();
        ann.relations.reverse();
    }
    ann
}

/// One debate of the dual-annotated agreement fixture.
#[derive(Debug, Clone, Copy)]
pub struct DualCase {
    pub a: Option<Template>,
    pub b: Option<Template>,
    pub a_spans: SpanChoice,
    pub b_spans: SpanChoice,
}

/// The 10-debate dual-annotated fixture: 9 non-NA per annotator, 6 fully
/// agreeing debates, one IA span divergence by containment (debate 7), one
/// CA span divergence across sentences (debate 8) and one NA on each side
/// (debates 9 and 10).
pub fn dual_cases() -> Vec<DualCase> {
    use Template::*;
    let same = |t: Template| DualCase {
        a: Some(t),
        b: Some(t),
        a_spans: SpanChoice::default(),
        b_spans: SpanChoice::default(),
    };
    vec![
        same(Value),
        same(Value),
        same(Negate),
        same(Contra),
        same(Value),
        same(Negate),
        DualCase {
            b_spans: SpanChoice {
                ia_good: "rehabilitation of the criminals",
                ..SpanChoice::default()
            },
            ..same(Value)
        },
        DualCase {
            a_spans: SpanChoice {
                ca_negated_target: "learns the importance of scheduling",
                ..SpanChoice::default()
            },
            b_spans: SpanChoice {
                ca_negated_target: "learns that the way to succeed is by making schedule",
                ..SpanChoice::default()
            },
            ..same(Negate)
        },
        DualCase {
            a: None,
            ..same(Value)
        },
        DualCase {
            b: None,
            ..same(Contra)
        },
    ]
}

/// Debates plus the two annotators' corpora for [`dual_cases`]. Annotator B
/// uses different ids and reversed declaration order throughout.
pub fn agreement_corpus() -> (Vec<Debate>, Vec<Annotation>, Vec<Annotation>) {
    let mut debates = Vec::new();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (i, case) in dual_cases().into_iter().enumerate() {
        let d = synthetic_debate(&format!("d{:02}", i + 1), TOPICS[i]);
        a.push(match case.a {
            Some(t) => template_annotation(&d, "A", t, case.a_spans, "a_", false),
            None => Annotation::not_applicable(&d.id, "A"),
        });
        b.push(match case.b {
            Some(t) => template_annotation(&d, "B", t, case.b_spans, "b-", true),
            None => Annotation::not_applicable(&d.id, "B"),
        });
        debates.push(d);
    }
    (debates, a, b)
}

/// A larger dual-annotated corpus drawn from the templates, for exercising
/// the corpus-ingest path at realistic size.
pub fn dual_corpus(n_debates: usize, seed: u64) -> (Vec<Debate>, Vec<Annotation>, Vec<Annotation>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let templates = [Template::Value, Template::Negate, Template::Contra];
    let mut debates = Vec::new();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for i in 0..n_debates {
        let d = synthetic_debate(&format!("debate-{i:03}"), TOPICS[i % TOPICS.len()]);
        let ta = *templates.choose(&mut rng).expect("non-empty");
        let tb = if rng.random_bool(0.7) { ta } else { *templates.choose(&mut rng).expect("non-empty") };
        let pick = |rng: &mut ChaCha8Rng, t: Template, who: &str, prefix: &str| {
            if rng.random_bool(0.1) {
                Annotation::not_applicable(&d.id, who)
            } else {
                let choice = SpanChoice {
                    ia_good: ["chance of rehabilitation of the criminals", "rehabilitation of the criminals"]
                        .choose(rng)
                        .copied()
                        .expect("non-empty"),
                    ca_negated_target: ["stress among students", "learns the importance of scheduling"]
                        .choose(rng)
                        .copied()
                        .expect("non-empty"),
                };
                template_annotation(&d, who, t, choice, prefix, rng.random_bool(0.5))
            }
        };
        a.push(pick(&mut rng, ta, "A", "a"));
        b.push(pick(&mut rng, tb, "B", "b"));
        debates.push(d);
    }
    (debates, a, b)
}

// ---------------------------------------------------------------------------
// Random valid annotations
// ---------------------------------------------------------------------------

struct Builder<'d> {
    debate: &'d Debate,
    ann: Annotation,
    next: usize,
}

impl<'d> Builder<'d> {
    fn id(&mut self, rng: &mut ChaCha8Rng, stem: &str) -> String {
        self.next += 1;
        format!("{stem}{}-{:x}", self.next, rng.random::<u16>())
    }

    fn central(&mut self, rng: &mut ChaCha8Rng, negated: bool) -> String {
        let id = self.id(rng, "x");
        let mut node = Node::central(id.clone());
        node.negated = negated;
        self.ann.nodes.push(node);
        id
    }

    fn filler(&mut self, rng: &mut ChaCha8Rng, source: Source, phrases: &[&str], polarity: Polarity) -> String {
        let id = self.id(rng, "n");
        let phrase = phrases.choose(rng).expect("non-empty");
        self.ann
            .nodes
            .push(Node::span(id.clone(), span(self.debate, source, phrase)).with_polarity(polarity));
        id
    }

    fn relation(&mut self, rng: &mut ChaCha8Rng, kind: K, region: Region, args: Vec<ArgRef>) -> String {
        let id = self.id(rng, "r");
        self.ann.relations.push(RelationInstance::new(id.clone(), kind, region, args));
        id
    }

    fn last_relation(&mut self) -> &mut RelationInstance {
        self.ann.relations.last_mut().expect("just pushed")
    }
}

const IA_PHRASES: [&str; 3] = [
    "chance of rehabilitation of the criminals",
    "stress among students",
    "free time for families",
];
const CA_PHRASES: [&str; 5] = [
    "stress among students",
    "relief for students",
    "basic foundations of study",
    "good grades",
    "learns the importance of scheduling",
];
const CA_REASONS: [&str; 3] = [
    "continuous guidance is needed to learn",
    "while executing prisoners is completely effective in protecting society",
    "Those foundations lead to good grades",
];

fn random_polarity(rng: &mut ChaCha8Rng) -> Polarity {
    *[Polarity::Good, Polarity::Bad, Polarity::None].choose(rng).expect("non-empty")
}

fn causal_kind(rng: &mut ChaCha8Rng) -> K {
    if rng.random_bool(0.5) {
        K::Promote
    } else {
        K::Suppress
    }
}

/// A random annotation that passes validation against its own debate.
///
/// About one in twelve draws is a Not-Applicable mark. Ids are random and
/// declaration order is shuffled, so structurally equal draws differ in
/// surface form.
pub fn random_valid(seed: u64) -> (Debate, Annotation) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let topic = *TOPICS.choose(&mut rng).expect("non-empty");
    let debate = synthetic_debate(&format!("gen-{seed}"), topic);
    if rng.random_ratio(1, 12) {
        return (debate.clone(), Annotation::not_applicable(&debate.id, "gen"));
    }
    let x = span(&debate, Source::Ia, topic);
    let base = if rng.random_bool(0.8) { BasePattern::Pattern1 } else { BasePattern::Pattern2 };
    let ann = new_annotation(&debate, "gen", base, x).expect("central span resolves");
    let mut b = Builder { debate: &debate, ann, next: 0 };
    let rng = &mut rng;

    // IA-pattern: one causal relation, at most one good/bad mark.
    let negated = rng.random_bool(0.4);
    let ia_ante = b.central(rng, negated);
    let ia_pol = random_polarity(rng);
    let ia_cons = b.filler(rng, Source::Ia, &IA_PHRASES, ia_pol);
    let ia_kind = causal_kind(rng);
    let ia = b.relation(rng, ia_kind, Region::IaPattern, vec![ArgRef::node(&ia_ante), ArgRef::node(&ia_cons)]);
    if rng.random_bool(0.2) {
        b.last_relation().negated = true;
    }

    // CA-pattern: one of several shapes, each within a budget of three.
    let ca_top: Option<String> = match rng.random_range(0..7) {
        0 => None,
        1 => {
            let x = b.central(rng, false);
            let y = b.filler(rng, Source::Ca, &CA_PHRASES, Polarity::Good);
            let (a1, a2) = if rng.random_bool(0.5) { (x, y) } else { (y, x) };
            let mi = b.relation(rng, K::MoreImportant, Region::CaPattern, vec![ArgRef::node(a1), ArgRef::node(a2)]);
            if rng.random_bool(0.6) {
                let why = b.filler(rng, Source::Ca, &CA_REASONS, Polarity::None);
                Some(b.relation(rng, K::RationaleCondition, Region::CaPattern, vec![ArgRef::relation(mi), ArgRef::node(why)]))
            } else {
                Some(mi)
            }
        }
        2 => {
            let negated = rng.random_bool(0.5);
            let ante = b.central(rng, negated);
            let cons = b.filler(rng, Source::Ca, &CA_PHRASES, Polarity::None);
            let kind = causal_kind(rng);
            let causal = b.relation(rng, kind, Region::CaPattern, vec![ArgRef::node(ante), ArgRef::node(cons)]);
            let mi = b.relation(
                rng,
                K::MoreImportant,
                Region::CaPattern,
                vec![ArgRef::relation(&causal), ArgRef::relation(&ia)],
            );
            if rng.random_bool(0.5) {
                let why = b.filler(rng, Source::Ca, &CA_REASONS, Polarity::None);
                b.relation(rng, K::RationaleCondition, Region::CaPattern, vec![ArgRef::relation(causal), ArgRef::node(why)]);
            }
            Some(mi)
        }
        3 => {
            let negated = rng.random_bool(0.3);
            let ante = b.central(rng, negated);
            let pol = random_polarity(rng);
            let cons = b.filler(rng, Source::Ca, &CA_PHRASES, pol);
            let kind = causal_kind(rng);
            let neg = b.relation(rng, kind, Region::CaPattern, vec![ArgRef::node(ante), ArgRef::node(cons)]);
            b.last_relation().negated = true;
            let why = b.filler(rng, Source::Ca, &CA_REASONS, Polarity::None);
            Some(b.relation(rng, K::RationaleCondition, Region::CaPattern, vec![ArgRef::relation(neg), ArgRef::node(why)]))
        }
        4 => {
            let ante = b.central(rng, false);
            let pol = random_polarity(rng);
            let cons = b.filler(rng, Source::Ca, &CA_PHRASES, pol);
            let kind = causal_kind(rng);
            let ca = b.relation(rng, kind, Region::CaPattern, vec![ArgRef::node(ante), ArgRef::node(cons)]);
            let (a1, a2) = if rng.random_bool(0.5) { (ca, ia.clone()) } else { (ia.clone(), ca) };
            Some(b.relation(rng, K::Contradiction, Region::CaPattern, vec![ArgRef::relation(a1), ArgRef::relation(a2)]))
        }
        5 => {
            let ante = b.central(rng, false);
            let cons = b.filler(rng, Source::Ia, &IA_PHRASES, Polarity::None);
            let kind = causal_kind(rng);
            let mit = b.relation(rng, kind, Region::CaPattern, vec![ArgRef::node(ante), ArgRef::node(cons)]);
            b.last_relation().mitigated = true;
            let why = b.filler(rng, Source::Ca, &CA_REASONS, Polarity::None);
            Some(b.relation(rng, K::RationaleCondition, Region::CaPattern, vec![ArgRef::relation(mit), ArgRef::node(why)]))
        }
        _ => {
            let ante = b.central(rng, false);
            let mid = b.filler(rng, Source::Ca, &CA_PHRASES[..2], Polarity::None);
            let end = b.filler(rng, Source::Ca, &CA_PHRASES[2..], Polarity::None);
            let k1 = causal_kind(rng);
            let k2 = causal_kind(rng);
            let c1 = b.relation(rng, k1, Region::CaPattern, vec![ArgRef::node(ante), ArgRef::node(&mid)]);
            let c2 = b.relation(rng, k2, Region::CaPattern, vec![ArgRef::node(mid), ArgRef::node(end)]);
            Some(b.relation(rng, K::Function, Region::CaPattern, vec![ArgRef::relation(c1), ArgRef::relation(c2)]))
        }
    };

    // Attack-pattern: a mandatory nullify/limit plus an optional acknowledgement.
    let from = ca_top.clone().map_or(ArgRef::CaConclusion, ArgRef::relation);
    let target = if rng.random_bool(0.5) { ArgRef::IaConclusion } else { ArgRef::relation(&ia) };
    let kind = if matches!(target, ArgRef::Relation(_)) && rng.random_bool(0.4) { K::Limit } else { K::Nullify };
    b.relation(rng, kind, Region::AttackPattern, vec![from.clone(), target]);
    if ca_top.is_some() && rng.random_bool(0.4) {
        b.relation(rng, K::Acknowledgement, Region::AttackPattern, vec![from, ArgRef::relation(&ia)]);
    }

    let mut ann = b.ann;
    ann.nodes.shuffle(rng);
    ann.relations.shuffle(rng);
    (debate, ann)
}

/// Renames every node and relation id and shuffles declaration order.
pub fn rename_and_shuffle(ann: &Annotation, seed: u64) -> Annotation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let salt: u32 = rng.random();
    let rename = |id: &str| format!("{salt:08x}:{}", id.chars().rev().collect::<String>());
    let mut out = ann.clone();
    for node in &mut out.nodes {
        node.id = rename(&node.id);
    }
    for rel in &mut out.relations {
        rel.id = rename(&rel.id);
        for arg in &mut rel.args {
            match arg {
                ArgRef::Node(id) | ArgRef::Relation(id) => *id = rename(id),
                _ => {}
            }
        }
    }
    out.nodes.shuffle(&mut rng);
    out.relations.shuffle(&mut rng);
    out
}
