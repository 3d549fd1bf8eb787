//! Corpus statistics: coverage, relation/attribute distribution and attack
//! motifs.

use std::collections::BTreeMap;
use std::ops::Add;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::canonical_form;
use crate::model::{Annotation, ArgRef, Polarity, Region, RelationInstance, RelationKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("coverage of an empty corpus is undefined")]
    EmptyCorpus,
}

/// Fraction of annotations that are not Not-Applicable.
pub fn coverage<'a, I>(corpus: I) -> Result<f64, StatsError>
where
    I: IntoIterator<Item = &'a Annotation>,
{
    let (mut total, mut annotated) = (0usize, 0usize);
    for ann in corpus {
        total += 1;
        if !ann.is_not_applicable() {
            annotated += 1;
        }
    }
    if total == 0 {
        return Err(StatsError::EmptyCorpus);
    }
    Ok(annotated as f64 / total as f64)
}

pub const ATTRIBUTE_KEYS: [&str; 4] = ["negation", "mitigation", "good", "bad"];

/// Occurrence counts keyed by relation kind name and attribute name. All 13
/// keys are always present.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Distribution(pub BTreeMap<String, usize>);

impl Default for Distribution {
    fn default() -> Self {
        let keys = RelationKind::ALL.iter().map(|k| k.name()).chain(ATTRIBUTE_KEYS);
        Distribution(keys.map(|k| (k.to_string(), 0)).collect())
    }
}

impl Distribution {
    pub fn get(&self, key: &str) -> usize {
        self.0.get(key).copied().unwrap_or(0)
    }

    fn bump(&mut self, key: &str) {
        *self.0.entry(key.to_string()).or_default() += 1;
    }

    /// Keys with a non-zero count.
    pub fn nonzero(&self) -> BTreeMap<&str, usize> {
        self.0.iter().filter(|(_, &v)| v > 0).map(|(k, &v)| (k.as_str(), v)).collect()
    }
}

impl Add for Distribution {
    type Output = Distribution;

    fn add(mut self, rhs: Distribution) -> Distribution {
        for (k, v) in rhs.0 {
            *self.0.entry(k).or_default() += v;
        }
        self
    }
}

/// Counts relations and attributes as annotated (before canonicalization).
/// Negation counts both negated relations and negated nodes.
pub fn relation_distribution(corpus: &[Annotation]) -> Distribution {
    corpus
        .par_iter()
        .map(annotation_distribution)
        .reduce(Distribution::default, Add::add)
}

fn annotation_distribution(ann: &Annotation) -> Distribution {
    let mut d = Distribution::default();
    if ann.is_not_applicable() {
        return d;
    }
    for r in &ann.relations {
        d.bump(r.kind.name());
        if r.negated {
            d.bump("negation");
        }
        if r.mitigated {
            d.bump("mitigation");
        }
    }
    for n in &ann.nodes {
        if n.negated {
            d.bump("negation");
        }
        match n.polarity {
            Polarity::Good => d.bump("good"),
            Polarity::Bad => d.bump("bad"),
            Polarity::None => {}
        }
    }
    d
}

/// A named attack strategy detected on a canonical annotation.
pub trait Motif: Send + Sync {
    fn id(&self) -> &'static str;
    fn matches(&self, canon: &Annotation) -> bool;
}

fn in_region(ann: &Annotation, region: Region) -> impl Iterator<Item = &RelationInstance> {
    ann.relations_in(region)
}

fn is_ia_causal(ann: &Annotation, arg: &ArgRef) -> bool {
    arg.as_relation()
        .and_then(|id| ann.relation(id))
        .is_some_and(|r| r.region == Region::IaPattern && r.kind.is_causal())
}

fn attacks_of(ann: &Annotation, kind: RelationKind) -> impl Iterator<Item = &RelationInstance> {
    in_region(ann, Region::AttackPattern).filter(move |r| r.kind == kind && !r.negated)
}

/// Nullify of an IA causal, with a negated causal in the CA.
pub struct NegatePremise;

impl Motif for NegatePremise {
    fn id(&self) -> &'static str {
        "NEGATE_PREMISE"
    }

    fn matches(&self, ann: &Annotation) -> bool {
        attacks_of(ann, RelationKind::Nullify).any(|r| is_ia_causal(ann, &r.args[1]))
            && in_region(ann, Region::CaPattern).any(|r| r.kind.is_causal() && r.negated)
    }
}

/// Value judgement in the CA, acknowledging the IA premise or nullifying the
/// IA conclusion.
pub struct ValueJudgeDenyConclusion;

impl Motif for ValueJudgeDenyConclusion {
    fn id(&self) -> &'static str {
        "VALUE_JUDGE_DENY_CONCLUSION"
    }

    fn matches(&self, ann: &Annotation) -> bool {
        let has_value = in_region(ann, Region::CaPattern).any(|r| r.kind == RelationKind::MoreImportant);
        let ack_ia = attacks_of(ann, RelationKind::Acknowledgement).any(|r| targets_ia_pattern(ann, &r.args[1]));
        let deny = attacks_of(ann, RelationKind::Nullify).any(|r| r.args[1] == ArgRef::IaConclusion);
        has_value && (ack_ia || deny)
    }
}

fn targets_ia_pattern(ann: &Annotation, arg: &ArgRef) -> bool {
    match arg {
        ArgRef::Relation(id) => ann.relation(id).is_some_and(|r| r.region == Region::IaPattern),
        ArgRef::Node(id) => crate::validate::node_regions(ann)
            .get(id.as_str())
            .is_some_and(|rs| rs.contains(&Region::IaPattern)),
        _ => false,
    }
}

/// Mitigated causal in the CA with a Limit attack.
pub struct MitigateLimit;

impl Motif for MitigateLimit {
    fn id(&self) -> &'static str {
        "MITIGATE_LIMIT"
    }

    fn matches(&self, ann: &Annotation) -> bool {
        in_region(ann, Region::CaPattern).any(|r| r.kind.is_causal() && r.mitigated)
            && attacks_of(ann, RelationKind::Limit).next().is_some()
    }
}

/// Contradiction in the CA with a Nullify of the IA conclusion or an IA causal.
pub struct ContradictDeny;

impl Motif for ContradictDeny {
    fn id(&self) -> &'static str {
        "CONTRADICT_DENY"
    }

    fn matches(&self, ann: &Annotation) -> bool {
        in_region(ann, Region::CaPattern).any(|r| r.kind == RelationKind::Contradiction)
            && attacks_of(ann, RelationKind::Nullify)
                .any(|r| r.args[1] == ArgRef::IaConclusion || is_ia_causal(ann, &r.args[1]))
    }
}

/// Sub-case counted alongside the motifs: a CA value judgement whose two
/// arguments are both relations.
pub fn value_judge_between_relations(canon: &Annotation) -> bool {
    in_region(canon, Region::CaPattern).any(|r| {
        r.kind == RelationKind::MoreImportant && r.args.iter().all(|a| a.as_relation().is_some())
    })
}

pub fn standard_motifs() -> Vec<Box<dyn Motif>> {
    vec![
        Box::new(NegatePremise),
        Box::new(ValueJudgeDenyConclusion),
        Box::new(MitigateLimit),
        Box::new(ContradictDeny),
    ]
}

/// Motif ids matched by one annotation, in registry order.
pub fn detect_motifs(ann: &Annotation, motifs: &[Box<dyn Motif>]) -> Vec<&'static str> {
    if ann.is_not_applicable() {
        return Vec::new();
    }
    let canon = canonical_form(ann, false);
    motifs.iter().filter(|m| m.matches(&canon)).map(|m| m.id()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MotifHistogram {
    pub counts: BTreeMap<String, usize>,
    pub value_judge_between_relations: usize,
    /// Annotated debates matching no motif.
    pub unmatched: usize,
}

pub fn motif_histogram(corpus: &[Annotation]) -> MotifHistogram {
    let motifs = standard_motifs();
    let per: Vec<Option<(Vec<&'static str>, bool)>> = corpus
        .par_iter()
        .map(|ann| {
            (!ann.is_not_applicable()).then(|| {
                let canon = canonical_form(ann, false);
                let hits = motifs.iter().filter(|m| m.matches(&canon)).map(|m| m.id()).collect();
                (hits, value_judge_between_relations(&canon))
            })
        })
        .collect();
    let mut hist = MotifHistogram {
        counts: motifs.iter().map(|m| (m.id().to_string(), 0)).collect(),
        value_judge_between_relations: 0,
        unmatched: 0,
    };
    for (hits, sub) in per.into_iter().flatten() {
        if hits.is_empty() {
            hist.unmatched += 1;
        }
        for h in hits {
            *hist.counts.entry(h.to_string()).or_default() += 1;
        }
        if sub {
            hist.value_judge_between_relations += 1;
        }
    }
    hist
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub n_annotations: usize,
    pub n_not_applicable: usize,
    /// Absent for an empty corpus.
    pub coverage: Option<f64>,
    pub distribution: Distribution,
    pub motifs: MotifHistogram,
}

pub fn stats_report(corpus: &[Annotation]) -> StatsReport {
    StatsReport {
        n_annotations: corpus.len(),
        n_not_applicable: corpus.iter().filter(|a| a.is_not_applicable()).count(),
        coverage: coverage(corpus).ok(),
        distribution: relation_distribution(corpus),
        motifs: motif_histogram(corpus),
    }
}

impl StatsReport {
    /// Plain-text table.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("annotations      {}\n", self.n_annotations));
        out.push_str(&format!("not applicable   {}\n", self.n_not_applicable));
        match self.coverage {
            Some(c) => out.push_str(&format!("coverage         {c:.4}\n")),
            None => out.push_str("coverage         -\n"),
        }
        out.push_str("\nrelation/attribute counts\n");
        for kind in RelationKind::ALL {
            out.push_str(&format!("  {:<20} {}\n", kind.name(), self.distribution.get(kind.name())));
        }
        for key in ATTRIBUTE_KEYS {
            out.push_str(&format!("  {key:<20} {}\n", self.distribution.get(key)));
        }
        out.push_str("\nmotifs\n");
        for (id, n) in &self.motifs.counts {
            out.push_str(&format!("  {id:<32} {n}\n"));
        }
        out.push_str(&format!(
            "  {:<32} {}\n  {:<32} {}\n",
            "(value judge between relations)", self.motifs.value_judge_between_relations, "(no motif)", self.motifs.unmatched
        ));
        out
    }
}
