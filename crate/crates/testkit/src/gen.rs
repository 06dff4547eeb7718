//! Proptest strategies.

use std::collections::BTreeMap;

use lexibridge_core::model::{
    ranked, Pos, Project, SourceSynset, Synonym, SynsetId, TranslationRecord,
};
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::sample::{select, Index};

/// A small vocabulary so that lemmas collide often.
pub const TOKENS: &[&str] = &["مركز", "تجاري", "تسوق", "جسم", "طبيعي", "سيارة"];

pub const PHRASES: &[&str] = &["بشكل معبر", "على نحو معبر", "حمامة استرالية", "ذو قيمة"];

/// One to three tokens, sometimes with doubled or surrounding whitespace.
pub fn lemma() -> impl Strategy<Value = String> {
    (vec(select(TOKENS), 1..=3), any::<bool>(), any::<bool>()).prop_map(|(tokens, padded, wide)| {
        let joined = tokens.join(if wide { "  " } else { " " });
        if padded {
            format!(" {joined} ")
        } else {
            joined
        }
    })
}

/// Synonyms ranked 1..k with no examples.
pub fn synonyms(max: usize) -> impl Strategy<Value = Vec<Synonym>> {
    vec(lemma(), 0..=max).prop_map(|lemmas| ranked(lemmas.into_iter().map(|l| (l, Vec::new()))))
}

#[derive(Debug, Clone)]
pub struct NodeSpec {
    pub verb: bool,
    pub parents: Vec<Index>,
    pub dangling: bool,
    pub gap: bool,
    pub synonyms: Vec<Synonym>,
}

fn node_spec() -> impl Strategy<Value = NodeSpec> {
    (
        prop::bool::weighted(0.3),
        vec(any::<Index>(), 0..=2),
        prop::bool::weighted(0.1),
        prop::bool::weighted(0.1),
        synonyms(4),
    )
        .prop_map(|(verb, parents, dangling, gap, synonyms)| NodeSpec {
            verb,
            parents,
            dangling,
            gap,
            synonyms,
        })
}

pub fn node_id(i: usize, verb: bool) -> SynsetId {
    SynsetId::from_parts(if verb { Pos::Verb } else { Pos::Noun }, 1000 + i as u32)
}

/// Builds a project from node specs. With `acyclic`, parents are drawn only
/// from earlier nodes, which gives a forest with shared parents; otherwise
/// any other node may be a parent.
pub fn build_project(specs: &[NodeSpec], acyclic: bool) -> Project {
    let ids: Vec<SynsetId> = specs
        .iter()
        .enumerate()
        .map(|(i, s)| node_id(i, s.verb))
        .collect();
    let mut project = Project::new();
    for (i, spec) in specs.iter().enumerate() {
        let mut hypernyms = Vec::new();
        for idx in &spec.parents {
            let pool = if acyclic { i } else { ids.len() };
            if pool == 0 {
                continue;
            }
            let parent = ids[idx.index(pool)];
            if parent != ids[i] && !hypernyms.contains(&parent) {
                hypernyms.push(parent);
            }
        }
        if spec.dangling {
            hypernyms.push(SynsetId::from_parts(Pos::Noun, 99_999_999));
        }
        let source = SourceSynset::new(
            ids[i],
            vec![format!("source {i}")],
            format!("source gloss {i}"),
            Vec::new(),
            hypernyms,
            1,
        )
        .expect("generated source is valid");
        let mut record = TranslationRecord::new(&source);
        record.gloss = "تعريف عام للمفهوم".into();
        if spec.gap {
            record.is_gap = true;
            record.phrases = vec![PHRASES[i % PHRASES.len()].to_string()];
        } else {
            record.synonyms = spec.synonyms.clone();
        }
        project.records.insert(ids[i], record);
        project.sources.insert(ids[i], source);
    }
    project
}

/// Random projects over a hypernym forest.
pub fn hierarchy_project(max_synsets: usize) -> impl Strategy<Value = Project> {
    vec(node_spec(), 1..=max_synsets).prop_map(|specs| build_project(&specs, true))
}

/// Random projects whose hypernym links may form cycles.
pub fn tangled_project(max_synsets: usize) -> impl Strategy<Value = Project> {
    vec(node_spec(), 1..=max_synsets).prop_map(|specs| build_project(&specs, false))
}

/// Arbitrary record content for `id`, including incomplete and
/// inconsistent combinations.
pub fn record_for(id: SynsetId) -> impl Strategy<Value = TranslationRecord> {
    (
        any::<bool>(),
        vec((lemma(), vec(select(PHRASES), 0..=2)), 0..=3),
        prop::option::of(select(PHRASES)),
        vec(select(PHRASES), 0..=2),
    )
        .prop_map(move |(gap, syns, gloss, phrases)| {
            let mut r = TranslationRecord::for_id(id);
            r.is_gap = gap;
            r.synonyms = ranked(
                syns.into_iter()
                    .map(|(l, ex)| (l, ex.into_iter().map(str::to_string).collect())),
            );
            r.gloss = gloss.map(str::to_string).unwrap_or_default();
            r.phrases = phrases.into_iter().map(str::to_string).collect();
            r
        })
}

fn diff_ids() -> Vec<SynsetId> {
    let mut ids = Vec::new();
    for (k, pos) in Pos::ALL.into_iter().enumerate() {
        for n in 0..3 {
            ids.push(SynsetId::from_parts(pos, 10 * k as u32 + n + 1));
        }
    }
    ids
}

/// A record set over a fixed id pool, each id present or not.
pub fn record_set() -> impl Strategy<Value = BTreeMap<SynsetId, TranslationRecord>> {
    let parts: Vec<_> = diff_ids()
        .into_iter()
        .map(|id| prop::option::of(record_for(id)))
        .collect();
    parts.prop_map(|records| {
        records
            .into_iter()
            .flatten()
            .map(|r| (r.source, r))
            .collect()
    })
}

/// Two record sets over the same ids.
pub fn matched_pair() -> impl Strategy<
    Value = (
        BTreeMap<SynsetId, TranslationRecord>,
        BTreeMap<SynsetId, TranslationRecord>,
    ),
> {
    let parts: Vec<_> = diff_ids()
        .into_iter()
        .map(|id| prop::option::of((record_for(id), record_for(id))))
        .collect();
    parts.prop_map(|pairs| {
        let mut base = BTreeMap::new();
        let mut cur = BTreeMap::new();
        for (b, c) in pairs.into_iter().flatten() {
            base.insert(b.source, b);
            cur.insert(c.source, c);
        }
        (base, cur)
    })
}
