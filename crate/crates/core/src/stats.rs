//! Inventory counts, baseline/current enrichment diff, and rejection-loop
//! histograms. Every per-POS table carries a total row computed by
//! [`PosTable::from_rows`].

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::model::{
    normalize_lemma, Action, PosBucket, Role, SourceSynset, SynsetId, TranslationRecord,
    WorkflowState,
};

/// A row type that can be summed into a total.
pub trait Tally: Copy + Default + PartialEq {
    fn merge(self, other: Self) -> Self;
}

/// Four POS rows plus their total.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosTable<T> {
    pub nouns: T,
    pub verbs: T,
    pub adjectives: T,
    pub adverbs: T,
    pub total: T,
}

impl<T: Tally> PosTable<T> {
    /// Builds the table from rows ordered nouns, verbs, adjectives, adverbs.
    pub fn from_rows(rows: [T; 4]) -> Self {
        let total = rows.iter().fold(T::default(), |acc, &r| acc.merge(r));
        let [nouns, verbs, adjectives, adverbs] = rows;
        PosTable {
            nouns,
            verbs,
            adjectives,
            adverbs,
            total,
        }
    }

    pub fn rows(&self) -> [T; 4] {
        [self.nouns, self.verbs, self.adjectives, self.adverbs]
    }

    pub fn row(&self, bucket: PosBucket) -> T {
        self.rows()[bucket.index()]
    }

    /// Whether the total row equals the sum of the POS rows.
    pub fn is_consistent(&self) -> bool {
        Self::from_rows(self.rows()).total == self.total
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InventoryRow {
    pub synsets: u64,
    pub synonyms: u64,
}

impl Tally for InventoryRow {
    fn merge(self, o: Self) -> Self {
        InventoryRow {
            synsets: self.synsets + o.synsets,
            synonyms: self.synonyms + o.synonyms,
        }
    }
}

pub type InventoryReport = PosTable<InventoryRow>;

/// A named column of a report row.
pub type Metric<T> = (&'static str, fn(&T) -> u64);

impl InventoryRow {
    pub const METRICS: [Metric<InventoryRow>; 2] =
        [("synsets", |r| r.synsets), ("synonyms", |r| r.synonyms)];
}

/// Which records an inventory counts. Gap records never count.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountingPolicy {
    /// Everything submitted at least once (pending correction and later).
    #[default]
    Submitted,
    AcceptedOnly,
    All,
}

impl CountingPolicy {
    pub fn admits(self, state: WorkflowState) -> bool {
        match self {
            CountingPolicy::Submitted => state.is_submitted(),
            CountingPolicy::AcceptedOnly => state == WorkflowState::Accepted,
            CountingPolicy::All => true,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CountingPolicy::Submitted => "submitted",
            CountingPolicy::AcceptedOnly => "accepted_only",
            CountingPolicy::All => "all",
        }
    }
}

impl core::str::FromStr for CountingPolicy {
    type Err = crate::model::UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            CountingPolicy::Submitted,
            CountingPolicy::AcceptedOnly,
            CountingPolicy::All,
        ]
        .into_iter()
        .find(|p| p.name() == s)
        .ok_or_else(|| crate::model::UnknownName(s.into()))
    }
}

/// Synset and synonym-entry counts per POS. Synonyms are counted as entries,
/// not as unique lemmas.
pub fn inventory<'a, I>(records: I, policy: CountingPolicy) -> InventoryReport
where
    I: IntoIterator<Item = &'a TranslationRecord>,
{
    let mut rows = [InventoryRow::default(); 4];
    for r in records {
        if r.is_gap || !policy.admits(r.state) {
            continue;
        }
        let row = &mut rows[r.source.pos.bucket().index()];
        row.synsets += 1;
        row.synonyms += r.synonyms.len() as u64;
    }
    PosTable::from_rows(rows)
}

/// The same table over the source wordnet: synsets and lemma entries.
pub fn source_inventory<'a, I>(sources: I) -> InventoryReport
where
    I: IntoIterator<Item = &'a SourceSynset>,
{
    let mut rows = [InventoryRow::default(); 4];
    for s in sources {
        let row = &mut rows[s.id.pos.bucket().index()];
        row.synsets += 1;
        row.synonyms += s.lemmas.len() as u64;
    }
    PosTable::from_rows(rows)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnrichmentRow {
    pub synonyms_added: u64,
    pub synonyms_excluded: u64,
    pub glosses_added: u64,
    pub examples_added: u64,
    pub gaps_identified: u64,
    pub phrases_added: u64,
}

impl Tally for EnrichmentRow {
    fn merge(self, o: Self) -> Self {
        EnrichmentRow {
            synonyms_added: self.synonyms_added + o.synonyms_added,
            synonyms_excluded: self.synonyms_excluded + o.synonyms_excluded,
            glosses_added: self.glosses_added + o.glosses_added,
            examples_added: self.examples_added + o.examples_added,
            gaps_identified: self.gaps_identified + o.gaps_identified,
            phrases_added: self.phrases_added + o.phrases_added,
        }
    }
}

impl EnrichmentRow {
    pub const METRICS: [Metric<EnrichmentRow>; 6] = [
        ("synonyms_added", |r| r.synonyms_added),
        ("synonyms_excluded", |r| r.synonyms_excluded),
        ("glosses_added", |r| r.glosses_added),
        ("examples_added", |r| r.examples_added),
        ("gaps_identified", |r| r.gaps_identified),
        ("phrases_added", |r| r.phrases_added),
    ];
}

pub type EnrichmentDiff = PosTable<EnrichmentRow>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffOutcome {
    pub diff: EnrichmentDiff,
    /// Baseline records with no counterpart in the current set; ignored.
    pub unmatched_baseline: Vec<SynsetId>,
}

fn phrase_set(r: &TranslationRecord) -> BTreeSet<String> {
    r.phrases
        .iter()
        .map(|p| normalize_lemma(p))
        .filter(|p| !p.is_empty())
        .collect()
}

fn record_delta(base: Option<&TranslationRecord>, cur: &TranslationRecord) -> EnrichmentRow {
    let base_lemmas = base.map(|b| b.lemma_set()).unwrap_or_default();
    let cur_lemmas = cur.lemma_set();
    let base_phrases = base.map(phrase_set).unwrap_or_default();
    let base_gloss = base.is_some_and(|b| !b.gloss.trim().is_empty());
    let base_examples = base.map_or(0, |b| b.example_count());
    let base_gap = base.is_some_and(|b| b.is_gap);
    EnrichmentRow {
        synonyms_added: cur_lemmas.difference(&base_lemmas).count() as u64,
        synonyms_excluded: base_lemmas.difference(&cur_lemmas).count() as u64,
        glosses_added: u64::from(!base_gloss && !cur.gloss.trim().is_empty()),
        examples_added: cur.example_count().saturating_sub(base_examples) as u64,
        gaps_identified: u64::from(cur.is_gap && !base_gap),
        phrases_added: phrase_set(cur).difference(&base_phrases).count() as u64,
    }
}

/// What the current record set adds to and removes from a baseline, matched
/// by synset id.
pub fn enrichment_diff(
    baseline: &BTreeMap<SynsetId, TranslationRecord>,
    current: &BTreeMap<SynsetId, TranslationRecord>,
) -> DiffOutcome {
    let mut rows = [EnrichmentRow::default(); 4];
    for (id, cur) in current {
        let row = &mut rows[id.pos.bucket().index()];
        *row = row.merge(record_delta(baseline.get(id), cur));
    }
    DiffOutcome {
        diff: PosTable::from_rows(rows),
        unmatched_baseline: baseline
            .keys()
            .filter(|id| !current.contains_key(id))
            .copied()
            .collect(),
    }
}

/// Per-record rejection counts, bucketed by how many rejections a record
/// went through.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopMetrics {
    pub records: u64,
    /// rejections by a corrector → number of records with that many
    pub corrector: BTreeMap<u64, u64>,
    pub expert: BTreeMap<u64, u64>,
    pub corrector_rejects: u64,
    pub expert_rejects: u64,
}

pub fn loop_metrics<'a, I>(records: I) -> LoopMetrics
where
    I: IntoIterator<Item = &'a TranslationRecord>,
{
    let mut m = LoopMetrics::default();
    for r in records {
        let count = |role| {
            r.history
                .iter()
                .filter(|e| e.action == Action::Reject && e.role == role)
                .count() as u64
        };
        let (c, e) = (count(Role::Corrector), count(Role::Expert));
        m.records += 1;
        *m.corrector.entry(c).or_default() += 1;
        *m.expert.entry(e).or_default() += 1;
        m.corrector_rejects += c;
        m.expert_rejects += e;
    }
    m
}
