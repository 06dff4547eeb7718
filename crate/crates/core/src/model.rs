//! Shared domain types: synset identifiers, source synsets, translation
//! records and their audit history, and validation findings.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// WordNet part-of-speech tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pos {
    Noun,
    Verb,
    Adjective,
    AdjectiveSatellite,
    Adverb,
}

impl Pos {
    pub const ALL: [Pos; 5] = [
        Pos::Noun,
        Pos::Verb,
        Pos::Adjective,
        Pos::AdjectiveSatellite,
        Pos::Adverb,
    ];

    /// The single-letter `ss_type` used by WNDB files.
    pub fn tag(self) -> char {
        match self {
            Pos::Noun => 'n',
            Pos::Verb => 'v',
            Pos::Adjective => 'a',
            Pos::AdjectiveSatellite => 's',
            Pos::Adverb => 'r',
        }
    }

    pub fn from_tag(tag: char) -> Option<Pos> {
        Some(match tag {
            'n' => Pos::Noun,
            'v' => Pos::Verb,
            'a' => Pos::Adjective,
            's' => Pos::AdjectiveSatellite,
            'r' => Pos::Adverb,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Pos::Noun => "noun",
            Pos::Verb => "verb",
            Pos::Adjective => "adjective",
            Pos::AdjectiveSatellite => "adjective_satellite",
            Pos::Adverb => "adverb",
        }
    }

    /// Statistics row this tag is reported under. Satellites fold into
    /// adjectives.
    pub fn bucket(self) -> PosBucket {
        match self {
            Pos::Noun => PosBucket::Nouns,
            Pos::Verb => PosBucket::Verbs,
            Pos::Adjective | Pos::AdjectiveSatellite => PosBucket::Adjectives,
            Pos::Adverb => PosBucket::Adverbs,
        }
    }

    /// Adjectives and satellites share one WNDB file and offset space.
    pub fn shares_offsets_with(self, other: Pos) -> bool {
        self.bucket() == other.bucket()
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown part of speech {0:?}")]
pub struct UnknownPos(pub String);

impl FromStr for Pos {
    type Err = UnknownPos;

    /// Accepts the WNDB letter or the long name.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        if let (Some(c), None) = (chars.next(), chars.next()) {
            if let Some(pos) = Pos::from_tag(c) {
                return Ok(pos);
            }
        }
        Pos::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| UnknownPos(s.to_string()))
    }
}

/// The four rows of the inventory and enrichment tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PosBucket {
    Nouns,
    Verbs,
    Adjectives,
    Adverbs,
}

impl PosBucket {
    pub const ALL: [PosBucket; 4] = [
        PosBucket::Nouns,
        PosBucket::Verbs,
        PosBucket::Adjectives,
        PosBucket::Adverbs,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            PosBucket::Nouns => "nouns",
            PosBucket::Verbs => "verbs",
            PosBucket::Adjectives => "adjectives",
            PosBucket::Adverbs => "adverbs",
        }
    }
}

/// Eight-digit WNDB byte offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Offset(u32);

impl Offset {
    pub const MAX: u32 = 99_999_999;

    pub fn new(value: u32) -> Option<Offset> {
        (value <= Self::MAX).then_some(Offset(value))
    }

    pub fn value(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Offset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:08}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdError {
    #[error("offset {0:?} is not exactly 8 decimal digits")]
    BadOffset(String),
    #[error(transparent)]
    Pos(#[from] UnknownPos),
    #[error("synset id {0:?} is not of the form pos:offset")]
    BadId(String),
}

impl FromStr for Offset {
    type Err = IdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.len() != 8 || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(IdError::BadOffset(s.to_string()));
        }
        // eight ASCII digits always fit
        Ok(Offset(
            s.parse().map_err(|_| IdError::BadOffset(s.to_string()))?,
        ))
    }
}

impl Serialize for Offset {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Offset {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Identity of a source synset: part of speech plus WNDB offset.
///
/// Renders as `n:00001740`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SynsetId {
    pub pos: Pos,
    pub offset: Offset,
}

impl SynsetId {
    pub fn new(pos: Pos, offset: Offset) -> SynsetId {
        SynsetId { pos, offset }
    }

    /// Convenience constructor; panics on an out-of-range offset.
    pub fn from_parts(pos: Pos, offset: u32) -> SynsetId {
        SynsetId {
            pos,
            offset: Offset::new(offset).expect("offset exceeds 8 digits"),
        }
    }
}

impl fmt::Display for SynsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.pos.tag(), self.offset)
    }
}

impl FromStr for SynsetId {
    type Err = IdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (pos, offset) = s
            .split_once(':')
            .ok_or_else(|| IdError::BadId(s.to_string()))?;
        Ok(SynsetId {
            pos: pos.parse()?,
            offset: offset.parse()?,
        })
    }
}

impl Serialize for SynsetId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SynsetId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SourceSynsetError {
    #[error("synset has no lemmas")]
    NoLemmas,
    #[error("duplicate lemma {0:?}")]
    DuplicateLemma(String),
    #[error("empty gloss")]
    EmptyGloss,
    #[error("synset lists itself as hypernym")]
    SelfHypernym,
    #[error("lexicographer file number {0} out of range")]
    LexFile(u8),
}

/// An English synset as read from the source wordnet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceSynset {
    pub id: SynsetId,
    pub lemmas: Vec<String>,
    pub gloss: String,
    #[serde(default)]
    pub examples: Vec<String>,
    #[serde(default)]
    pub hypernyms: Vec<SynsetId>,
    pub lex_file: u8,
}

impl SourceSynset {
    /// Builds a source synset, checking its invariants.
    pub fn new(
        id: SynsetId,
        lemmas: Vec<String>,
        gloss: String,
        examples: Vec<String>,
        hypernyms: Vec<SynsetId>,
        lex_file: u8,
    ) -> Result<SourceSynset, SourceSynsetError> {
        let synset = SourceSynset {
            id,
            lemmas,
            gloss,
            examples,
            hypernyms,
            lex_file,
        };
        synset.check()?;
        Ok(synset)
    }

    pub fn check(&self) -> Result<(), SourceSynsetError> {
        if self.lemmas.is_empty() {
            return Err(SourceSynsetError::NoLemmas);
        }
        let mut seen: Vec<String> = Vec::with_capacity(self.lemmas.len());
        for lemma in &self.lemmas {
            let folded = lemma.to_lowercase();
            if seen.contains(&folded) {
                return Err(SourceSynsetError::DuplicateLemma(lemma.clone()));
            }
            seen.push(folded);
        }
        if self.gloss.trim().is_empty() {
            return Err(SourceSynsetError::EmptyGloss);
        }
        if self.hypernyms.contains(&self.id) {
            return Err(SourceSynsetError::SelfHypernym);
        }
        if self.lex_file > 99 {
            return Err(SourceSynsetError::LexFile(self.lex_file));
        }
        Ok(())
    }
}

/// A target-language synonym with its commonness rank and examples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Synonym {
    pub lemma: String,
    pub rank: u32,
    #[serde(default)]
    pub examples: Vec<String>,
}

impl Synonym {
    pub fn new(lemma: impl Into<String>, rank: u32, examples: Vec<String>) -> Synonym {
        Synonym {
            lemma: lemma.into(),
            rank,
            examples,
        }
    }
}

/// Ranks synonyms 1..k in the order given.
pub fn ranked<I, S>(lemmas: I) -> Vec<Synonym>
where
    I: IntoIterator<Item = (S, Vec<String>)>,
    S: Into<String>,
{
    lemmas
        .into_iter()
        .zip(1..)
        .map(|((lemma, examples), rank)| Synonym::new(lemma, rank, examples))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WorkflowState {
    Untranslated,
    NotUnderstood,
    PendingCorrection,
    ReturnedToTranslator,
    PendingExpert,
    ReturnedToCorrector,
    Accepted,
}

impl WorkflowState {
    pub const ALL: [WorkflowState; 7] = [
        WorkflowState::Untranslated,
        WorkflowState::NotUnderstood,
        WorkflowState::PendingCorrection,
        WorkflowState::ReturnedToTranslator,
        WorkflowState::PendingExpert,
        WorkflowState::ReturnedToCorrector,
        WorkflowState::Accepted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            WorkflowState::Untranslated => "untranslated",
            WorkflowState::NotUnderstood => "not_understood",
            WorkflowState::PendingCorrection => "pending_correction",
            WorkflowState::ReturnedToTranslator => "returned_to_translator",
            WorkflowState::PendingExpert => "pending_expert",
            WorkflowState::ReturnedToCorrector => "returned_to_corrector",
            WorkflowState::Accepted => "accepted",
        }
    }

    /// States whose content must be complete (synonyms and gloss, or a gap).
    pub fn requires_content(self) -> bool {
        matches!(
            self,
            WorkflowState::PendingCorrection
                | WorkflowState::PendingExpert
                | WorkflowState::Accepted
        )
    }

    /// Every state that the translator has moved past at least once.
    pub fn is_submitted(self) -> bool {
        !matches!(
            self,
            WorkflowState::Untranslated | WorkflowState::NotUnderstood
        )
    }
}

impl fmt::Display for WorkflowState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown name {0:?}")]
pub struct UnknownName(pub String);

impl FromStr for WorkflowState {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        WorkflowState::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| UnknownName(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Translator,
    Corrector,
    Expert,
}

impl Role {
    pub const ALL: [Role; 3] = [Role::Translator, Role::Corrector, Role::Expert];

    pub fn name(self) -> &'static str {
        match self {
            Role::Translator => "translator",
            Role::Corrector => "corrector",
            Role::Expert => "expert",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Role {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Role::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| UnknownName(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    Submit,
    MarkNotUnderstood,
    Reassign,
    Accept,
    Reject,
    Resubmit,
}

impl Action {
    pub const ALL: [Action; 6] = [
        Action::Submit,
        Action::MarkNotUnderstood,
        Action::Reassign,
        Action::Accept,
        Action::Reject,
        Action::Resubmit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Action::Submit => "submit",
            Action::MarkNotUnderstood => "mark_not_understood",
            Action::Reassign => "reassign",
            Action::Accept => "accept",
            Action::Reject => "reject",
            Action::Resubmit => "resubmit",
        }
    }

    pub fn requires_note(self) -> bool {
        matches!(self, Action::Reject | Action::MarkNotUnderstood)
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Action {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Action::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| UnknownName(s.to_string()))
    }
}

/// Milliseconds since the Unix epoch, UTC.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Timestamp(pub i64);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UserId(pub String);

impl UserId {
    pub fn new(id: impl Into<String>) -> UserId {
        UserId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for UserId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// One audited action in a record's history.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkflowEvent {
    pub actor: UserId,
    pub role: Role,
    pub action: Action,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub timestamp: Timestamp,
    /// Record revision after this event.
    pub revision: u64,
    /// Non-blocking findings present when the transition was taken.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<Finding>,
}

/// The evolving target-language counterpart of one source synset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslationRecord {
    pub source: SynsetId,
    pub state: WorkflowState,
    pub is_gap: bool,
    #[serde(default)]
    pub phrases: Vec<String>,
    #[serde(default)]
    pub synonyms: Vec<Synonym>,
    #[serde(default)]
    pub gloss: String,
    #[serde(default)]
    pub not_understood: bool,
    pub revision: u64,
    #[serde(default)]
    pub history: Vec<WorkflowEvent>,
}

impl TranslationRecord {
    /// Fresh, untranslated record for a source synset.
    pub fn new(source: &SourceSynset) -> TranslationRecord {
        TranslationRecord::for_id(source.id)
    }

    pub fn for_id(source: SynsetId) -> TranslationRecord {
        TranslationRecord {
            source,
            state: WorkflowState::Untranslated,
            is_gap: false,
            phrases: Vec::new(),
            synonyms: Vec::new(),
            gloss: String::new(),
            not_understood: false,
            revision: 0,
            history: Vec::new(),
        }
    }

    /// Synonyms in rank order.
    pub fn synonyms_by_rank(&self) -> Vec<&Synonym> {
        let mut sorted: Vec<&Synonym> = self.synonyms.iter().collect();
        sorted.sort_by_key(|s| s.rank);
        sorted
    }

    /// Normalized lemmas that count as this record's vocabulary. Gap records
    /// contribute none.
    pub fn lemma_set(&self) -> alloc::collections::BTreeSet<String> {
        if self.is_gap {
            return Default::default();
        }
        self.synonyms
            .iter()
            .map(|s| normalize_lemma(&s.lemma))
            .filter(|l| !l.is_empty())
            .collect()
    }

    pub fn example_count(&self) -> usize {
        self.synonyms.iter().map(|s| s.examples.len()).sum()
    }

    /// Whether the state/content coupling holds: a gap has phrases and no
    /// synonyms, and a non-gap record in a content-bearing state has both
    /// synonyms and a gloss.
    pub fn content_consistent(&self) -> bool {
        if self.is_gap {
            return self.synonyms.is_empty() && !self.phrases.is_empty();
        }
        if self.state.requires_content() {
            return !self.synonyms.is_empty() && !self.gloss.trim().is_empty();
        }
        true
    }
}

/// The source and target sides of a project, keyed by synset id.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Project {
    pub sources: BTreeMap<SynsetId, SourceSynset>,
    pub records: BTreeMap<SynsetId, TranslationRecord>,
}

impl Project {
    pub fn new() -> Project {
        Project::default()
    }

    /// Adds source synsets, creating an untranslated record for each one
    /// that has none yet.
    pub fn add_sources<I: IntoIterator<Item = SourceSynset>>(&mut self, sources: I) {
        for source in sources {
            self.records
                .entry(source.id)
                .or_insert_with(|| TranslationRecord::new(&source));
            self.sources.insert(source.id, source);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Severity {
    Error,
    Warning,
}

impl Severity {
    pub fn name(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Where a finding points: a record, optionally one synonym in it (0-based
/// position in the record's synonym list).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Locus {
    pub record: SynsetId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synonym: Option<usize>,
}

impl fmt::Display for Locus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.record)?;
        if let Some(index) = self.synonym {
            write!(f, "#{index}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Finding {
    pub rule_id: String,
    pub severity: Severity,
    pub locus: Locus,
    pub message: String,
}

impl Finding {
    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

/// Strips surrounding whitespace and collapses internal whitespace runs to a
/// single space. Everything else, diacritics included, is kept as is.
pub fn normalize_lemma(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    for token in raw.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(token);
    }
    out
}
