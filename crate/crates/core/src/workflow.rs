//! Three-stage review state machine: translation, correction, final expert
//! review. Rejections loop back one stage and always carry a note.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    normalize_lemma, Action, Finding, Project, Role, SourceSynset, Synonym, SynsetId, Timestamp,
    TranslationRecord, UserId, WorkflowEvent, WorkflowState,
};
use crate::validation::{self, SpecializationIndex, TransitionCheckError};

use Action::*;
use Role::*;
use WorkflowState::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransitionRule {
    pub from: WorkflowState,
    pub action: Action,
    pub role: Role,
    pub to: WorkflowState,
}

const fn t(from: WorkflowState, action: Action, role: Role, to: WorkflowState) -> TransitionRule {
    TransitionRule {
        from,
        action,
        role,
        to,
    }
}

/// The complete transition table. Any triple not listed is illegal.
pub static TRANSITIONS: &[TransitionRule] = &[
    t(Untranslated, Submit, Translator, PendingCorrection),
    t(Untranslated, MarkNotUnderstood, Translator, NotUnderstood),
    t(NotUnderstood, Reassign, Corrector, Untranslated),
    t(PendingCorrection, Accept, Corrector, PendingExpert),
    t(PendingCorrection, Reject, Corrector, ReturnedToTranslator),
    t(
        ReturnedToTranslator,
        Resubmit,
        Translator,
        PendingCorrection,
    ),
    t(PendingExpert, Accept, Expert, Accepted),
    t(PendingExpert, Reject, Expert, ReturnedToCorrector),
    t(ReturnedToCorrector, Resubmit, Corrector, PendingExpert),
];

pub fn next_state(from: WorkflowState, action: Action, role: Role) -> Option<WorkflowState> {
    TRANSITIONS
        .iter()
        .find(|r| r.from == from && r.action == action && r.role == role)
        .map(|r| r.to)
}

pub fn is_successor(from: WorkflowState, to: WorkflowState) -> bool {
    TRANSITIONS.iter().any(|r| r.from == from && r.to == to)
}

/// Legal (action, role) pairs out of `state`.
pub fn moves_from(state: WorkflowState) -> impl Iterator<Item = &'static TransitionRule> {
    TRANSITIONS.iter().filter(move |r| r.from == state)
}

/// States whose records sit in a role's work queue.
pub fn queue_states(role: Role) -> &'static [WorkflowState] {
    match role {
        Translator => &[Untranslated, ReturnedToTranslator],
        Corrector => &[PendingCorrection, ReturnedToCorrector, NotUnderstood],
        Expert => &[PendingExpert],
    }
}

/// Whether `action` may carry content edits when taken by `role`. The
/// corrector can answer a translation with counter-proposals on reject.
pub fn accepts_edits(action: Action, role: Role) -> bool {
    matches!(
        (action, role),
        (Submit, _) | (Resubmit, _) | (Reject, Corrector)
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WorkflowError {
    #[error("{action} by {role} is not allowed in state {state}")]
    IllegalTransition {
        state: WorkflowState,
        action: Action,
        role: Role,
    },
    #[error("{0} requires a note")]
    MissingNote(Action),
    #[error("blocked by {} error finding(s)", .0.len())]
    ValidationBlocked(Vec<Finding>),
    #[error("{actor} already acted on this record as {earlier}")]
    DutySeparationViolation { actor: UserId, earlier: Role },
    #[error("stale revision: expected {expected}, record is at {current}")]
    StaleRevision { expected: u64, current: u64 },
    #[error("{0} does not take content edits")]
    EditsNotAllowed(Action),
    #[error("a lexical gap needs at least one phrase")]
    EmptyPhrases,
    #[error("{role} cannot edit a record in state {state}")]
    NotEditable { state: WorkflowState, role: Role },
    #[error("record is claimed by {0}")]
    AlreadyClaimed(UserId),
    #[error("state {state} is not in the {role} queue")]
    WrongQueue { state: WorkflowState, role: Role },
    #[error("event revision {got} does not follow record revision {current}")]
    OutOfOrder { got: u64, current: u64 },
}

/// Content changes bundled with a transition. Absent fields are left as is.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edits {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub is_gap: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phrases: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synonyms: Option<Vec<Synonym>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gloss: Option<String>,
}

impl Edits {
    pub fn is_empty(&self) -> bool {
        self.is_gap.is_none()
            && self.phrases.is_none()
            && self.synonyms.is_none()
            && self.gloss.is_none()
    }

    /// Applies the edits. Turning a record into a gap drops its synonyms and
    /// turning a gap back into a word drops its phrases, unless the edits set
    /// those lists explicitly.
    pub fn apply_to(&self, record: &mut TranslationRecord) {
        if let Some(gap) = self.is_gap {
            record.is_gap = gap;
            if gap && self.synonyms.is_none() {
                record.synonyms.clear();
            }
            if !gap && self.phrases.is_none() {
                record.phrases.clear();
            }
        }
        if let Some(phrases) = &self.phrases {
            record.phrases = phrases.clone();
        }
        if let Some(synonyms) = &self.synonyms {
            record.synonyms = synonyms.clone();
        }
        if let Some(gloss) = &self.gloss {
            record.gloss = gloss.clone();
        }
    }
}

/// A requested workflow action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub action: Action,
    pub actor: UserId,
    pub role: Role,
    pub note: Option<String>,
    pub edits: Option<Edits>,
    /// Optimistic concurrency check; `None` skips it.
    pub expected_revision: Option<u64>,
    pub at: Timestamp,
}

impl Transition {
    pub fn new(action: Action, actor: impl Into<String>, role: Role) -> Transition {
        Transition {
            action,
            actor: UserId(actor.into()),
            role,
            note: None,
            edits: None,
            expected_revision: None,
            at: Timestamp::default(),
        }
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn edits(mut self, edits: Edits) -> Self {
        self.edits = Some(edits);
        self
    }

    pub fn expecting(mut self, revision: u64) -> Self {
        self.expected_revision = Some(revision);
        self
    }

    pub fn at(mut self, at: Timestamp) -> Self {
        self.at = at;
        self
    }
}

fn last_actor<'a>(
    record: &'a TranslationRecord,
    role: Role,
    actions: &[Action],
) -> Option<&'a UserId> {
    record
        .history
        .iter()
        .rev()
        .find(|e| e.role == role && actions.contains(&e.action))
        .map(|e| &e.actor)
}

fn check_duties(record: &TranslationRecord, tr: &Transition) -> Result<(), WorkflowError> {
    if !matches!(tr.action, Accept | Reject) {
        return Ok(());
    }
    let mut earlier = Vec::new();
    if matches!(tr.role, Corrector | Expert) {
        earlier.push((
            Translator,
            last_actor(record, Translator, &[Submit, Resubmit]),
        ));
    }
    if tr.role == Expert {
        earlier.push((
            Corrector,
            last_actor(record, Corrector, &[Accept, Resubmit]),
        ));
    }
    for (role, actor) in earlier {
        if actor == Some(&tr.actor) {
            return Err(WorkflowError::DutySeparationViolation {
                actor: tr.actor.clone(),
                earlier: role,
            });
        }
    }
    Ok(())
}

/// Moves the record to its next state and appends the event. Shared by
/// live transitions and log replay so both produce identical records.
fn commit(
    mut record: TranslationRecord,
    to: WorkflowState,
    event: WorkflowEvent,
    edits: Option<&Edits>,
) -> TranslationRecord {
    if let Some(edits) = edits {
        edits.apply_to(&mut record);
    }
    match event.action {
        MarkNotUnderstood => record.not_understood = true,
        Reassign => record.not_understood = false,
        _ => {}
    }
    record.state = to;
    record.revision = event.revision;
    record.history.push(event);
    record
}

/// Applies a transition, returning the updated record. The input record is
/// untouched on error.
pub fn apply(
    record: &TranslationRecord,
    tr: Transition,
    project: &Project,
) -> Result<TranslationRecord, WorkflowError> {
    let index = SpecializationIndex::new(project);
    apply_indexed(record, tr, project.sources.get(&record.source), &index)
}

/// [`apply`] with a prebuilt specialization index.
pub fn apply_indexed(
    record: &TranslationRecord,
    tr: Transition,
    source: Option<&SourceSynset>,
    index: &SpecializationIndex<'_>,
) -> Result<TranslationRecord, WorkflowError> {
    if let Some(expected) = tr.expected_revision {
        if expected != record.revision {
            return Err(WorkflowError::StaleRevision {
                expected,
                current: record.revision,
            });
        }
    }
    let to =
        next_state(record.state, tr.action, tr.role).ok_or(WorkflowError::IllegalTransition {
            state: record.state,
            action: tr.action,
            role: tr.role,
        })?;
    check_duties(record, &tr)?;
    let note = tr.note.filter(|n| !n.trim().is_empty());
    if tr.action.requires_note() && note.is_none() {
        return Err(WorkflowError::MissingNote(tr.action));
    }
    let edits = tr.edits.filter(|e| !e.is_empty());
    if edits.is_some() && !accepts_edits(tr.action, tr.role) {
        return Err(WorkflowError::EditsNotAllowed(tr.action));
    }

    let warnings = if to.requires_content() || edits.is_some() {
        let mut candidate = record.clone();
        if let Some(edits) = &edits {
            edits.apply_to(&mut candidate);
        }
        validation::validate_for_transition(&candidate, source, to, index).map_err(|e| match e {
            TransitionCheckError::Blocked(findings) => WorkflowError::ValidationBlocked(findings),
            TransitionCheckError::IllegalTransition { .. } => WorkflowError::IllegalTransition {
                state: record.state,
                action: tr.action,
                role: tr.role,
            },
        })?
    } else {
        Vec::new()
    };

    let event = WorkflowEvent {
        actor: tr.actor,
        role: tr.role,
        action: tr.action,
        note,
        timestamp: tr.at,
        revision: record.revision + 1,
        warnings,
    };
    Ok(commit(record.clone(), to, event, edits.as_ref()))
}

/// Re-applies a logged event without validation. Only the transition table
/// and revision ordering are checked.
pub fn replay(
    record: &TranslationRecord,
    event: WorkflowEvent,
    edits: Option<&Edits>,
) -> Result<TranslationRecord, WorkflowError> {
    let to = next_state(record.state, event.action, event.role).ok_or(
        WorkflowError::IllegalTransition {
            state: record.state,
            action: event.action,
            role: event.role,
        },
    )?;
    if event.revision != record.revision + 1 {
        return Err(WorkflowError::OutOfOrder {
            got: event.revision,
            current: record.revision,
        });
    }
    Ok(commit(record.clone(), to, event, edits))
}

/// Prepares the edit that turns a record into a lexical gap with the given
/// substitute phrases. The edit travels with the next submit or resubmit.
pub fn mark_gap(
    record: &TranslationRecord,
    phrases: Vec<String>,
    role: Role,
) -> Result<Edits, WorkflowError> {
    if role != Translator || !matches!(record.state, Untranslated | ReturnedToTranslator) {
        return Err(WorkflowError::NotEditable {
            state: record.state,
            role,
        });
    }
    let phrases: Vec<String> = phrases
        .iter()
        .map(|p| normalize_lemma(p))
        .filter(|p| !p.is_empty())
        .collect();
    if phrases.is_empty() {
        return Err(WorkflowError::EmptyPhrases);
    }
    Ok(Edits {
        is_gap: Some(true),
        phrases: Some(phrases),
        synonyms: Some(Vec::new()),
        gloss: None,
    })
}

/// English side of a synset as shown to reviewers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceView {
    pub lemmas: Vec<String>,
    pub gloss: String,
    pub examples: Vec<String>,
}

impl From<&SourceSynset> for SourceView {
    fn from(s: &SourceSynset) -> Self {
        SourceView {
            lemmas: s.lemmas.clone(),
            gloss: s.gloss.clone(),
            examples: s.examples.clone(),
        }
    }
}

/// Target-language content of a record, with its review history.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetView {
    pub id: SynsetId,
    pub state: WorkflowState,
    pub revision: u64,
    pub is_gap: bool,
    pub phrases: Vec<String>,
    pub synonyms: Vec<Synonym>,
    pub gloss: String,
    pub not_understood: bool,
    pub history: Vec<WorkflowEvent>,
}

impl From<&TranslationRecord> for TargetView {
    fn from(r: &TranslationRecord) -> Self {
        TargetView {
            id: r.source,
            state: r.state,
            revision: r.revision,
            is_gap: r.is_gap,
            phrases: r.phrases.clone(),
            synonyms: r.synonyms.clone(),
            gloss: r.gloss.clone(),
            not_understood: r.not_understood,
            history: r.history.clone(),
        }
    }
}

/// Expert view: target content only, plus the English synset when the
/// record claims a lexical gap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RedactedView {
    pub target: TargetView,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub english: Option<SourceView>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullView {
    pub target: TargetView,
    pub english: Option<SourceView>,
    #[serde(default)]
    pub hypernyms: Vec<SynsetId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "view", rename_all = "snake_case")]
pub enum RecordView {
    Full(FullView),
    Redacted(RedactedView),
}

pub fn view_for(
    record: &TranslationRecord,
    source: Option<&SourceSynset>,
    role: Role,
) -> RecordView {
    let target = TargetView::from(record);
    match role {
        Expert => RecordView::Redacted(RedactedView {
            target,
            english: if record.is_gap {
                source.map(SourceView::from)
            } else {
                None
            },
        }),
        Translator | Corrector => RecordView::Full(FullView {
            target,
            english: source.map(SourceView::from),
            hypernyms: source.map(|s| s.hypernyms.clone()).unwrap_or_default(),
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub actor: UserId,
    pub role: Role,
    pub at: Timestamp,
}

/// Who is working on which record. Claims do not expire; they are dropped
/// when the record moves on or when released explicitly.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClaimBoard {
    claims: BTreeMap<SynsetId, Claim>,
}

impl ClaimBoard {
    pub fn new() -> Self {
        Self::default()
    }

    /// Claims `record` for `actor`. Claims held by another role are stale
    /// and get replaced.
    pub fn assign(
        &mut self,
        record: &TranslationRecord,
        actor: &UserId,
        role: Role,
        at: Timestamp,
    ) -> Result<Claim, WorkflowError> {
        if !queue_states(role).contains(&record.state) {
            return Err(WorkflowError::WrongQueue {
                state: record.state,
                role,
            });
        }
        if let Some(existing) = self.claims.get(&record.source) {
            if existing.role == role && &existing.actor != actor {
                return Err(WorkflowError::AlreadyClaimed(existing.actor.clone()));
            }
        }
        let claim = Claim {
            actor: actor.clone(),
            role,
            at,
        };
        self.claims.insert(record.source, claim.clone());
        Ok(claim)
    }

    pub fn get(&self, id: &SynsetId) -> Option<&Claim> {
        self.claims.get(id)
    }

    /// Whether `actor` may act on the record: unclaimed, or claimed by them.
    pub fn permits(&self, id: &SynsetId, actor: &UserId, role: Role) -> bool {
        match self.claims.get(id) {
            Some(c) if c.role == role => &c.actor == actor,
            _ => true,
        }
    }

    pub fn release(&mut self, id: &SynsetId) -> Option<Claim> {
        self.claims.remove(id)
    }

    pub fn release_all(&mut self) -> usize {
        let n = self.claims.len();
        self.claims.clear();
        n
    }

    pub fn len(&self) -> usize {
        self.claims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.claims.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SynsetId, &Claim)> {
        self.claims.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ranked, Pos};
    use alloc::string::ToString;
    use alloc::vec;

    fn id() -> SynsetId {
        SynsetId::from_parts(Pos::Noun, 2958343)
    }

    fn project() -> Project {
        let mut p = Project::new();
        p.add_sources([SourceSynset::new(
            id(),
            vec!["car".into()],
            "a motor vehicle".into(),
            vec![],
            vec![],
            6,
        )
        .unwrap()]);
        p
    }

    fn good_edits() -> Edits {
        Edits {
            gloss: Some("مركبة ذات أربع عجلات".into()),
            synonyms: Some(ranked([("سيارة", vec!["ركبت السيارة".to_string()])])),
            ..Edits::default()
        }
    }

    fn submitted(p: &Project) -> TranslationRecord {
        let r = &p.records[&id()];
        apply(
            r,
            Transition::new(Submit, "tom", Translator).edits(good_edits()),
            p,
        )
        .unwrap()
    }

    #[test]
    fn table_is_closed() {
        assert!(moves_from(Accepted).next().is_none());
        for state in [ReturnedToTranslator, ReturnedToCorrector] {
            assert_eq!(moves_from(state).count(), 1);
        }
        assert_eq!(
            next_state(PendingExpert, Reject, Expert),
            Some(ReturnedToCorrector)
        );
        assert_eq!(next_state(PendingExpert, Reject, Corrector), None);
    }

    #[test]
    fn submit_moves_to_correction() {
        let p = project();
        let r = submitted(&p);
        assert_eq!(r.state, PendingCorrection);
        assert_eq!(r.revision, 1);
        assert_eq!(r.history.len(), 1);
        assert_eq!(r.history[0].revision, 1);
        assert_eq!(r.synonyms.len(), 1);
    }

    #[test]
    fn submit_blocked_on_errors() {
        let p = project();
        let r = &p.records[&id()];
        let err = apply(r, Transition::new(Submit, "tom", Translator), &p).unwrap_err();
        let WorkflowError::ValidationBlocked(f) = err else {
            panic!("{err:?}")
        };
        assert!(f.iter().any(|f| f.rule_id == "E03"));
    }

    #[test]
    fn reject_needs_note() {
        let p = project();
        let r = submitted(&p);
        let err = apply(&r, Transition::new(Reject, "cora", Corrector), &p).unwrap_err();
        assert_eq!(err, WorkflowError::MissingNote(Reject));
        let err = apply(
            &r,
            Transition::new(Reject, "cora", Corrector).note("  "),
            &p,
        )
        .unwrap_err();
        assert_eq!(err, WorkflowError::MissingNote(Reject));
        let back = apply(
            &r,
            Transition::new(Reject, "cora", Corrector).note("راجع المثال"),
            &p,
        )
        .unwrap();
        assert_eq!(back.state, ReturnedToTranslator);
    }

    #[test]
    fn expert_rejection_goes_to_corrector() {
        let p = project();
        let r = submitted(&p);
        let r = apply(&r, Transition::new(Accept, "cora", Corrector), &p).unwrap();
        let r = apply(
            &r,
            Transition::new(Reject, "ed", Expert).note("التعريف غير دقيق"),
            &p,
        )
        .unwrap();
        assert_eq!(r.state, ReturnedToCorrector);
        assert_eq!(
            r.history.last().unwrap().note.as_deref(),
            Some("التعريف غير دقيق")
        );
        let r = apply(
            &r,
            Transition::new(Resubmit, "cora", Corrector).edits(good_edits()),
            &p,
        )
        .unwrap();
        let r = apply(&r, Transition::new(Accept, "ed", Expert), &p).unwrap();
        assert_eq!(r.state, Accepted);
        assert_eq!(r.revision, 5);
        let revisions: Vec<u64> = r.history.iter().map(|e| e.revision).collect();
        assert_eq!(revisions, vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn duty_separation() {
        let p = project();
        let r = submitted(&p);
        let err = apply(&r, Transition::new(Accept, "tom", Corrector), &p).unwrap_err();
        assert!(matches!(err, WorkflowError::DutySeparationViolation { .. }));
        let r = apply(&r, Transition::new(Accept, "cora", Corrector), &p).unwrap();
        for actor in ["tom", "cora"] {
            let err = apply(&r, Transition::new(Accept, actor, Expert), &p).unwrap_err();
            assert!(matches!(err, WorkflowError::DutySeparationViolation { .. }));
        }
    }

    #[test]
    fn stale_revision() {
        let p = project();
        let r = submitted(&p);
        let err = apply(
            &r,
            Transition::new(Accept, "cora", Corrector).expecting(0),
            &p,
        )
        .unwrap_err();
        assert_eq!(
            err,
            WorkflowError::StaleRevision {
                expected: 0,
                current: 1
            }
        );
        assert!(apply(
            &r,
            Transition::new(Accept, "cora", Corrector).expecting(1),
            &p
        )
        .is_ok());
    }

    #[test]
    fn illegal_and_edits_not_allowed() {
        let p = project();
        let r = &p.records[&id()];
        let err = apply(r, Transition::new(Accept, "ed", Expert), &p).unwrap_err();
        assert!(matches!(err, WorkflowError::IllegalTransition { .. }));
        let r = submitted(&p);
        let err = apply(
            &r,
            Transition::new(Accept, "cora", Corrector).edits(good_edits()),
            &p,
        )
        .unwrap_err();
        assert_eq!(err, WorkflowError::EditsNotAllowed(Accept));
    }

    #[test]
    fn not_understood_and_reassign() {
        let p = project();
        let r = &p.records[&id()];
        let err = apply(r, Transition::new(MarkNotUnderstood, "tom", Translator), &p).unwrap_err();
        assert_eq!(err, WorkflowError::MissingNote(MarkNotUnderstood));
        let r = apply(
            r,
            Transition::new(MarkNotUnderstood, "tom", Translator).note("المعنى غامض"),
            &p,
        )
        .unwrap();
        assert_eq!(r.state, NotUnderstood);
        assert!(r.not_understood);
        let r = apply(&r, Transition::new(Reassign, "cora", Corrector), &p).unwrap();
        assert_eq!(r.state, Untranslated);
        assert!(!r.not_understood);
        assert_eq!(r.history[0].note.as_deref(), Some("المعنى غامض"));
    }

    #[test]
    fn gap_marking_and_counter_proposal() {
        let p = project();
        let r = &p.records[&id()];
        assert_eq!(
            mark_gap(r, vec![], Translator),
            Err(WorkflowError::EmptyPhrases)
        );
        assert_eq!(
            mark_gap(r, vec![" ".into()], Translator),
            Err(WorkflowError::EmptyPhrases)
        );
        assert!(matches!(
            mark_gap(r, vec!["x".into()], Expert),
            Err(WorkflowError::NotEditable { .. })
        ));

        let gap = mark_gap(r, vec!["بشكل معبر".into()], Translator).unwrap();
        let r = apply(r, Transition::new(Submit, "tom", Translator).edits(gap), &p).unwrap();
        assert!(r.is_gap && r.synonyms.is_empty());
        assert_eq!(r.phrases, vec!["بشكل معبر".to_string()]);

        let counter = Edits {
            is_gap: Some(false),
            synonyms: Some(ranked([("معبرا", vec![])])),
            ..Edits::default()
        };
        let r = apply(
            &r,
            Transition::new(Reject, "cora", Corrector)
                .note("توجد كلمة عربية")
                .edits(counter),
            &p,
        )
        .unwrap();
        assert_eq!(r.state, ReturnedToTranslator);
        assert!(!r.is_gap);
        assert!(r.phrases.is_empty());
        assert_eq!(r.synonyms[0].lemma, "معبرا");
        assert!(mark_gap(&r, vec!["بشكل معبر".into()], Translator).is_ok());
    }

    #[test]
    fn replay_matches_apply() {
        let p = project();
        let live = submitted(&p);
        let replayed = replay(
            &p.records[&id()],
            live.history[0].clone(),
            Some(&good_edits()),
        )
        .unwrap();
        assert_eq!(replayed, live);
        let mut bad = live.history[0].clone();
        bad.revision = 7;
        assert!(matches!(
            replay(&p.records[&id()], bad, None),
            Err(WorkflowError::OutOfOrder { .. })
        ));
    }

    #[test]
    fn views() {
        let p = project();
        let r = submitted(&p);
        let src = p.sources.get(&id());
        let RecordView::Redacted(v) = view_for(&r, src, Expert) else {
            panic!()
        };
        assert!(v.english.is_none());
        let RecordView::Full(v) = view_for(&r, src, Corrector) else {
            panic!()
        };
        assert_eq!(v.english.unwrap().lemmas, vec!["car".to_string()]);

        let mut gap = r.clone();
        gap.is_gap = true;
        gap.synonyms.clear();
        gap.phrases = vec!["بشكل معبر".into()];
        let RecordView::Redacted(v) = view_for(&gap, src, Expert) else {
            panic!()
        };
        assert_eq!(v.english.unwrap().gloss, "a motor vehicle");
    }

    #[test]
    fn claims() {
        let p = project();
        let r = &p.records[&id()];
        let mut board = ClaimBoard::new();
        let tom = UserId::new("tom");
        let tina = UserId::new("tina");
        board.assign(r, &tom, Translator, Timestamp(1)).unwrap();
        assert_eq!(
            board.assign(r, &tina, Translator, Timestamp(2)),
            Err(WorkflowError::AlreadyClaimed(tom.clone()))
        );
        assert!(board.assign(r, &tom, Translator, Timestamp(3)).is_ok());
        assert!(matches!(
            board.assign(r, &UserId::new("ed"), Expert, Timestamp(4)),
            Err(WorkflowError::WrongQueue { .. })
        ));
        assert!(board.permits(&id(), &tom, Translator));
        assert!(!board.permits(&id(), &tina, Translator));
        assert_eq!(board.release_all(), 1);
        assert!(board.is_empty());
    }
}
