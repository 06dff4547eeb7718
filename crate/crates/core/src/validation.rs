//! Registered quality rules over translation records.
//!
//! Record-local rules (`E0x`, `W0x`) check correctness and completeness of a
//! single record. The polysemy detectors look across synonyms of one record
//! (`W10`) or across records linked by hypernymy (`W11`). Findings are the
//! output of every check; nothing here fails except an illegal transition
//! request.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::rc::Rc;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cell::RefCell;

use thiserror::Error;

use crate::model::{
    normalize_lemma, Finding, Locus, PosBucket, Project, Severity, SourceSynset, Synonym, SynsetId,
    TranslationRecord, WorkflowState,
};
use crate::workflow;

/// One entry of the rule registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rule {
    pub id: &'static str,
    pub name: &'static str,
    pub severity: Severity,
    pub description: &'static str,
    /// Structural rules keep a record internally consistent and are enforced
    /// on every edit, not only on submissions.
    pub structural: bool,
}

macro_rules! rule {
    ($id:literal, $name:literal, $sev:ident, $structural:literal, $desc:literal) => {
        Rule {
            id: $id,
            name: $name,
            severity: Severity::$sev,
            description: $desc,
            structural: $structural,
        }
    };
}

pub const GAP_WITH_SYNONYMS: &str = "E01";
pub const GAP_WITHOUT_PHRASE: &str = "E02";
pub const EMPTY_GLOSS: &str = "E03";
pub const NO_SYNONYMS: &str = "E04";
pub const SYNONYM_WITHOUT_EXAMPLE: &str = "E05";
pub const DUPLICATE_LEMMA: &str = "E06";
pub const RANK_GAP: &str = "E07";
pub const EMPTY_LEMMA: &str = "E08";
pub const LATIN_SCRIPT: &str = "W01";
pub const EXAMPLE_MISSING_LEMMA: &str = "W02";
pub const GLOSS_TOO_SHORT: &str = "W03";
pub const NEAR_DUPLICATE_LEMMA: &str = "W04";
pub const COMPOUND_SUBSUMPTION: &str = "W10";
pub const SPECIALIZATION_POLYSEMY: &str = "W11";
pub const HIERARCHY_CYCLE: &str = "W12";

/// The fixed rule set.
pub static RULES: &[Rule] = &[
    rule!(
        "E01",
        "gap-with-synonyms",
        Error,
        true,
        "a lexical gap must not carry synonyms"
    ),
    rule!(
        "E02",
        "gap-without-phrase",
        Error,
        true,
        "a lexical gap needs at least one substitute phrase"
    ),
    rule!(
        "E03",
        "empty-gloss",
        Error,
        false,
        "a translated synset needs a gloss"
    ),
    rule!(
        "E04",
        "no-synonyms",
        Error,
        false,
        "a translated synset needs at least one synonym"
    ),
    rule!(
        "E05",
        "synonym-without-example",
        Error,
        false,
        "every synonym needs at least one example"
    ),
    rule!(
        "E06",
        "duplicate-lemma",
        Error,
        true,
        "two synonyms share a normalized lemma"
    ),
    rule!(
        "E07",
        "rank-gap",
        Error,
        true,
        "synonym ranks must be exactly 1..k"
    ),
    rule!(
        "E08",
        "empty-lemma",
        Error,
        true,
        "a synonym lemma is blank"
    ),
    rule!(
        "W01",
        "latin-script-in-target",
        Warning,
        false,
        "gloss or lemma contains Latin letters"
    ),
    rule!(
        "W02",
        "example-missing-lemma",
        Warning,
        false,
        "an example does not contain its synonym"
    ),
    rule!(
        "W03",
        "gloss-too-short",
        Warning,
        false,
        "gloss has fewer than three words"
    ),
    rule!(
        "W04",
        "near-duplicate-lemma",
        Warning,
        false,
        "two lemmas differ only in diacritics or hamza"
    ),
    rule!(
        "W10",
        "compound-subsumption",
        Warning,
        false,
        "lemma is a fragment of a longer synonym"
    ),
    rule!(
        "W11",
        "specialization-polysemy",
        Warning,
        false,
        "lemma also names a hypernym or hyponym"
    ),
    rule!(
        "W12",
        "hierarchy-cycle",
        Warning,
        false,
        "hypernym traversal hit a cycle"
    ),
];

pub fn rule(id: &str) -> Option<&'static Rule> {
    RULES.iter().find(|r| r.id == id)
}

fn finding(id: &'static str, record: SynsetId, synonym: Option<usize>, message: String) -> Finding {
    let rule = rule(id).expect("unregistered rule id");
    Finding {
        rule_id: rule.id.to_string(),
        severity: rule.severity,
        locus: Locus { record, synonym },
        message,
    }
}

/// Orders findings by rule id, then locus, then message.
pub fn sort_findings(findings: &mut Vec<Finding>) {
    findings.sort_by(|a, b| {
        (&a.rule_id, &a.locus, &a.message).cmp(&(&b.rule_id, &b.locus, &b.message))
    });
    findings.dedup();
}

fn has_latin(text: &str) -> bool {
    text.chars()
        .any(|c| c.is_ascii_alphabetic() || ('\u{00C0}'..='\u{024F}').contains(&c))
}

/// Folds Arabic diacritics, tatweel and hamza carriers. Only used to spot
/// near-duplicates; lemma identity never goes through this.
fn fold_arabic(text: &str) -> String {
    text.chars()
        .filter(|c| !matches!(c, '\u{064B}'..='\u{065F}' | '\u{0670}' | '\u{0640}'))
        .map(|c| match c {
            'أ' | 'إ' | 'آ' | 'ٱ' => 'ا',
            'ؤ' => 'و',
            'ئ' => 'ي',
            other => other,
        })
        .collect()
}

/// Record-local correctness and completeness rules.
///
/// `_source` is accepted for symmetry with the other checks; no record-local
/// rule reads the English side.
pub fn check_record(record: &TranslationRecord, _source: Option<&SourceSynset>) -> Vec<Finding> {
    let id = record.source;
    let mut out = Vec::new();

    if record.is_gap {
        if !record.synonyms.is_empty() {
            out.push(finding(
                GAP_WITH_SYNONYMS,
                id,
                None,
                format!("gap record carries {} synonym(s)", record.synonyms.len()),
            ));
        }
        if record.phrases.iter().all(|p| normalize_lemma(p).is_empty()) {
            out.push(finding(
                GAP_WITHOUT_PHRASE,
                id,
                None,
                "gap record has no substitute phrase".into(),
            ));
        }
    } else {
        if record.gloss.trim().is_empty() {
            out.push(finding(EMPTY_GLOSS, id, None, "gloss is empty".into()));
        }
        if record.synonyms.is_empty() {
            out.push(finding(NO_SYNONYMS, id, None, "no synonyms".into()));
        }
    }

    let normalized: Vec<String> = record
        .synonyms
        .iter()
        .map(|s| normalize_lemma(&s.lemma))
        .collect();

    for (i, syn) in record.synonyms.iter().enumerate() {
        let lemma = &normalized[i];
        if lemma.is_empty() {
            out.push(finding(EMPTY_LEMMA, id, Some(i), "lemma is blank".into()));
            continue;
        }
        let examples: Vec<&String> = syn
            .examples
            .iter()
            .filter(|e| !e.trim().is_empty())
            .collect();
        if examples.is_empty() {
            out.push(finding(
                SYNONYM_WITHOUT_EXAMPLE,
                id,
                Some(i),
                format!("synonym \"{lemma}\" has no example"),
            ));
        }
        if let Some(first) = normalized[..i].iter().position(|l| l == lemma) {
            out.push(finding(
                DUPLICATE_LEMMA,
                id,
                Some(i),
                format!("\"{lemma}\" duplicates synonym #{first}"),
            ));
        } else if let Some(first) = normalized[..i]
            .iter()
            .position(|l| !l.is_empty() && fold_arabic(l) == fold_arabic(lemma))
        {
            out.push(finding(
                NEAR_DUPLICATE_LEMMA,
                id,
                Some(i),
                format!("\"{lemma}\" differs from synonym #{first} only in diacritics or hamza"),
            ));
        }
        if has_latin(lemma) {
            out.push(finding(
                LATIN_SCRIPT,
                id,
                Some(i),
                format!("lemma \"{lemma}\" contains Latin letters"),
            ));
        }
        for example in examples {
            if !normalize_lemma(example).contains(lemma.as_str()) {
                out.push(finding(
                    EXAMPLE_MISSING_LEMMA,
                    id,
                    Some(i),
                    format!(
                        "example \"{}\" does not contain \"{lemma}\"",
                        example.trim()
                    ),
                ));
            }
        }
    }

    let mut ranks: Vec<u32> = record.synonyms.iter().map(|s| s.rank).collect();
    ranks.sort_unstable();
    if ranks.iter().zip(1u32..).any(|(&r, expected)| r != expected) {
        out.push(finding(
            RANK_GAP,
            id,
            None,
            format!("ranks {ranks:?} are not 1..{}", ranks.len()),
        ));
    }

    let gloss = record.gloss.trim();
    if !gloss.is_empty() {
        if has_latin(gloss) {
            out.push(finding(
                LATIN_SCRIPT,
                id,
                None,
                "gloss contains Latin letters".into(),
            ));
        }
        let words = gloss.split_whitespace().count();
        if words < 3 {
            out.push(finding(
                GLOSS_TOO_SHORT,
                id,
                None,
                format!("gloss has {words} word(s)"),
            ));
        }
    }

    sort_findings(&mut out);
    out
}

fn tokens(lemma: &str) -> Vec<&str> {
    lemma.split_whitespace().collect()
}

/// Flags every synonym whose tokens form a strict contiguous run inside a
/// longer synonym of the same record.
pub fn detect_compound_subsumption(record: SynsetId, synonyms: &[Synonym]) -> Vec<Finding> {
    let tokenized: Vec<Vec<&str>> = synonyms.iter().map(|s| tokens(&s.lemma)).collect();
    let mut out = Vec::new();
    for (i, short) in tokenized.iter().enumerate() {
        if short.is_empty() {
            continue;
        }
        let container = tokenized
            .iter()
            .filter(|long| long.len() > short.len())
            .find(|long| long.windows(short.len()).any(|w| w == short.as_slice()));
        if let Some(long) = container {
            out.push(finding(
                COMPOUND_SUBSUMPTION,
                record,
                Some(i),
                format!(
                    "\"{}\" is part of the compound \"{}\"",
                    short.join(" "),
                    long.join(" ")
                ),
            ));
        }
    }
    sort_findings(&mut out);
    out
}

/// A hypernym traversal re-entered a node on its own path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("hypernym cycle through {at} reached from {start}")]
pub struct CyclicHierarchy {
    pub start: SynsetId,
    pub at: SynsetId,
}

/// Hypernym graph view over a set of source synsets.
#[derive(Debug, Clone, Copy)]
pub struct Hierarchy<'a> {
    sources: &'a BTreeMap<SynsetId, SourceSynset>,
}

impl<'a> Hierarchy<'a> {
    pub fn new(sources: &'a BTreeMap<SynsetId, SourceSynset>) -> Self {
        Hierarchy { sources }
    }

    fn parents(&self, id: SynsetId) -> &'a [SynsetId] {
        self.sources
            .get(&id)
            .map(|s| s.hypernyms.as_slice())
            .unwrap_or(&[])
    }

    /// All transitive hypernyms of `start`, excluding itself. Dangling ids
    /// are treated as roots.
    pub fn ancestors(&self, start: SynsetId) -> Result<BTreeSet<SynsetId>, CyclicHierarchy> {
        let mut finished = BTreeSet::new();
        let mut on_path = BTreeSet::new();
        let mut stack: Vec<(SynsetId, usize)> = alloc::vec![(start, 0)];
        on_path.insert(start);
        while let Some((node, next)) = stack.last_mut() {
            let parents = self.parents(*node);
            if let Some(&parent) = parents.get(*next) {
                *next += 1;
                if on_path.contains(&parent) {
                    return Err(CyclicHierarchy { start, at: parent });
                }
                if !finished.contains(&parent) {
                    on_path.insert(parent);
                    stack.push((parent, 0));
                }
            } else {
                let node = *node;
                on_path.remove(&node);
                finished.insert(node);
                stack.pop();
            }
        }
        finished.remove(&start);
        Ok(finished)
    }
}

type Closure = Result<Rc<BTreeSet<SynsetId>>, CyclicHierarchy>;

/// Lemma index over a project for the specialization detector. Ancestor
/// closures are cached across calls.
pub struct SpecializationIndex<'a> {
    hierarchy: Hierarchy<'a>,
    by_lemma: BTreeMap<String, Vec<SynsetId>>,
    closures: RefCell<BTreeMap<SynsetId, Closure>>,
}

impl<'a> SpecializationIndex<'a> {
    pub fn new(project: &'a Project) -> Self {
        let mut by_lemma: BTreeMap<String, Vec<SynsetId>> = BTreeMap::new();
        for record in project.records.values() {
            for lemma in record.lemma_set() {
                by_lemma.entry(lemma).or_default().push(record.source);
            }
        }
        SpecializationIndex {
            hierarchy: Hierarchy::new(&project.sources),
            by_lemma,
            closures: RefCell::new(BTreeMap::new()),
        }
    }

    fn closure(&self, id: SynsetId) -> Closure {
        if let Some(hit) = self.closures.borrow().get(&id) {
            return hit.clone();
        }
        let computed = self.hierarchy.ancestors(id).map(Rc::new);
        self.closures.borrow_mut().insert(id, computed.clone());
        computed
    }

    /// Names how `b` relates to `a` (`hypernym` or `hyponym`), `None` when
    /// neither is an ancestor of the other. Errors when a cycle kept the
    /// question from being decided.
    fn related(&self, a: SynsetId, b: SynsetId) -> Result<Option<&'static str>, CyclicHierarchy> {
        let up = self.closure(a);
        if let Ok(anc) = &up {
            if anc.contains(&b) {
                return Ok(Some("hypernym"));
            }
        }
        let down = self.closure(b);
        if let Ok(anc) = &down {
            if anc.contains(&a) {
                return Ok(Some("hyponym"));
            }
        }
        match (up, down) {
            (Err(e), _) | (_, Err(e)) => Err(e),
            _ => Ok(None),
        }
    }

    /// W11 findings for `record` against every other record in the project,
    /// plus W12 for pairs a cycle kept from being decided.
    pub fn findings_for(&self, record: &TranslationRecord) -> Vec<Finding> {
        let mut out = Vec::new();
        if record.is_gap {
            return out;
        }
        let mut seen = BTreeSet::new();
        for (i, syn) in record.synonyms.iter().enumerate() {
            let lemma = normalize_lemma(&syn.lemma);
            if lemma.is_empty() || !seen.insert(lemma.clone()) {
                continue;
            }
            let Some(holders) = self.by_lemma.get(&lemma) else {
                continue;
            };
            for &other in holders.iter().filter(|&&o| o != record.source) {
                match self.related(record.source, other) {
                    Ok(Some(kind)) => out.push(finding(
                        SPECIALIZATION_POLYSEMY,
                        record.source,
                        Some(i),
                        format!("\"{lemma}\" is also a synonym of {kind} {other}"),
                    )),
                    Ok(None) => {}
                    Err(cycle) => out.push(finding(
                        HIERARCHY_CYCLE,
                        record.source,
                        None,
                        format!("{cycle}; ancestry with {other} undecided"),
                    )),
                }
            }
        }
        sort_findings(&mut out);
        out
    }
}

/// Flags lemmas of `record` that also appear in a record whose source synset
/// is an ancestor or descendant of `record`'s source.
pub fn detect_specialization_polysemy(
    record: &TranslationRecord,
    project: &Project,
) -> Vec<Finding> {
    SpecializationIndex::new(project).findings_for(record)
}

/// Every rule over one record: record-local, compound, and specialization.
pub fn validate_record(
    record: &TranslationRecord,
    source: Option<&SourceSynset>,
    index: &SpecializationIndex<'_>,
) -> Vec<Finding> {
    let mut out = check_record(record, source);
    if !record.is_gap {
        out.extend(detect_compound_subsumption(record.source, &record.synonyms));
    }
    out.extend(index.findings_for(record));
    sort_findings(&mut out);
    out
}

/// Validates every record in `project`, sorted by record. Records nobody
/// has submitted yet are skipped unless `include_unsubmitted` is set.
pub fn validate_project(
    project: &Project,
    filter: Option<PosBucket>,
    include_unsubmitted: bool,
) -> Vec<Finding> {
    let index = SpecializationIndex::new(project);
    let mut out = Vec::new();
    for record in project.records.values() {
        if filter.is_some_and(|b| record.source.pos.bucket() != b) {
            continue;
        }
        if !include_unsubmitted && !record.state.is_submitted() {
            continue;
        }
        out.extend(validate_record(
            record,
            project.sources.get(&record.source),
            &index,
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransitionCheckError {
    #[error("{to} is not a legal successor of {from}")]
    IllegalTransition {
        from: WorkflowState,
        to: WorkflowState,
    },
    #[error("transition blocked by {} error finding(s)", .0.len())]
    Blocked(Vec<Finding>),
}

/// Gate for moving `record` (with its pending edits applied) into
/// `target`. Entering a review or accepted state is blocked by any Error
/// finding; other moves are blocked only by structural errors. Returns the
/// warnings on success.
pub fn validate_for_transition(
    record: &TranslationRecord,
    source: Option<&SourceSynset>,
    target: WorkflowState,
    index: &SpecializationIndex<'_>,
) -> Result<Vec<Finding>, TransitionCheckError> {
    if !workflow::is_successor(record.state, target) {
        return Err(TransitionCheckError::IllegalTransition {
            from: record.state,
            to: target,
        });
    }
    let findings = validate_record(record, source, index);
    let gated = target.requires_content();
    let (blocking, rest): (Vec<Finding>, Vec<Finding>) = findings
        .into_iter()
        .partition(|f| f.is_error() && (gated || rule(&f.rule_id).is_some_and(|r| r.structural)));
    if !blocking.is_empty() {
        return Err(TransitionCheckError::Blocked(blocking));
    }
    Ok(rest.into_iter().filter(|f| !f.is_error()).collect())
}
