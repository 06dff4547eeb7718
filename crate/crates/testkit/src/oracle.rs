//! Brute-force reference implementations.

use std::collections::BTreeSet;

use lexibridge_core::model::{Action, Finding, Project, Role, Synonym, SynsetId, WorkflowState};

use WorkflowState::*;

/// The review state machine, transcribed independently of the engine.
pub const TABLE: [(WorkflowState, Action, Role, WorkflowState); 9] = [
    (
        Untranslated,
        Action::Submit,
        Role::Translator,
        PendingCorrection,
    ),
    (
        Untranslated,
        Action::MarkNotUnderstood,
        Role::Translator,
        NotUnderstood,
    ),
    (
        NotUnderstood,
        Action::Reassign,
        Role::Corrector,
        Untranslated,
    ),
    (
        PendingCorrection,
        Action::Accept,
        Role::Corrector,
        PendingExpert,
    ),
    (
        PendingCorrection,
        Action::Reject,
        Role::Corrector,
        ReturnedToTranslator,
    ),
    (
        ReturnedToTranslator,
        Action::Resubmit,
        Role::Translator,
        PendingCorrection,
    ),
    (PendingExpert, Action::Accept, Role::Expert, Accepted),
    (
        PendingExpert,
        Action::Reject,
        Role::Expert,
        ReturnedToCorrector,
    ),
    (
        ReturnedToCorrector,
        Action::Resubmit,
        Role::Corrector,
        PendingExpert,
    ),
];

pub fn table_next(state: WorkflowState, action: Action, role: Role) -> Option<WorkflowState> {
    TABLE
        .iter()
        .find(|(s, a, r, _)| *s == state && *a == action && *r == role)
        .map(|t| t.3)
}

fn norm(lemma: &str) -> String {
    lemma.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Transitive closure of the hypernym relation by Warshall's algorithm.
/// `reach[i][j]` means node `j` is reachable upward from node `i` by one or
/// more links. Links to unknown ids are ignored.
pub fn reachability(project: &Project) -> (Vec<SynsetId>, Vec<Vec<bool>>) {
    let ids: Vec<SynsetId> = project.sources.keys().copied().collect();
    let n = ids.len();
    let mut reach = vec![vec![false; n]; n];
    for (i, id) in ids.iter().enumerate() {
        for parent in &project.sources[id].hypernyms {
            if let Some(j) = ids.iter().position(|x| x == parent) {
                reach[i][j] = true;
            }
        }
    }
    for k in 0..n {
        let via = reach[k].clone();
        for row in reach.iter_mut() {
            if row[k] {
                for (cell, &step) in row.iter_mut().zip(&via) {
                    *cell |= step;
                }
            }
        }
    }
    (ids, reach)
}

/// (record, synonym index, other record).
pub type Flag = (SynsetId, usize, SynsetId);

/// Every (record, first index of a lemma, other record) where the other
/// non-gap record shares the lemma and the two synsets are related by
/// ancestry in either direction.
pub fn specialization_flags(project: &Project) -> BTreeSet<Flag> {
    let (ids, reach) = reachability(project);
    let pos = |id: &SynsetId| ids.iter().position(|x| x == id);
    let mut out = BTreeSet::new();
    for (rid, r) in &project.records {
        if r.is_gap {
            continue;
        }
        let mut seen = Vec::new();
        for (k, syn) in r.synonyms.iter().enumerate() {
            let lemma = norm(&syn.lemma);
            if lemma.is_empty() || seen.contains(&lemma) {
                continue;
            }
            seen.push(lemma.clone());
            for (sid, s) in &project.records {
                if sid == rid || s.is_gap || !s.synonyms.iter().any(|x| norm(&x.lemma) == lemma) {
                    continue;
                }
                let (Some(a), Some(b)) = (pos(rid), pos(sid)) else {
                    continue;
                };
                if reach[a][b] || reach[b][a] {
                    out.insert((*rid, k, *sid));
                }
            }
        }
    }
    out
}

/// Reads the flag triples back out of W11 findings. The related record is
/// the last word of the message.
pub fn flags_from_findings(findings: &[Finding]) -> BTreeSet<Flag> {
    findings
        .iter()
        .filter(|f| f.rule_id == "W11")
        .map(|f| {
            let other = f
                .message
                .rsplit(' ')
                .next()
                .and_then(|w| w.parse().ok())
                .expect("W11 message ends with a synset id");
            (
                f.locus.record,
                f.locus.synonym.expect("W11 names a synonym"),
                other,
            )
        })
        .collect()
}

/// Indices of synonyms whose token sequence occurs contiguously inside a
/// strictly longer synonym of the same list.
pub fn compound_flags(synonyms: &[Synonym]) -> BTreeSet<usize> {
    let toks: Vec<Vec<&str>> = synonyms
        .iter()
        .map(|s| s.lemma.split_whitespace().collect())
        .collect();
    let mut out = BTreeSet::new();
    for (i, short) in toks.iter().enumerate() {
        if short.is_empty() {
            continue;
        }
        for (j, long) in toks.iter().enumerate() {
            if i == j || long.len() <= short.len() {
                continue;
            }
            for start in 0..=(long.len() - short.len()) {
                let mut all = true;
                for m in 0..short.len() {
                    if long[start + m] != short[m] {
                        all = false;
                        break;
                    }
                }
                if all {
                    out.insert(i);
                }
            }
        }
    }
    out
}
