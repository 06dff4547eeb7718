//! Whole-criterion checks. Each returns a one-line summary on success and
//! the first counterexample on failure.

use std::cell::Cell;
use std::collections::{BTreeMap, BTreeSet};

use lexibridge_core::model::{
    ranked, Action, Pos, PosBucket, Project, Role, SynsetId, TranslationRecord, WorkflowState,
};
use lexibridge_core::stats::{
    enrichment_diff, EnrichmentDiff, EnrichmentRow, InventoryRow, PosTable,
};
use lexibridge_core::validation::{
    detect_compound_subsumption, validate_record, SpecializationIndex,
};
use lexibridge_core::workflow::{self, Transition, WorkflowError};
use proptest::test_runner::TestCaseError;
use proptest::{prop_assert, prop_assert_eq};

use crate::oracle::{self, table_next};
use crate::script::{self, actor, valid_content};
use crate::{gen, runner, tables};

pub type Outcome = Result<String, String>;

/// Published per-POS figures summed through `PosTable::from_rows`.
pub fn golden_sums() -> Outcome {
    let rows = tables::INVENTORY.map(|(synsets, synonyms)| InventoryRow { synsets, synonyms });
    let inv = PosTable::from_rows(rows);
    let (synsets, synonyms) = tables::INVENTORY_TOTAL;
    if inv.total != (InventoryRow { synsets, synonyms }) {
        return Err(format!(
            "inventory total {:?} != ({synsets}, {synonyms})",
            inv.total
        ));
    }
    let by_hand: u64 = tables::INVENTORY.iter().map(|r| r.0).sum();
    if by_hand != synsets {
        return Err(format!("hand sum of synsets {by_hand} != {synsets}"));
    }

    let mut rows = [EnrichmentRow::default(); 4];
    for (name, per_pos, _) in tables::ENRICHMENT {
        for (row, value) in rows.iter_mut().zip(per_pos) {
            let slot = match name {
                "synonyms_added" => &mut row.synonyms_added,
                "synonyms_excluded" => &mut row.synonyms_excluded,
                "glosses_added" => &mut row.glosses_added,
                "examples_added" => &mut row.examples_added,
                "gaps_identified" => &mut row.gaps_identified,
                "phrases_added" => &mut row.phrases_added,
                other => return Err(format!("unknown metric {other}")),
            };
            *slot = value;
        }
    }
    let diff = PosTable::from_rows(rows);
    for ((name, _, published), (metric, get)) in
        tables::ENRICHMENT.iter().zip(EnrichmentRow::METRICS)
    {
        if *name != metric {
            return Err(format!("metric order {name} vs {metric}"));
        }
        if get(&diff.total) != *published {
            return Err(format!("{name}: total {} != {published}", get(&diff.total)));
        }
    }
    if !inv.is_consistent() || !diff.is_consistent() {
        return Err("table reports itself inconsistent".into());
    }
    Ok(format!(
        "inventory {}/{} and {} enrichment rows match",
        inv.total.synsets,
        inv.total.synonyms,
        tables::ENRICHMENT.len()
    ))
}

#[derive(Debug, Default)]
struct Walk {
    paths: usize,
    accepted: usize,
    states: BTreeSet<WorkflowState>,
}

fn walk(
    project: &Project,
    record: &TranslationRecord,
    depth: usize,
    max: usize,
    w: &mut Walk,
) -> Result<(), String> {
    let state = record.state;
    w.paths += 1;
    w.states.insert(state);
    if record.revision as usize != record.history.len() {
        return Err(format!(
            "revision {} with {} events",
            record.revision,
            record.history.len()
        ));
    }
    for e in &record.history {
        if e.action.requires_note() && e.note.as_deref().is_none_or(|n| n.trim().is_empty()) {
            return Err(format!("{} event without a note", e.action));
        }
    }

    // Every triple: engine agrees with the transcribed table.
    for action in Action::ALL {
        for role in Role::ALL {
            let expected = table_next(state, action, role);
            if workflow::next_state(state, action, role) != expected {
                return Err(format!("table disagrees at ({state}, {action}, {role})"));
            }
            if expected.is_none() {
                let tr = Transition::new(action, actor(role, 0), role).note("ملاحظة");
                match workflow::apply(record, tr, project) {
                    Err(WorkflowError::IllegalTransition { .. }) => {}
                    other => {
                        return Err(format!("({state}, {action}, {role}) accepted: {other:?}"))
                    }
                }
            } else if action.requires_note() {
                let bare = Transition::new(action, actor(role, 0), role);
                match workflow::apply(record, bare, project) {
                    Err(WorkflowError::MissingNote(_)) => {}
                    other => return Err(format!("{action} without note at {state}: {other:?}")),
                }
            }
        }
    }

    let moves: Vec<_> = workflow::moves_from(state).collect();
    match state {
        WorkflowState::Accepted => {
            if !moves.is_empty() {
                return Err("Accepted has outgoing moves".into());
            }
            let corrector_accepts = record
                .history
                .iter()
                .filter(|e| e.action == Action::Accept && e.role == Role::Corrector)
                .count();
            let expert_accepts = record
                .history
                .iter()
                .filter(|e| e.action == Action::Accept && e.role == Role::Expert)
                .count();
            let last = record.history.last().map(|e| (e.action, e.role));
            if corrector_accepts == 0
                || expert_accepts != 1
                || last != Some((Action::Accept, Role::Expert))
            {
                return Err(format!(
                    "accepted path with {corrector_accepts} corrector and {expert_accepts} expert accepts, last {last:?}"
                ));
            }
            w.accepted += 1;
            return Ok(());
        }
        WorkflowState::ReturnedToTranslator | WorkflowState::ReturnedToCorrector
            if moves.len() != 1 =>
        {
            return Err(format!("{state} has {} legal moves", moves.len()));
        }
        _ if moves.is_empty() => return Err(format!("deadlock at {state}")),
        _ => {}
    }
    if depth == max {
        return Ok(());
    }
    for m in moves {
        let mut tr = Transition::new(m.action, actor(m.role, 0), m.role);
        if m.action.requires_note() {
            tr = tr.note("ملاحظة");
        }
        if m.role == Role::Translator && matches!(m.action, Action::Submit | Action::Resubmit) {
            tr = tr.edits(valid_content(depth));
        }
        let next = workflow::apply(record, tr, project)
            .map_err(|e| format!("legal move {m:?} failed: {e}"))?;
        walk(project, &next, depth + 1, max, w)?;
    }
    Ok(())
}

/// Every legal path of up to `max_len` actions from a fresh record, with
/// all illegal triples probed at every visited state.
pub fn workflow_exhaustion(max_len: usize) -> Outcome {
    let project = script::chain_project(1);
    let record = project
        .records
        .values()
        .next()
        .cloned()
        .expect("one record");
    let mut w = Walk::default();
    walk(&project, &record, 0, max_len, &mut w)?;
    if w.states.len() != WorkflowState::ALL.len() {
        return Err(format!("only {} states reached", w.states.len()));
    }
    Ok(format!(
        "{} paths up to length {max_len}, {} reach accepted",
        w.paths, w.accepted
    ))
}

/// Specialization and compound detectors against their brute-force oracles.
pub fn oracle_equivalence(cases: u32) -> Outcome {
    let flagged = Cell::new(0usize);
    let compounds = Cell::new(0usize);
    runner(cases)
        .run(&gen::hierarchy_project(15), |project| {
            let index = SpecializationIndex::new(&project);
            let mut got = Vec::new();
            for record in project.records.values() {
                let findings = index.findings_for(record);
                if findings.iter().any(|f| f.rule_id == "W12") {
                    return Err(TestCaseError::fail("cycle reported on a forest"));
                }
                got.extend(findings);
                let direct =
                    lexibridge_core::validation::detect_specialization_polysemy(record, &project);
                prop_assert_eq!(index.findings_for(record), direct);

                let want = oracle::compound_flags(&record.synonyms);
                let have: BTreeSet<usize> =
                    detect_compound_subsumption(record.source, &record.synonyms)
                        .iter()
                        .map(|f| f.locus.synonym.expect("compound finding names a synonym"))
                        .collect();
                prop_assert_eq!(&have, &want);
                compounds.set(compounds.get() + want.len());
            }
            let want = oracle::specialization_flags(&project);
            let have = oracle::flags_from_findings(&got);
            flagged.set(flagged.get() + want.len());
            prop_assert_eq!(have, want);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(format!(
        "{cases} projects, {} specialization flags and {} compound flags matched",
        flagged.get(),
        compounds.get()
    ))
}

/// Random scripts through the engine; accepted records must be clean.
pub fn accepted_soundness(cases: u32) -> Outcome {
    let accepted = Cell::new(0usize);
    let applied = Cell::new(0usize);
    runner(cases)
        .run(&script::script(6, 60), |(n, steps)| {
            let mut project = script::chain_project(n);
            let ids: Vec<SynsetId> = project.records.keys().copied().collect();
            for (t, step) in steps.iter().enumerate() {
                let id = ids[step.record.index(ids.len())];
                let record = &project.records[&id];
                let tr = step.transition(record, t as i64);
                if let Ok(next) = workflow::apply(record, tr, &project) {
                    applied.set(applied.get() + 1);
                    project.records.insert(id, next);
                }
            }
            let index = SpecializationIndex::new(&project);
            for record in project.records.values() {
                prop_assert_eq!(record.revision as usize, record.history.len());
                if record.state != WorkflowState::Accepted {
                    continue;
                }
                accepted.set(accepted.get() + 1);
                let errors: Vec<_> =
                    validate_record(record, project.sources.get(&record.source), &index)
                        .into_iter()
                        .filter(|f| f.is_error())
                        .collect();
                prop_assert_eq!(errors, vec![]);
                prop_assert_eq!(
                    record.is_gap,
                    record.synonyms.is_empty(),
                    "gap xor synonyms"
                );
                prop_assert_eq!(record.is_gap, !record.phrases.is_empty(), "gap iff phrases");
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(format!(
        "{cases} scripts, {} transitions applied, {} accepted records clean",
        applied.get(),
        accepted.get()
    ))
}

/// The three-record fixture: one lemma added to a noun, one removed from a
/// verb, one adverb turned into a gap with two phrases. Expected values
/// were enumerated by hand.
pub fn diff_fixture() -> (
    BTreeMap<SynsetId, TranslationRecord>,
    BTreeMap<SynsetId, TranslationRecord>,
    EnrichmentDiff,
) {
    let noun = SynsetId::from_parts(Pos::Noun, 3722288);
    let verb = SynsetId::from_parts(Pos::Verb, 1835496);
    let adverb = SynsetId::from_parts(Pos::Adverb, 437407);
    let ex = |s: &[&str]| s.iter().map(|e| e.to_string()).collect::<Vec<_>>();

    let mut b1 = TranslationRecord::for_id(noun);
    b1.gloss = "مكان واسع للتسوق".into();
    b1.synonyms = ranked([
        (
            "مركز تجاري",
            ex(&["زرنا المركز التجاري", "المركز التجاري مزدحم"]),
        ),
        ("مركز", vec![]),
    ]);
    let mut c1 = b1.clone();
    c1.synonyms = ranked([
        ("مركز تجاري", ex(&["زرنا المركز التجاري"])),
        ("مركز", vec![]),
        ("مركز تسوق", ex(&["افتتح مركز تسوق"])),
    ]);

    let mut b2 = TranslationRecord::for_id(verb);
    b2.gloss = "الانتقال من مكان إلى آخر".into();
    b2.synonyms = ranked([("سافر", ex(&["سافر أمس"])), ("ارتحل", ex(&["ارتحل القوم"]))]);
    let mut c2 = b2.clone();
    c2.synonyms = ranked([("سافر", ex(&["سافر أمس"]))]);

    let b3 = TranslationRecord::for_id(adverb);
    let mut c3 = TranslationRecord::for_id(adverb);
    c3.is_gap = true;
    c3.phrases = vec!["بشكل معبر".into(), "على نحو معبر".into()];

    let base = [b1, b2, b3].into_iter().map(|r| (r.source, r)).collect();
    let cur = [c1, c2, c3].into_iter().map(|r| (r.source, r)).collect();
    let zero = EnrichmentRow::default();
    let expected = PosTable {
        nouns: EnrichmentRow {
            synonyms_added: 1,
            ..zero
        },
        verbs: EnrichmentRow {
            synonyms_excluded: 1,
            ..zero
        },
        adjectives: zero,
        adverbs: EnrichmentRow {
            gaps_identified: 1,
            phrases_added: 2,
            ..zero
        },
        total: EnrichmentRow {
            synonyms_added: 1,
            synonyms_excluded: 1,
            glosses_added: 0,
            examples_added: 0,
            gaps_identified: 1,
            phrases_added: 2,
        },
    };
    (base, cur, expected)
}

/// Identity, antisymmetry and the hand-enumerated fixture.
pub fn diff_properties(cases: u32) -> Outcome {
    let (base, cur, expected) = diff_fixture();
    let got = enrichment_diff(&base, &cur);
    if got.diff != expected {
        return Err(format!("fixture diff {:?} != {:?}", got.diff, expected));
    }

    runner(cases)
        .run(&gen::record_set(), |set| {
            let d = enrichment_diff(&set, &set);
            prop_assert_eq!(d.diff, EnrichmentDiff::default());
            prop_assert_eq!(d.unmatched_baseline, vec![]);
            Ok(())
        })
        .map_err(|e| format!("identity: {e}"))?;

    runner(cases)
        .run(&gen::matched_pair(), |(b, c)| {
            let fwd = enrichment_diff(&b, &c).diff;
            let back = enrichment_diff(&c, &b).diff;
            prop_assert!(fwd.is_consistent() && back.is_consistent());
            for bucket in PosBucket::ALL {
                prop_assert_eq!(
                    fwd.row(bucket).synonyms_added,
                    back.row(bucket).synonyms_excluded
                );
                prop_assert_eq!(
                    fwd.row(bucket).synonyms_excluded,
                    back.row(bucket).synonyms_added
                );
            }
            Ok(())
        })
        .map_err(|e| format!("antisymmetry: {e}"))?;
    Ok(format!(
        "fixture exact, {cases} identity sets and {cases} swapped pairs hold"
    ))
}
