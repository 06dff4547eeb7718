use lexibridge_core::model::ranked;
use lexibridge_core::model::{Action, Role, WorkflowState};
use lexibridge_core::workflow::{self, mark_gap, Edits, Transition, WorkflowError};
use lexibridge_core::TranslationRecord;
use lexibridge_testkit::script::{actor, chain_project, valid_content};
use lexibridge_testkit::{checks, script};
use proptest::prelude::*;

#[test]
fn every_path_to_length_12() {
    let summary = checks::workflow_exhaustion(12).unwrap();
    println!("{summary}");
}

#[test]
fn accepted_records_are_clean() {
    let summary = checks::accepted_soundness(200).unwrap();
    println!("{summary}");
}

#[test]
fn rejected_gap_comes_back_as_words() {
    let project = chain_project(1);
    let record = project.records.values().next().unwrap().clone();
    let gap = mark_gap(&record, vec!["بشكل معبر".into()], Role::Translator).unwrap();
    let record = workflow::apply(
        &record,
        Transition::new(Action::Submit, "tarjim-1", Role::Translator).edits(gap),
        &project,
    )
    .unwrap();
    assert!(record.is_gap);

    let counter = Edits {
        is_gap: Some(false),
        synonyms: Some(ranked([("معبرا", vec![])])),
        ..Edits::default()
    };
    let record = workflow::apply(
        &record,
        Transition::new(Action::Reject, "musahhih-1", Role::Corrector)
            .note("توجد كلمة عربية مناسبة")
            .edits(counter),
        &project,
    )
    .unwrap();
    assert_eq!(record.state, WorkflowState::ReturnedToTranslator);
    assert!(!record.is_gap);
    assert!(record.phrases.is_empty());
    assert_eq!(record.synonyms[0].lemma, "معبرا");
    assert!(mark_gap(&record, vec!["عبارة".into()], Role::Translator).is_ok());
}

#[test]
fn expert_reject_returns_to_corrector_with_note() {
    let project = chain_project(1);
    let mut record: TranslationRecord = project.records.values().next().unwrap().clone();
    for tr in [
        Transition::new(Action::Submit, "tarjim-1", Role::Translator).edits(valid_content(1)),
        Transition::new(Action::Accept, "musahhih-1", Role::Corrector),
        Transition::new(Action::Reject, "khabir-1", Role::Expert).note("المرادف الثاني غير دقيق"),
    ] {
        record = workflow::apply(&record, tr, &project).unwrap();
    }
    assert_eq!(record.state, WorkflowState::ReturnedToCorrector);
    let last = record.history.last().unwrap();
    assert_eq!(last.role, Role::Expert);
    assert_eq!(last.note.as_deref(), Some("المرادف الثاني غير دقيق"));
}

proptest! {
    /// Whoever submitted may not review, and the expert may not be the
    /// accepting corrector or the translator.
    #[test]
    fn duties_are_separated(t in 0..3usize, c in 0..3usize, e in 0..3usize) {
        let project = chain_project(1);
        let names = ["ali", "sara", "omar"];
        let mut record = project.records.values().next().unwrap().clone();
        record = workflow::apply(
            &record,
            Transition::new(Action::Submit, names[t], Role::Translator).edits(valid_content(0)),
            &project,
        ).unwrap();
        let corrected = workflow::apply(&record, Transition::new(Action::Accept, names[c], Role::Corrector), &project);
        if c == t {
            let is_duty_violation = matches!(corrected, Err(WorkflowError::DutySeparationViolation { .. }));
            prop_assert!(is_duty_violation);
            return Ok(());
        }
        let record = corrected.unwrap();
        let reviewed = workflow::apply(&record, Transition::new(Action::Accept, names[e], Role::Expert), &project);
        if e == t || e == c {
            let is_duty_violation = matches!(reviewed, Err(WorkflowError::DutySeparationViolation { .. }));
            prop_assert!(is_duty_violation);
        } else {
            prop_assert_eq!(reviewed.unwrap().state, WorkflowState::Accepted);
        }
    }

    /// A failed transition leaves the record exactly as it was.
    #[test]
    fn failures_do_not_mutate((n, steps) in script::script(3, 30)) {
        let mut project = chain_project(n);
        let ids: Vec<_> = project.records.keys().copied().collect();
        for (t, step) in steps.iter().enumerate() {
            let id = ids[step.record.index(ids.len())];
            let before = project.records[&id].clone();
            match workflow::apply(&before, step.transition(&before, t as i64), &project) {
                Ok(next) => {
                    prop_assert_eq!(next.revision, before.revision + 1);
                    project.records.insert(id, next);
                }
                Err(_) => prop_assert_eq!(&project.records[&id], &before),
            }
        }
    }
}

#[test]
fn actors_are_distinct_per_role() {
    assert_ne!(actor(Role::Translator, 0), actor(Role::Corrector, 0));
    assert_ne!(actor(Role::Translator, 0), actor(Role::Translator, 1));
}
