//! Workflow drivers: content payloads, actors and random step scripts.

use lexibridge_core::model::{
    ranked, Action, Pos, Project, Role, SourceSynset, Synonym, SynsetId, Timestamp,
};
use lexibridge_core::workflow::{self, Edits, Transition};
use lexibridge_core::TranslationRecord;
use proptest::prelude::*;
use proptest::sample::Index;

pub fn actor(role: Role, n: usize) -> String {
    let stem = match role {
        Role::Translator => "tarjim",
        Role::Corrector => "musahhih",
        Role::Expert => "khabir",
    };
    format!("{stem}-{}", n + 1)
}

/// A complete, error-free translation whose lemma is unique to `n`.
pub fn valid_content(n: usize) -> Edits {
    let lemma = format!("كلمة{}", arabic_digits(n));
    Edits {
        is_gap: Some(false),
        phrases: None,
        synonyms: Some(ranked([(
            lemma.clone(),
            vec![format!("هذه {lemma} في جملة")],
        )])),
        gloss: Some("تعريف عربي واضح للمفهوم".into()),
    }
}

pub fn arabic_digits(n: usize) -> String {
    n.to_string()
        .chars()
        .map(|c| char::from_u32(0x0660 + c.to_digit(10).unwrap()).unwrap())
        .collect()
}

pub fn gap_content() -> Edits {
    Edits {
        is_gap: Some(true),
        phrases: Some(vec!["بشكل معبر".into()]),
        synonyms: Some(Vec::new()),
        gloss: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Content {
    Keep,
    Valid,
    Gap,
    EmptyGloss,
    MissingExample,
    GapWithSynonyms,
    GapWithoutPhrase,
    DuplicateLemma,
    RankGap,
    EmptyLemma,
}

impl Content {
    pub const ALL: [Content; 10] = [
        Content::Keep,
        Content::Valid,
        Content::Gap,
        Content::EmptyGloss,
        Content::MissingExample,
        Content::GapWithSynonyms,
        Content::GapWithoutPhrase,
        Content::DuplicateLemma,
        Content::RankGap,
        Content::EmptyLemma,
    ];

    pub fn edits(self, n: usize) -> Option<Edits> {
        let syn = |lemma: &str, ex: &[&str]| {
            Synonym::new(lemma, 0, ex.iter().map(|e| e.to_string()).collect())
        };
        let mut e = valid_content(n);
        match self {
            Content::Keep => return None,
            Content::Valid => {}
            Content::Gap => e = gap_content(),
            Content::EmptyGloss => e.gloss = Some("  ".into()),
            Content::MissingExample => {
                e.synonyms = Some(ranked([("سيارة", vec![])]));
            }
            Content::GapWithSynonyms => {
                e.is_gap = Some(true);
                e.phrases = Some(vec!["بشكل معبر".into()]);
            }
            Content::GapWithoutPhrase => {
                e = gap_content();
                e.phrases = Some(vec![" ".into()]);
            }
            Content::DuplicateLemma => {
                e.synonyms = Some(ranked([
                    ("سيارة", vec!["سيارة جديدة".into()]),
                    ("سيارة ", vec!["سيارة قديمة".into()]),
                ]));
            }
            Content::RankGap => {
                let mut s = syn("مركبة", &["مركبة كبيرة"]);
                s.rank = 2;
                e.synonyms = Some(vec![s]);
            }
            Content::EmptyLemma => {
                e.synonyms = Some(ranked([(" ", vec!["جملة".to_string()])]));
            }
        }
        Some(e)
    }
}

/// One attempted action in a random script. `mv` picks among the legal
/// moves from the record's current state unless `wild` is set, in which
/// case `wild` names the action and role outright.
#[derive(Debug, Clone)]
pub struct Step {
    pub record: Index,
    pub mv: Index,
    pub wild: Option<(Action, Role)>,
    pub actor: usize,
    pub content: Content,
    pub note: bool,
    pub claim: bool,
}

pub fn step() -> impl Strategy<Value = Step> {
    let content = prop_oneof![
        4 => Just(Content::Valid),
        2 => Just(Content::Keep),
        1 => Just(Content::Gap),
        3 => proptest::sample::select(&Content::ALL[..]),
    ];
    let wild = prop::option::weighted(
        0.15,
        (
            proptest::sample::select(&Action::ALL[..]),
            proptest::sample::select(&Role::ALL[..]),
        ),
    );
    (
        any::<Index>(),
        any::<Index>(),
        wild,
        0..2usize,
        content,
        prop::bool::weighted(0.85),
        prop::bool::weighted(0.1),
    )
        .prop_map(|(record, mv, wild, actor, content, note, claim)| Step {
            record,
            mv,
            wild,
            actor,
            content,
            note,
            claim,
        })
}

pub fn script(max_records: usize, max_steps: usize) -> impl Strategy<Value = (usize, Vec<Step>)> {
    (
        1..=max_records,
        prop::collection::vec(step(), 0..=max_steps),
    )
}

impl Step {
    /// Resolves the step against `record`, `at` stamping the transition.
    pub fn transition(&self, record: &TranslationRecord, at: i64) -> Transition {
        let (action, role) = self.wild.unwrap_or_else(|| {
            let moves: Vec<_> = workflow::moves_from(record.state).collect();
            if moves.is_empty() {
                (Action::Accept, Role::Expert)
            } else {
                let m = moves[self.mv.index(moves.len())];
                (m.action, m.role)
            }
        });
        let mut tr = Transition::new(action, actor(role, self.actor), role).at(Timestamp(at));
        if self.note {
            tr = tr.note("ملاحظة المراجع");
        }
        if workflow::accepts_edits(action, role) {
            if let Some(e) = self.content.edits(self.record.index(1000)) {
                tr = tr.edits(e);
            }
        }
        tr
    }
}

/// `n` noun synsets in a single hypernym chain, each with an untranslated
/// record.
pub fn chain_project(n: usize) -> Project {
    let mut project = Project::new();
    let mut prev: Option<SynsetId> = None;
    for i in 0..n {
        let id = SynsetId::from_parts(Pos::Noun, 5000 + i as u32);
        let source = SourceSynset::new(
            id,
            vec![format!("concept {i}")],
            format!("english gloss number {i}"),
            vec![format!("an english example {i}")],
            prev.into_iter().collect(),
            1,
        )
        .expect("valid source");
        project.add_sources([source]);
        prev = Some(id);
    }
    project
}
