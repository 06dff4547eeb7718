#![allow(dead_code)]

use std::cell::Cell;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use http_body_util::BodyExt;
use lexibridge::api::{self, AppState};
use lexibridge::store::ProjectStore;
use lexibridge::users::{User, UserConfig};
use lexibridge::wndb::{self, file_suffix};
use lexibridge_core::model::{
    Action, Pos, Role, SourceSynset, SynsetId, Timestamp, UserId, WorkflowState,
};
use lexibridge_core::workflow::{self, Edits, Transition};
use lexibridge_testkit::checks::Outcome;
use lexibridge_testkit::runner;
use lexibridge_testkit::script::{self, actor, gap_content, valid_content};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use serde_json::Value;
use tower::ServiceExt;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/wndb")
}

pub struct ManifestRow {
    pub file: String,
    pub synsets: usize,
    pub words: usize,
    pub header_lines: usize,
    pub examples: usize,
}

pub fn manifest() -> Vec<ManifestRow> {
    let text = std::fs::read_to_string(fixture_dir().join("MANIFEST.tsv")).unwrap();
    text.lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            ManifestRow {
                file: f[0].to_string(),
                synsets: f[1].parse().unwrap(),
                words: f[2].parse().unwrap(),
                header_lines: f[3].parse().unwrap(),
                examples: f[4].parse().unwrap(),
            }
        })
        .collect()
}

pub fn file_pos(file: &str) -> Pos {
    let suffix = file.strip_prefix("data.").unwrap();
    Pos::ALL
        .into_iter()
        .find(|p| file_suffix(*p) == suffix && *p != Pos::AdjectiveSatellite)
        .unwrap()
}

/// Counts taken straight from the raw text: synset lines, header lines,
/// the sum of the hexadecimal word counts and quoted spans in glosses.
pub fn raw_counts(text: &str) -> (usize, usize, usize, usize) {
    let (mut synsets, mut header, mut words, mut examples) = (0, 0, 0, 0);
    for line in text.lines() {
        if line.starts_with("  ") {
            header += 1;
        } else if !line.trim().is_empty() {
            synsets += 1;
            let w = line.split_whitespace().nth(3).unwrap();
            words += usize::from_str_radix(w, 16).unwrap();
            let gloss = line.split_once('|').unwrap().1;
            examples += gloss.matches('"').count() / 2;
        }
    }
    (synsets, header, words, examples)
}

fn squeeze(text: &str) -> Vec<char> {
    let mut chars: Vec<char> = text
        .chars()
        .filter(|c| !c.is_whitespace() && *c != ';' && *c != '"')
        .collect();
    chars.sort_unstable();
    chars
}

fn words(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Every character of the raw gloss survives in the definition or an
/// example, nothing is invented, and each piece appears in the raw text.
pub fn lossless(raw_gloss: &str, synset: &SourceSynset) -> Result<(), String> {
    let mut parsed = synset.gloss.clone();
    for e in &synset.examples {
        parsed.push_str(e);
    }
    if squeeze(raw_gloss) != squeeze(&parsed) {
        return Err(format!(
            "{}: gloss characters differ from {raw_gloss:?}",
            synset.id
        ));
    }
    let flat = words(raw_gloss);
    for e in &synset.examples {
        if !flat.contains(&format!("\"{}\"", words(e))) && !flat.contains(&words(e)) {
            return Err(format!("{}: example {e:?} not in source text", synset.id));
        }
    }
    for piece in synset.gloss.split("; ") {
        if !flat.contains(piece) {
            return Err(format!(
                "{}: definition piece {piece:?} not in source text",
                synset.id
            ));
        }
    }
    Ok(())
}

/// Parses the fixture files and holds them to the hand-counted manifest
/// and to counts taken from the raw lines.
pub fn parser_fixture() -> Outcome {
    let mut total_synsets = 0;
    let mut total_words = 0;
    for row in manifest() {
        let text =
            std::fs::read_to_string(fixture_dir().join(&row.file)).map_err(|e| e.to_string())?;
        let (synsets, header, words, examples) = raw_counts(&text);
        let expected = (row.synsets, row.header_lines, row.words, row.examples);
        if (synsets, header, words, examples) != expected {
            return Err(format!(
                "{}: raw counts {:?} disagree with manifest {expected:?}",
                row.file,
                (synsets, header, words, examples)
            ));
        }
        let (parsed, report) =
            wndb::parse_data_file(&text, file_pos(&row.file)).map_err(|e| e.to_string())?;
        if !report.errors.is_empty() {
            return Err(format!(
                "{}: {} malformed lines, first {:?}",
                row.file,
                report.errors.len(),
                report.errors[0]
            ));
        }
        if parsed.len() != row.synsets {
            return Err(format!(
                "{}: parsed {} synsets, manifest {}",
                row.file,
                parsed.len(),
                row.synsets
            ));
        }
        let lemmas: usize = parsed.iter().map(|s| s.lemmas.len()).sum();
        if lemmas != row.words {
            return Err(format!(
                "{}: parsed {lemmas} lemmas, word counts sum to {}",
                row.file, row.words
            ));
        }
        let ex: usize = parsed.iter().map(|s| s.examples.len()).sum();
        if ex != row.examples {
            return Err(format!(
                "{}: parsed {ex} examples, manifest {}",
                row.file, row.examples
            ));
        }
        let raw_lines: Vec<&str> = text
            .lines()
            .filter(|l| !l.starts_with("  ") && !l.trim().is_empty())
            .collect();
        for (line, synset) in raw_lines.iter().zip(&parsed) {
            lossless(line.split_once('|').unwrap().1, synset)?;
        }
        total_synsets += parsed.len();
        total_words += lemmas;
    }
    Ok(format!(
        "{total_synsets} synsets, {total_words} lemmas, no malformed lines, glosses lossless"
    ))
}

pub fn fixture_sources() -> BTreeMap<SynsetId, SourceSynset> {
    wndb::load_source(&fixture_dir()).unwrap().0
}

pub fn at(t: i64) -> Timestamp {
    Timestamp(t)
}

/// Drives `id` through submission and correction, and on to acceptance
/// when `accept` is set.
pub fn drive(store: &mut ProjectStore, id: SynsetId, content: Edits, accept: bool, t: i64) {
    let tr = Transition::new(Action::Submit, actor(Role::Translator, 0), Role::Translator)
        .edits(content)
        .at(at(t));
    store.transition(id, tr).unwrap();
    let tr =
        Transition::new(Action::Accept, actor(Role::Corrector, 0), Role::Corrector).at(at(t + 1));
    store.transition(id, tr).unwrap();
    if accept {
        let tr =
            Transition::new(Action::Accept, actor(Role::Expert, 0), Role::Expert).at(at(t + 2));
        store.transition(id, tr).unwrap();
    }
}

/// The fixture with every synset past correction: adverbs and every
/// seventh synset as gaps, the rest with Arabic content, alternately
/// accepted.
pub fn reviewed_fixture() -> ProjectStore {
    let mut store = ProjectStore::new();
    store
        .import_sources(fixture_sources().into_values().collect())
        .unwrap();
    let ids: Vec<SynsetId> = store.project().sources.keys().copied().collect();
    for (n, id) in ids.into_iter().enumerate() {
        let gap = id.pos == Pos::Adverb || n % 7 == 0;
        let content = if gap { gap_content() } else { valid_content(n) };
        drive(&mut store, id, content, n % 2 == 0, 10 * n as i64);
    }
    store
}

pub fn english_strings(source: &SourceSynset) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for l in &source.lemmas {
        out.push(l.clone());
        out.push(l.replace(' ', "_"));
    }
    out.push(source.gloss.clone());
    out.extend(source.examples.iter().cloned());
    out.retain(|s| !s.trim().is_empty());
    out
}

fn string_values(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::String(s) => out.push(s.clone()),
        Value::Array(a) => a.iter().for_each(|x| string_values(x, out)),
        Value::Object(m) => m.values().for_each(|x| string_values(x, out)),
        _ => {}
    }
}

fn bounded(hay: &str, needle: &str) -> bool {
    hay.match_indices(needle).any(|(i, _)| {
        let before = hay[..i].chars().next_back();
        let after = hay[i + needle.len()..].chars().next();
        !before.is_some_and(char::is_alphanumeric) && !after.is_some_and(char::is_alphanumeric)
    })
}

/// English strings of `source` found among the string values of `view`.
pub fn leaks(view: &Value, source: &SourceSynset) -> Vec<String> {
    let mut values = Vec::new();
    string_values(view, &mut values);
    english_strings(source)
        .into_iter()
        .filter(|needle| values.iter().any(|v| bounded(v, needle)))
        .collect()
}

pub fn users() -> UserConfig {
    let mut list = Vec::new();
    for role in Role::ALL {
        for n in 0..2 {
            let id = actor(role, n);
            list.push(User {
                token: format!("token-{id}"),
                id: UserId::new(id),
                role,
            });
        }
    }
    UserConfig::new(list).unwrap()
}

pub fn token(role: Role, n: usize) -> String {
    format!("token-{}", actor(role, n))
}

pub fn app(store: ProjectStore) -> (Arc<AppState>, axum::Router) {
    let state = Arc::new(AppState::new(store, users()));
    let router = api::router(state.clone());
    (state, router)
}

pub fn path(id: SynsetId) -> String {
    format!("/api/synsets/{}/{}", id.pos.tag(), id.offset)
}

pub async fn call(
    router: &axum::Router,
    method: &str,
    uri: &str,
    token: Option<&str>,
    body: Option<Value>,
) -> (u16, Value) {
    let (status, bytes) = call_raw(
        router,
        method,
        uri,
        token,
        body.map(|b| b.to_string()),
        "application/json",
    )
    .await;
    let value = serde_json::from_slice(&bytes).unwrap_or(Value::Null);
    (status, value)
}

pub async fn call_raw(
    router: &axum::Router,
    method: &str,
    uri: &str,
    token: Option<&str>,
    body: Option<String>,
    content_type: &str,
) -> (u16, Vec<u8>) {
    let mut req = axum::http::Request::builder().method(method).uri(uri);
    if let Some(t) = token {
        req = req.header("authorization", format!("Bearer {t}"));
    }
    let req = match body {
        Some(b) => req
            .header("content-type", content_type)
            .body(axum::body::Body::from(b)),
        None => req.body(axum::body::Body::empty()),
    }
    .unwrap();
    let resp = router.clone().oneshot(req).await.unwrap();
    let status = resp.status().as_u16();
    let bytes = resp
        .into_body()
        .collect()
        .await
        .unwrap()
        .to_bytes()
        .to_vec();
    (status, bytes)
}

/// Expert views of non-gap records, taken both from the view builder and
/// from the HTTP service, hold none of the source's English text. Gap
/// records serve as the control: their English must show.
pub fn redaction() -> Outcome {
    let store = reviewed_fixture();
    let mut checked = 0;
    let mut controls = 0;
    let mut direct = Vec::new();
    for (id, record) in &store.project().records {
        if !matches!(
            record.state,
            WorkflowState::PendingExpert | WorkflowState::Accepted
        ) {
            return Err(format!("{id} left in {}", record.state));
        }
        let source = store.source(id).unwrap();
        let view =
            serde_json::to_value(workflow::view_for(record, Some(source), Role::Expert)).unwrap();
        direct.push((*id, record.is_gap, view));
    }
    let (_, router) = app(store.clone());
    let rt = tokio::runtime::Builder::new_current_thread()
        .enable_all()
        .build()
        .unwrap();
    let served: Vec<(SynsetId, u16, Value)> = rt.block_on(async {
        let mut out = Vec::new();
        for (id, _, _) in &direct {
            let (status, body) = call(
                &router,
                "GET",
                &path(*id),
                Some(&token(Role::Expert, 1)),
                None,
            )
            .await;
            out.push((*id, status, body));
        }
        out
    });
    for ((id, gap, view), (_, status, body)) in direct.iter().zip(&served) {
        if *status != 200 {
            return Err(format!("GET {id} as expert returned {status}"));
        }
        let source = store.source(id).unwrap();
        for (label, v) in [("view", view), ("api", body)] {
            let found = leaks(v, source);
            if *gap {
                if !found.contains(&source.gloss) {
                    return Err(format!(
                        "{label} for gap {id} does not show the English gloss"
                    ));
                }
                controls += 1;
            } else {
                if !found.is_empty() {
                    return Err(format!("{label} for {id} leaks {found:?}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} expert views clean, {controls} gap views show English"
    ))
}

/// Random sequences of imports, claims, releases and transitions. The log
/// replays to the live state, and the file form loads back unchanged.
pub fn persistence_replay(cases: u32) -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let file = dir.path().join("p.lexibridge");
    let applied = Cell::new(0usize);
    let entries = Cell::new(0usize);
    let strategy = (
        script::script(6, 40),
        prop::collection::vec(any::<bool>(), 6),
    );
    runner(cases)
        .run(&strategy, |((n, steps), prior)| {
            let project = script::chain_project(n);
            let ids: Vec<SynsetId> = project.sources.keys().copied().collect();
            let mut store = ProjectStore::new();
            store
                .import_sources(project.sources.into_values().collect())
                .unwrap();
            let imported: Vec<_> = ids
                .iter()
                .zip(&prior)
                .filter(|(_, p)| **p)
                .enumerate()
                .map(|(k, (id, _))| {
                    let mut r = lexibridge_core::TranslationRecord::for_id(*id);
                    r.state = WorkflowState::PendingCorrection;
                    valid_content(900 + k).apply_to(&mut r);
                    r
                })
                .collect();
            if !imported.is_empty() {
                store.import_records(imported).unwrap();
            }
            let mut checkpoint = None;
            for (t, step) in steps.iter().enumerate() {
                let id = ids[step.record.index(ids.len())];
                let before = store.log().len();
                if step.claim {
                    let record = store.record(&id).unwrap();
                    let role = workflow::moves_from(record.state)
                        .next()
                        .map_or(Role::Translator, |m| m.role);
                    let _ = store.assign(
                        id,
                        &UserId::new(actor(role, step.actor)),
                        role,
                        at(t as i64),
                    );
                } else if t % 11 == 10 {
                    store.release_claims().unwrap();
                } else {
                    let tr = step.transition(store.record(&id).unwrap(), t as i64);
                    if store.transition(id, tr).is_ok() {
                        applied.set(applied.get() + 1);
                    }
                }
                prop_assert!(store.log().len() >= before);
                if t == steps.len() / 2 {
                    checkpoint = Some(store.log().to_vec());
                }
            }
            if let Some(prefix) = checkpoint {
                prop_assert_eq!(&store.log()[..prefix.len()], &prefix[..], "log rewritten");
            }
            entries.set(entries.get() + store.log().len());
            let replayed = ProjectStore::replay(store.log().iter().cloned())
                .map_err(|e| TestCaseError::fail(format!("replay failed: {e}")))?;
            prop_assert_eq!(&replayed, &store);
            let reparsed = ProjectStore::from_text(&store.to_text())
                .map_err(|e| TestCaseError::fail(format!("reload failed: {e}")))?;
            prop_assert_eq!(&reparsed, &store);
            store.save(&file).unwrap();
            prop_assert_eq!(&ProjectStore::load(&file).unwrap(), &store);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(format!(
        "{cases} sequences, {} transitions applied, {} log entries replayed",
        applied.get(),
        entries.get()
    ))
}
