//! Tab-separated interchange format for existing translations.
//!
//! Seven columns per row: offset, pos, gap flag (`0`/`1`), synonyms, gloss,
//! examples, phrases. Synonyms and phrases are `;`-separated lists in rank
//! order. The examples column holds one `;`-separated group per synonym, and
//! examples within a group are separated by `|`. A backslash escapes `\`,
//! `;`, `|`, tab and newline inside any text.

use std::collections::BTreeMap;

use lexibridge_core::model::{ranked, SynsetId, TranslationRecord, WorkflowState};
use lexibridge_core::normalize_lemma;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::wndb::LineError;

pub const COLUMNS: usize = 7;
const FILE: &str = "prior.tsv";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ImportError {
    #[error("duplicate rows for {}", ids.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", "))]
    DuplicateRecord { ids: Vec<SynsetId> },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PriorImport {
    pub records: Vec<TranslationRecord>,
    pub errors: Vec<LineError>,
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            ';' => out.push_str("\\;"),
            '|' => out.push_str("\\|"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            other => out.push(other),
        }
    }
    out
}

/// Splits on every `sep` not preceded by an escape. Escapes stay in the
/// pieces so nested lists can be split again.
fn split_raw(text: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut start = 0;
    let mut escaped = false;
    for (i, c) in text.char_indices() {
        if escaped {
            escaped = false;
        } else if c == '\\' {
            escaped = true;
        } else if c == sep {
            parts.push(&text[start..i]);
            start = i + c.len_utf8();
        }
    }
    parts.push(&text[start..]);
    parts
}

/// Splits a list column; an empty column is an empty list.
fn list(column: &str, sep: char) -> Vec<&str> {
    if column.is_empty() {
        return Vec::new();
    }
    split_raw(column, sep)
}

fn unescape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some(other) => out.push(other),
            None => out.push('\\'),
        }
    }
    out
}

fn parse_row(line: &str) -> Result<TranslationRecord, String> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() != COLUMNS {
        return Err(format!("expected {COLUMNS} columns, found {}", cols.len()));
    }
    let id: SynsetId = format!("{}:{}", cols[1], cols[0])
        .parse()
        .map_err(|e| format!("{e}"))?;
    let is_gap = match cols[2] {
        "0" => false,
        "1" => true,
        other => return Err(format!("gap flag must be 0 or 1, got {other:?}")),
    };
    let lemmas: Vec<String> = list(cols[3], ';').into_iter().map(unescape).collect();
    let gloss = unescape(cols[4]);
    let groups: Vec<Vec<String>> = list(cols[5], ';')
        .into_iter()
        .map(|g| list(g, '|').into_iter().map(unescape).collect())
        .collect();
    let phrases: Vec<String> = list(cols[6], ';').into_iter().map(unescape).collect();

    if groups.len() > lemmas.len() {
        return Err(format!(
            "{} example groups for {} synonyms",
            groups.len(),
            lemmas.len()
        ));
    }
    if is_gap && !lemmas.is_empty() {
        return Err("gap row lists synonyms".into());
    }
    if is_gap && phrases.iter().all(|p| normalize_lemma(p).is_empty()) {
        return Err("gap row has no phrase".into());
    }
    if !is_gap && !phrases.is_empty() {
        return Err("phrases on a non-gap row".into());
    }

    let mut groups = groups.into_iter();
    let synonyms = ranked(
        lemmas
            .into_iter()
            .map(|l| (l, groups.next().unwrap_or_default())),
    );
    let mut record = TranslationRecord::for_id(id);
    record.state = WorkflowState::PendingCorrection;
    record.is_gap = is_gap;
    record.synonyms = synonyms;
    record.gloss = gloss;
    record.phrases = phrases;
    Ok(record)
}

/// Reads prior translations. Valid rows become records waiting for
/// correction; bad rows are reported and skipped. Any id listed twice
/// rejects the whole input.
pub fn import_prior_translations(contents: &str) -> Result<PriorImport, ImportError> {
    let mut out = PriorImport::default();
    let mut counts: BTreeMap<SynsetId, usize> = BTreeMap::new();
    let mut byte_offset = 0;
    for (i, raw) in contents.split_inclusive('\n').enumerate() {
        let start = byte_offset;
        byte_offset += raw.len();
        let line = raw.trim_end_matches(['\n', '\r']);
        if line.trim().is_empty() {
            continue;
        }
        match parse_row(line) {
            Ok(record) => {
                *counts.entry(record.source).or_default() += 1;
                out.records.push(record);
            }
            Err(reason) => out.errors.push(LineError {
                file: FILE.into(),
                line: i + 1,
                byte_offset: start,
                reason,
            }),
        }
    }
    let dupes: Vec<SynsetId> = counts
        .into_iter()
        .filter(|&(_, n)| n > 1)
        .map(|(id, _)| id)
        .collect();
    if !dupes.is_empty() {
        return Err(ImportError::DuplicateRecord { ids: dupes });
    }
    Ok(out)
}

/// Whether a record has anything worth exporting.
pub fn has_content(r: &TranslationRecord) -> bool {
    r.is_gap || !r.synonyms.is_empty() || !r.gloss.trim().is_empty()
}

/// One TSV row for a record, synonyms in rank order.
pub fn export_row(r: &TranslationRecord) -> String {
    let synonyms = r.synonyms_by_rank();
    let lemmas: Vec<String> = synonyms.iter().map(|s| escape(&s.lemma)).collect();
    let mut groups: Vec<String> = synonyms
        .iter()
        .map(|s| {
            s.examples
                .iter()
                .map(|e| escape(e))
                .collect::<Vec<_>>()
                .join("|")
        })
        .collect();
    while groups.last().is_some_and(|g| g.is_empty()) {
        groups.pop();
    }
    let phrases: Vec<String> = r.phrases.iter().map(|p| escape(p)).collect();
    format!(
        "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
        r.source.offset,
        r.source.pos.tag(),
        u8::from(r.is_gap),
        lemmas.join(";"),
        escape(&r.gloss),
        groups.join(";"),
        phrases.join(";"),
    )
}

/// Serializes every record with content, ordered by id.
pub fn export_tsv<'a, I>(records: I) -> String
where
    I: IntoIterator<Item = &'a TranslationRecord>,
{
    let mut rows: Vec<&TranslationRecord> =
        records.into_iter().filter(|r| has_content(r)).collect();
    rows.sort_by_key(|r| r.source);
    rows.into_iter().map(export_row).collect()
}
