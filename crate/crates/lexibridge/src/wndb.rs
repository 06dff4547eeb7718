//! Reader for the Princeton WordNet database files (`data.<pos>` and
//! `index.<pos>`).
//!
//! Data lines have the shape
//! `offset lex_filenum ss_type w_cnt word lex_id [word lex_id]... p_cnt [ptr]... [frames] | gloss`.
//! Only hypernym pointers (`@`, `@i`) are kept; satellites additionally keep
//! their similar-to (`&`) link to the head adjective.

use std::collections::BTreeMap;
use std::path::Path;

use lexibridge_core::model::{Offset, Pos, SourceSynset, SynsetId};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A line that could not be parsed and was skipped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineError {
    pub file: String,
    pub line: usize,
    pub byte_offset: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseReport {
    pub files_read: Vec<String>,
    pub synsets_parsed: BTreeMap<Pos, usize>,
    /// License header lines (lines starting with two spaces).
    pub lines_skipped: usize,
    pub errors: Vec<LineError>,
    pub warnings: Vec<String>,
    pub version: Option<String>,
}

impl ParseReport {
    fn for_file(file: &str) -> Self {
        ParseReport {
            files_read: vec![file.to_string()],
            ..Default::default()
        }
    }

    pub fn total_synsets(&self) -> usize {
        self.synsets_parsed.values().sum()
    }

    pub fn merge(&mut self, other: ParseReport) {
        self.files_read.extend(other.files_read);
        for (pos, n) in other.synsets_parsed {
            *self.synsets_parsed.entry(pos).or_default() += n;
        }
        self.lines_skipped += other.lines_skipped;
        self.errors.extend(other.errors);
        self.warnings.extend(other.warnings);
        if self.version.is_none() {
            self.version = other.version;
        }
    }

    fn header(&mut self, line: &str) {
        self.lines_skipped += 1;
        if self.version.is_none() {
            if let Some(rest) = line.split("WordNet ").nth(1) {
                let token = rest.split_whitespace().next().unwrap_or("");
                if token.starts_with(|c: char| c.is_ascii_digit()) {
                    self.version = Some(token.to_string());
                }
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum WndbError {
    #[error("{file}:{line}: {reason}")]
    FatalFormat {
        file: String,
        line: usize,
        reason: String,
    },
    #[error("no data.<pos> files in {0}")]
    NoInputFiles(String),
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// The file stem WNDB uses for a part of speech.
pub fn file_suffix(pos: Pos) -> &'static str {
    match pos {
        Pos::Noun => "noun",
        Pos::Verb => "verb",
        Pos::Adjective | Pos::AdjectiveSatellite => "adj",
        Pos::Adverb => "adv",
    }
}

pub fn pos_for_suffix(suffix: &str) -> Option<Pos> {
    Some(match suffix {
        "noun" => Pos::Noun,
        "verb" => Pos::Verb,
        "adj" => Pos::Adjective,
        "adv" => Pos::Adverb,
        _ => return None,
    })
}

/// Lines with their 1-based number and starting byte offset.
fn lines(contents: &str) -> impl Iterator<Item = (usize, usize, &str)> {
    let mut offset = 0;
    contents
        .split_inclusive('\n')
        .enumerate()
        .map(move |(i, raw)| {
            let start = offset;
            offset += raw.len();
            (i + 1, start, raw.trim_end_matches(['\n', '\r']))
        })
}

/// Splits gloss text into its definition and the quoted example sentences.
///
/// Every maximal `"..."` span becomes one example. The remaining text pieces
/// are trimmed of blanks and `;` separators and joined with `"; "`. An
/// unmatched quote is kept as definition text.
pub fn split_gloss(text: &str) -> (String, Vec<String>) {
    let mut pieces: Vec<&str> = Vec::new();
    let mut examples = Vec::new();
    let mut rest = text;
    while let Some(open) = rest.find('"') {
        let after = &rest[open + 1..];
        let Some(close) = after.find('"') else {
            break;
        };
        pieces.push(&rest[..open]);
        examples.push(after[..close].trim().to_string());
        rest = &after[close + 1..];
    }
    pieces.push(rest);
    let definition = pieces
        .iter()
        .map(|p| p.trim_matches(|c: char| c.is_whitespace() || c == ';'))
        .filter(|p| !p.is_empty())
        .map(lexibridge_core::normalize_lemma)
        .collect::<Vec<_>>()
        .join("; ");
    (definition, examples)
}

/// Lemma form of a WNDB word: underscores become spaces and the adjective
/// position marker (`(a)`, `(p)`, `(ip)`) is dropped.
pub fn word_to_lemma(word: &str) -> String {
    let word = match word.find('(') {
        Some(i) if word.ends_with(')') => &word[..i],
        _ => word,
    };
    word.replace('_', " ")
}

enum LineOutcome {
    Synset(SourceSynset, Vec<String>),
    Malformed(String),
}

fn parse_offset(token: &str) -> Option<Offset> {
    token.parse().ok()
}

fn parse_data_line(
    file: &str,
    number: usize,
    line: &str,
    file_pos: Pos,
) -> Result<LineOutcome, WndbError> {
    use LineOutcome::Malformed;
    let fatal = |reason: String| WndbError::FatalFormat {
        file: file.to_string(),
        line: number,
        reason,
    };
    let Some((head, gloss_text)) = line.split_once('|') else {
        return Ok(Malformed("missing `|` gloss separator".into()));
    };
    let mut fields = head.split_ascii_whitespace();
    let mut next = |what: &str| fields.next().ok_or_else(|| format!("missing {what}"));
    macro_rules! field {
        ($what:expr) => {
            match next($what) {
                Ok(v) => v,
                Err(e) => return Ok(Malformed(e)),
            }
        };
    }

    let offset_tok = field!("offset");
    let Some(offset) = parse_offset(offset_tok) else {
        return Ok(Malformed(format!("bad offset {offset_tok:?}")));
    };
    let lex_tok = field!("lex_filenum");
    let lex_file = match lex_tok.parse::<u8>() {
        Ok(n) if n <= 99 && lex_tok.len() == 2 => n,
        _ => return Ok(Malformed(format!("bad lex_filenum {lex_tok:?}"))),
    };
    let ss_tok = field!("ss_type");
    let pos = match ss_tok.chars().next().and_then(Pos::from_tag) {
        Some(p) if ss_tok.len() == 1 && p.shares_offsets_with(file_pos) => p,
        _ => {
            return Ok(Malformed(format!(
                "ss_type {ss_tok:?} does not belong in this file"
            )))
        }
    };
    let w_tok = field!("w_cnt");
    let w_cnt = usize::from_str_radix(w_tok, 16)
        .map_err(|_| fatal(format!("w_cnt {w_tok:?} is not hexadecimal")))?;
    if w_cnt == 0 {
        return Ok(Malformed("w_cnt is zero".into()));
    }
    let mut lemmas: Vec<String> = Vec::with_capacity(w_cnt);
    let mut warnings = Vec::new();
    for _ in 0..w_cnt {
        let word = field!("word");
        let lex_id = field!("lex_id");
        if u8::from_str_radix(lex_id, 16).is_err() {
            return Ok(Malformed(format!("bad lex_id {lex_id:?}")));
        }
        let lemma = word_to_lemma(word);
        if lemmas
            .iter()
            .any(|l| l.to_lowercase() == lemma.to_lowercase())
        {
            warnings.push(format!(
                "{file}:{number}: dropped case-duplicate lemma {lemma:?}"
            ));
            continue;
        }
        lemmas.push(lemma);
    }
    let p_tok = field!("p_cnt");
    if !p_tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(fatal(format!("p_cnt {p_tok:?} is not decimal")));
    }
    let p_cnt: usize = p_tok
        .parse()
        .map_err(|_| fatal(format!("p_cnt {p_tok:?} is not decimal")))?;
    let mut hypernyms = Vec::new();
    for _ in 0..p_cnt {
        let symbol = field!("pointer symbol");
        let target = field!("pointer offset");
        let target_pos = field!("pointer pos");
        let source_target = field!("pointer source/target");
        let (Some(target), Some(target_pos)) = (
            parse_offset(target),
            target_pos.chars().next().and_then(Pos::from_tag),
        ) else {
            return Ok(Malformed(format!(
                "bad pointer {symbol} {target} {target_pos}"
            )));
        };
        if source_target.len() != 4 || u16::from_str_radix(source_target, 16).is_err() {
            return Ok(Malformed(format!(
                "bad pointer source/target {source_target:?}"
            )));
        }
        let keep =
            matches!(symbol, "@" | "@i") || (pos == Pos::AdjectiveSatellite && symbol == "&");
        let id = SynsetId::new(target_pos, target);
        if keep && !hypernyms.contains(&id) {
            hypernyms.push(id);
        }
    }
    let trailing: Vec<&str> = fields.collect();
    if !trailing.is_empty() {
        if pos != Pos::Verb {
            return Ok(Malformed(format!(
                "unexpected fields {trailing:?} before gloss"
            )));
        }
        // verb frames: f_cnt followed by `+ f_num w_num` triples
        let f_cnt = trailing[0].parse::<usize>().ok();
        let well_formed = f_cnt.is_some_and(|n| {
            trailing.len() == 1 + 3 * n && trailing[1..].chunks(3).all(|c| c[0] == "+")
        });
        if !well_formed {
            return Ok(Malformed(format!("bad verb frame list {trailing:?}")));
        }
    }

    let (gloss, examples) = split_gloss(gloss_text);
    let id = SynsetId::new(pos, offset);
    hypernyms.retain(|h| *h != id);
    match SourceSynset::new(id, lemmas, gloss, examples, hypernyms, lex_file) {
        Ok(s) => Ok(LineOutcome::Synset(s, warnings)),
        Err(e) => Ok(Malformed(e.to_string())),
    }
}

/// Parses one `data.<pos>` file. Malformed lines are skipped and recorded;
/// non-numeric word or pointer counts abort the whole file.
pub fn parse_data_file(
    contents: &str,
    pos: Pos,
) -> Result<(Vec<SourceSynset>, ParseReport), WndbError> {
    let file = format!("data.{}", file_suffix(pos));
    let mut report = ParseReport::for_file(&file);
    let mut synsets: Vec<SourceSynset> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (number, byte_offset, line) in lines(contents) {
        if line.starts_with("  ") {
            report.header(line);
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let mut malformed = |reason: String| {
            report.errors.push(LineError {
                file: file.clone(),
                line: number,
                byte_offset,
                reason,
            })
        };
        match parse_data_line(&file, number, line, pos)? {
            LineOutcome::Synset(synset, warnings) => {
                if !seen.insert(synset.id) {
                    malformed(format!("duplicate synset {}", synset.id));
                    continue;
                }
                report.warnings.extend(warnings);
                *report.synsets_parsed.entry(synset.id.pos).or_default() += 1;
                synsets.push(synset);
            }
            LineOutcome::Malformed(reason) => malformed(reason),
        }
    }
    Ok((synsets, report))
}

/// Lemma → synsets map from one `index.<pos>` file.
pub type LemmaIndex = BTreeMap<String, Vec<SynsetId>>;

/// Parses one `index.<pos>` file:
/// `lemma pos synset_cnt p_cnt [ptr_symbol]... sense_cnt tagsense_cnt synset_offset...`.
pub fn parse_index_file(contents: &str, pos: Pos) -> (LemmaIndex, ParseReport) {
    let file = format!("index.{}", file_suffix(pos));
    let mut report = ParseReport::for_file(&file);
    let mut index = LemmaIndex::new();
    for (number, byte_offset, line) in lines(contents) {
        if line.starts_with("  ") {
            report.header(line);
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        match parse_index_line(line, pos) {
            Ok((lemma, ids)) => index.entry(lemma).or_default().extend(ids),
            Err(reason) => report.errors.push(LineError {
                file: file.clone(),
                line: number,
                byte_offset,
                reason,
            }),
        }
    }
    (index, report)
}

fn parse_index_line(line: &str, pos: Pos) -> Result<(String, Vec<SynsetId>), String> {
    let tokens: Vec<&str> = line.split_ascii_whitespace().collect();
    let count = |i: usize, what: &str| -> Result<usize, String> {
        tokens
            .get(i)
            .ok_or_else(|| format!("missing {what}"))?
            .parse()
            .map_err(|_| format!("bad {what} {:?}", tokens[i]))
    };
    let lemma = tokens.first().ok_or("empty line")?;
    match tokens
        .get(1)
        .and_then(|t| t.chars().next())
        .and_then(Pos::from_tag)
    {
        Some(p) if p.shares_offsets_with(pos) => {}
        _ => {
            return Err(format!(
                "pos field does not match index.{}",
                file_suffix(pos)
            ))
        }
    }
    let synset_cnt = count(2, "synset_cnt")?;
    let p_cnt = count(3, "p_cnt")?;
    let offsets_at = 4 + p_cnt + 2;
    count(4 + p_cnt, "sense_cnt")?;
    count(5 + p_cnt, "tagsense_cnt")?;
    let offsets = tokens.get(offsets_at..).unwrap_or(&[]);
    if offsets.len() != synset_cnt {
        return Err(format!(
            "expected {synset_cnt} offsets, found {}",
            offsets.len()
        ));
    }
    let ids = offsets
        .iter()
        .map(|t| {
            parse_offset(t)
                .map(|o| SynsetId::new(pos, o))
                .ok_or_else(|| format!("bad offset {t:?}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((word_to_lemma(lemma), ids))
}

/// Loads every `data.<pos>` file in `dir`. Hypernym links that do not
/// resolve are reported as warnings; the synsets are kept.
pub fn load_source(
    dir: &Path,
) -> Result<(BTreeMap<SynsetId, SourceSynset>, ParseReport), WndbError> {
    let mut files = BTreeMap::new();
    for suffix in ["noun", "verb", "adj", "adv"] {
        let path = dir.join(format!("data.{suffix}"));
        if !path.is_file() {
            continue;
        }
        let contents = std::fs::read_to_string(&path).map_err(|source| WndbError::Io {
            path: path.display().to_string(),
            source,
        })?;
        files.insert(format!("data.{suffix}"), contents);
    }
    if files.is_empty() {
        return Err(WndbError::NoInputFiles(dir.display().to_string()));
    }
    parse_source_files(&files)
}

/// [`load_source`] over in-memory files keyed by file name. Names other
/// than `data.<pos>` are ignored with a warning.
pub fn parse_source_files(
    files: &BTreeMap<String, String>,
) -> Result<(BTreeMap<SynsetId, SourceSynset>, ParseReport), WndbError> {
    let mut report = ParseReport::default();
    let mut all = BTreeMap::new();
    for (name, contents) in files {
        let Some(pos) = name.strip_prefix("data.").and_then(pos_for_suffix) else {
            report
                .warnings
                .push(format!("{name}: not a data file, ignored"));
            continue;
        };
        let (synsets, file_report) = parse_data_file(contents, pos)?;
        report.merge(file_report);
        all.extend(synsets.into_iter().map(|s| (s.id, s)));
    }
    if report.files_read.is_empty() {
        return Err(WndbError::NoInputFiles("request".into()));
    }
    resolve_links(&mut all, &mut report);
    Ok((all, report))
}

/// Pointer targets name adjectives with `a` or `s` interchangeably; rewrites
/// each link to the tag the target synset actually has and reports the rest
/// as dangling.
pub fn resolve_links(all: &mut BTreeMap<SynsetId, SourceSynset>, report: &mut ParseReport) {
    let ids: std::collections::BTreeSet<SynsetId> = all.keys().copied().collect();
    for synset in all.values_mut() {
        for link in synset.hypernyms.iter_mut() {
            if ids.contains(link) {
                continue;
            }
            let twin = match link.pos {
                Pos::Adjective => Some(Pos::AdjectiveSatellite),
                Pos::AdjectiveSatellite => Some(Pos::Adjective),
                _ => None,
            }
            .map(|p| SynsetId::new(p, link.offset));
            match twin {
                Some(t) if ids.contains(&t) => *link = t,
                _ => report
                    .warnings
                    .push(format!("{}: dangling hypernym {}", synset.id, link)),
            }
        }
    }
}
