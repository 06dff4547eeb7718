//! Target-lexicon export as WN-LMF XML.

use std::collections::BTreeMap;

use lexibridge_core::model::{SynsetId, TranslationRecord};
use quick_xml::events::{BytesDecl, BytesText, Event};
use quick_xml::Writer;

use crate::prior::has_content;

/// Lexicon attributes written on the `<Lexicon>` element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconInfo {
    pub id: String,
    pub label: String,
    pub language: String,
    pub email: String,
    pub license: String,
    pub version: String,
}

impl Default for LexiconInfo {
    fn default() -> Self {
        LexiconInfo {
            id: "lexibridge".into(),
            label: "lexibridge target wordnet".into(),
            language: "ar".into(),
            email: String::new(),
            license: String::new(),
            version: "0.1".into(),
        }
    }
}

fn synset_xml_id(lexicon: &str, id: SynsetId) -> String {
    format!("{lexicon}-{}-{}", id.offset, id.pos.tag())
}

fn sense_xml_id(lexicon: &str, id: SynsetId, rank: u32) -> String {
    format!("{lexicon}-{}-{}-{rank}", id.offset, id.pos.tag())
}

struct Sense<'a> {
    synset: SynsetId,
    rank: u32,
    examples: &'a [String],
}

/// Writes every record with content. Lexical entries group senses by
/// lemma and part of speech; gaps become non-lexicalized synsets whose
/// substitute phrases are listed as examples.
pub fn export_lmf<'a, I>(records: I, info: &LexiconInfo) -> String
where
    I: IntoIterator<Item = &'a TranslationRecord>,
{
    let mut records: Vec<&TranslationRecord> =
        records.into_iter().filter(|r| has_content(r)).collect();
    records.sort_by_key(|r| r.source);

    let mut entries: BTreeMap<(char, &str), Vec<Sense<'_>>> = BTreeMap::new();
    for r in &records {
        for s in r.synonyms_by_rank() {
            entries
                .entry((r.source.pos.tag(), s.lemma.as_str()))
                .or_default()
                .push(Sense {
                    synset: r.source,
                    rank: s.rank,
                    examples: &s.examples,
                });
        }
    }

    let mut w = Writer::new_with_indent(Vec::new(), b' ', 2);
    let written: std::io::Result<()> = (|| {
        w.write_event(Event::Decl(BytesDecl::new("1.0", Some("UTF-8"), None)))?;
        w.write_event(Event::DocType(BytesText::from_escaped(
            "LexicalResource SYSTEM \"http://globalwordnet.github.io/schemas/WN-LMF-1.1.dtd\"",
        )))?;
        w.create_element("LexicalResource")
            .with_attribute(("xmlns:dc", "https://globalwordnet.github.io/schemas/dc/"))
            .write_inner_content(|w| {
                w.create_element("Lexicon")
                    .with_attributes([
                        ("id", info.id.as_str()),
                        ("label", info.label.as_str()),
                        ("language", info.language.as_str()),
                        ("email", info.email.as_str()),
                        ("license", info.license.as_str()),
                        ("version", info.version.as_str()),
                    ])
                    .write_inner_content(|w| {
                        for (n, ((pos, lemma), senses)) in entries.iter().enumerate() {
                            let pos = pos.to_string();
                            w.create_element("LexicalEntry")
                                .with_attribute(("id", format!("{}-w{}", info.id, n + 1).as_str()))
                                .write_inner_content(|w| {
                                    w.create_element("Lemma")
                                        .with_attributes([
                                            ("writtenForm", *lemma),
                                            ("partOfSpeech", pos.as_str()),
                                        ])
                                        .write_empty()?;
                                    for s in senses {
                                        w.create_element("Sense")
                                            .with_attributes([
                                                (
                                                    "id",
                                                    sense_xml_id(&info.id, s.synset, s.rank)
                                                        .as_str(),
                                                ),
                                                (
                                                    "synset",
                                                    synset_xml_id(&info.id, s.synset).as_str(),
                                                ),
                                            ])
                                            .write_inner_content(|w| {
                                                for e in s.examples {
                                                    w.create_element("Example")
                                                        .write_text_content(BytesText::new(e))?;
                                                }
                                                Ok(())
                                            })?;
                                    }
                                    Ok(())
                                })?;
                        }
                        for r in &records {
                            write_synset(w, &info.id, r)?;
                        }
                        Ok(())
                    })?;
                Ok(())
            })?;
        Ok(())
    })();
    written.expect("writing to memory cannot fail");
    let mut out = String::from_utf8(w.into_inner()).expect("writer emits UTF-8");
    out.push('\n');
    out
}

fn write_synset(
    w: &mut Writer<Vec<u8>>,
    lexicon: &str,
    r: &TranslationRecord,
) -> std::io::Result<()> {
    let id = synset_xml_id(lexicon, r.source);
    let pos = r.source.pos.tag().to_string();
    let members: Vec<String> = r
        .synonyms_by_rank()
        .iter()
        .map(|s| sense_xml_id(lexicon, r.source, s.rank))
        .collect();
    let members = members.join(" ");
    let mut el = w.create_element("Synset").with_attributes([
        ("id", id.as_str()),
        ("ili", ""),
        ("partOfSpeech", pos.as_str()),
    ]);
    if !members.is_empty() {
        el = el.with_attribute(("members", members.as_str()));
    }
    if r.is_gap {
        el = el.with_attribute(("lexicalized", "false"));
    }
    el.write_inner_content(|w| {
        if !r.gloss.trim().is_empty() {
            w.create_element("Definition")
                .write_text_content(BytesText::new(&r.gloss))?;
        }
        if r.is_gap {
            for p in &r.phrases {
                w.create_element("Example")
                    .write_text_content(BytesText::new(p))?;
            }
        }
        Ok(())
    })?;
    Ok(())
}
