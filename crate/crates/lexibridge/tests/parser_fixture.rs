mod common;

use std::collections::BTreeMap;

use lexibridge::wndb::{self, parse_index_file, WndbError};
use lexibridge_core::model::{ranked, Pos, Project, SynsetId, TranslationRecord};
use lexibridge_core::validation::validate_project;

fn id(s: &str) -> SynsetId {
    s.parse().unwrap()
}

#[test]
fn fixture_matches_manifest() {
    let summary = common::parser_fixture().unwrap();
    println!("{summary}");
}

#[test]
fn whole_directory_load() {
    let (sources, report) = wndb::load_source(&common::fixture_dir()).unwrap();
    let expected: usize = common::manifest().iter().map(|r| r.synsets).sum();
    assert_eq!(sources.len(), expected);
    assert_eq!(report.total_synsets(), expected);
    assert!(report.errors.is_empty());
    assert_eq!(report.files_read.len(), 4);
    let dangling: Vec<_> = report
        .warnings
        .iter()
        .filter(|w| w.contains("dangling"))
        .collect();
    assert_eq!(dangling.len(), 1, "{dangling:?}");
    for s in sources.values() {
        for h in &s.hypernyms {
            assert!(
                sources.contains_key(h) || dangling[0].contains(&h.to_string()),
                "{} -> {h}",
                s.id
            );
        }
    }
}

#[test]
fn object_and_expressively() {
    let sources = common::fixture_sources();
    let object = &sources[&id("n:00002684")];
    assert_eq!(object.lemmas, ["object", "physical object"]);
    assert_eq!(
        object.gloss,
        "a tangible and visible entity; an entity that can cast a shadow"
    );
    assert_eq!(
        object.examples,
        ["it was full of rackets, balls and other objects"]
    );
    assert_eq!(object.hypernyms, [id("n:00001930")]);

    let adv = &sources[&id("r:00437407")];
    assert_eq!(adv.gloss, "with expression; in an expressive manner");
    assert_eq!(adv.examples.len(), 1);
    assert!(adv.examples[0].ends_with("very expressively"));
}

#[test]
fn turtledove_senses_share_a_parent() {
    let text = std::fs::read_to_string(common::fixture_dir().join("index.noun")).unwrap();
    let (index, report) = parse_index_file(&text, Pos::Noun);
    assert!(report.errors.is_empty(), "{:?}", report.errors);
    let senses = &index["turtledove"];
    assert_eq!(senses, &[id("n:01813088"), id("n:01813385")]);

    let sources = common::fixture_sources();
    let dove = id("n:01811909");
    for s in senses {
        assert_eq!(sources[s].hypernyms, [dove]);
    }

    // siblings sharing a target lemma are not a specialization problem
    let mut project = Project::new();
    project.add_sources(sources.values().cloned());
    for (s, lemma) in [(senses[0], "يمامة"), (senses[1], "يمامة")] {
        let mut r = TranslationRecord::for_id(s);
        r.synonyms = ranked([(lemma, vec![format!("رأيت {lemma}")])]);
        r.gloss = "طائر صغير من الحمام".into();
        project.records.insert(s, r);
    }
    let w11 = |p: &Project| {
        validate_project(p, None, true)
            .into_iter()
            .filter(|f| f.rule_id == "W11")
            .count()
    };
    assert_eq!(w11(&project), 0);

    let mut r = TranslationRecord::for_id(dove);
    r.synonyms = ranked([("يمامة", vec!["رأيت يمامة".to_string()])]);
    r.gloss = "طائر من الحمام".into();
    project.records.insert(dove, r);
    assert_eq!(w11(&project), 4);
}

#[test]
fn every_lemma_is_indexed() {
    let sources = common::fixture_sources();
    for (suffix, pos) in [
        ("noun", Pos::Noun),
        ("verb", Pos::Verb),
        ("adj", Pos::Adjective),
        ("adv", Pos::Adverb),
    ] {
        let text =
            std::fs::read_to_string(common::fixture_dir().join(format!("index.{suffix}"))).unwrap();
        let (index, _) = parse_index_file(&text, pos);
        for s in sources
            .values()
            .filter(|s| s.id.pos.bucket() == pos.bucket())
        {
            for lemma in &s.lemmas {
                let key = lemma.to_lowercase();
                let hits = index
                    .get(&key)
                    .unwrap_or_else(|| panic!("{key} missing from index.{suffix}"));
                assert!(
                    hits.iter().any(|h| h.offset == s.id.offset),
                    "{key} does not list {}",
                    s.id
                );
            }
        }
    }
}

#[test]
fn malformed_lines_are_skipped_with_position() {
    let text = "  1 header\n00001740 03 n 01 entity 0 000 | a thing\nnot a synset line\n00001930 03 n 01 stuff 0 000 | more\n";
    let (synsets, report) = wndb::parse_data_file(text, Pos::Noun).unwrap();
    assert_eq!(synsets.len(), 2);
    assert_eq!(report.errors.len(), 1);
    assert_eq!(report.errors[0].line, 3);
    assert_eq!(report.errors[0].byte_offset, text.find("not a").unwrap());
}

#[test]
fn bad_word_count_is_fatal() {
    let text = "00001740 03 n zz entity 0 000 | a thing\n";
    assert!(matches!(
        wndb::parse_data_file(text, Pos::Noun),
        Err(WndbError::FatalFormat { line: 1, .. })
    ));
}

#[test]
fn upload_ignores_other_files() {
    let mut files = BTreeMap::new();
    files.insert("README".to_string(), "hello".to_string());
    assert!(matches!(
        wndb::parse_source_files(&files),
        Err(WndbError::NoInputFiles(_))
    ));
    files.insert(
        "data.adv".to_string(),
        std::fs::read_to_string(common::fixture_dir().join("data.adv")).unwrap(),
    );
    let (sources, report) = wndb::parse_source_files(&files).unwrap();
    assert_eq!(sources.len(), 5);
    assert!(report.warnings.iter().any(|w| w.starts_with("README")));
}
