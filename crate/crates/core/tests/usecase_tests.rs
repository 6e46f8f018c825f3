use std::fs;

use proptest::prelude::*;

use umlenrich::fixtures::{corpus, corpus_dir, dir};
use umlenrich::usecase::{load_corpus, parse_usecase, render_usecase, CorpusError, ListCell, UseCase, UseCaseError};

/// Steps counted from the raw Markdown row, independent of the parser.
fn raw_step_count(text: &str) -> usize {
    let row = text
        .lines()
        .find(|l| l.trim_start().starts_with("| Main Scenario"))
        .expect("row present");
    row.matches("<br>").count() + 1
}

#[test]
fn corpus_matches_manifest() {
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir().join("manifest.json")).unwrap()).unwrap();
    let c = corpus();
    assert_eq!(c.len() as u64, manifest["use_cases"]["count"].as_u64().unwrap());
    let steps = manifest["use_cases"]["main_scenario_steps"].as_object().unwrap();
    assert_eq!(steps.len(), c.len());
    for uc in &c.cases {
        let want = steps[&uc.id].as_u64().unwrap() as usize;
        assert_eq!(uc.main_scenario.len(), want, "{}", uc.id);
        let file = corpus_dir().join(format!("uc{:02}.md", uc.number()));
        assert_eq!(raw_step_count(&fs::read_to_string(file).unwrap()), want, "{}", uc.id);
    }
    for (alias, target) in manifest["use_cases"]["aliases"].as_object().unwrap() {
        assert_eq!(c.resolve(alias), Some(target.as_str().unwrap()));
    }
}

#[test]
fn corpus_is_sorted_numerically() {
    let ids: Vec<String> = corpus().ids().map(str::to_owned).collect();
    let want: Vec<String> = (1..=21).map(|n| format!("UC{n}")).collect();
    assert_eq!(ids, want);
}

#[test]
fn single_case_fields() {
    let c = corpus();
    let uc7 = c.get("UC7").unwrap();
    assert_eq!(uc7.actor, "User");
    assert_eq!(uc7.main_scenario.len(), 3);
    let uc20 = c.get("UC22").unwrap();
    assert_eq!(uc20.id, "UC20");
    assert_eq!(uc20.extensions, ListCell::not_applicable());
    assert!(c.get("UC99").is_none());
}

const VALID: &str = "## UC1: Register\n\n| Attribute | Details |\n|---|---|\n| Actor | User |\n| Use Case | Register |\n| Description | Signs up. |\n| Pre-conditions | None. |\n| Triggers | Visit. |\n| Main Scenario | 1. Open form.<br>2. Submit. |\n| Post-conditions | Account exists. |\n| Extensions | N/A |\n| Relationships | N/A |\n";

#[test]
fn schema_errors() {
    assert!(parse_usecase(VALID).is_ok());
    let no_actor: String = VALID
        .lines()
        .filter(|l| !l.starts_with("| Actor"))
        .collect::<Vec<_>>()
        .join("\n");
    assert_eq!(parse_usecase(&no_actor), Err(UseCaseError::Schema("Actor".into())));
    assert_eq!(
        parse_usecase(&VALID.replace("## UC1: Register\n", "")),
        Err(UseCaseError::MissingHeading)
    );
    assert_eq!(
        parse_usecase(&VALID.replace("## UC1", "## Case1")),
        Err(UseCaseError::InvalidId("Case1".into()))
    );
    assert!(matches!(
        parse_usecase(&VALID.replace("| Use Case | Register |", "| Use Case | Signup |")),
        Err(UseCaseError::TitleMismatch { .. })
    ));
    assert_eq!(
        parse_usecase(&VALID.replace("| Triggers |", "| Colour |")),
        Err(UseCaseError::UnknownKey("Colour".into()))
    );
    assert_eq!(
        parse_usecase(&format!("{VALID}| Actor | Admin |\n")),
        Err(UseCaseError::DuplicateKey("Actor".into()))
    );
    assert!(matches!(
        parse_usecase(&VALID.replace("| Actor | User |", "| Actor | User | extra |")),
        Err(UseCaseError::MalformedRow(5))
    ));
}

#[test]
fn empty_dir_is_an_empty_corpus() {
    let d = tempfile::tempdir().unwrap();
    let c = load_corpus(d.path()).unwrap();
    assert!(c.is_empty());
    assert!(c.id_aliases.is_empty());
}

#[test]
fn duplicate_ids_are_rejected() {
    let d = tempfile::tempdir().unwrap();
    fs::write(d.path().join("a.md"), VALID).unwrap();
    fs::write(d.path().join("b.md"), VALID).unwrap();
    match load_corpus(d.path()) {
        Err(CorpusError::DuplicateId { id, .. }) => assert_eq!(id, "UC1"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn bad_files_name_their_path() {
    let d = tempfile::tempdir().unwrap();
    fs::write(d.path().join("broken.md"), "no table here").unwrap();
    let err = load_corpus(d.path()).unwrap_err();
    assert!(err.to_string().contains("broken.md"), "{err}");
}

#[test]
fn aliases_must_not_shadow_cases() {
    let d = tempfile::tempdir().unwrap();
    fs::write(d.path().join("a.md"), VALID).unwrap();
    fs::write(d.path().join("aliases"), "UC1 UC2\n").unwrap();
    assert!(matches!(load_corpus(d.path()), Err(CorpusError::BadAlias { .. })));
    fs::write(d.path().join("aliases"), "# comment\nUC9 UC1\n").unwrap();
    let c = load_corpus(d.path()).unwrap();
    assert_eq!(c.get("UC9").unwrap().title, "Register");
}

#[test]
fn load_order_does_not_matter() {
    let src = corpus_dir();
    let d = tempfile::tempdir().unwrap();
    for (i, uc) in corpus().cases.iter().rev().enumerate() {
        fs::write(d.path().join(format!("z{i:03}.md")), render_usecase(uc)).unwrap();
    }
    fs::copy(src.join("aliases"), d.path().join("aliases")).unwrap();
    assert_eq!(load_corpus(d.path()).unwrap(), corpus());
}

fn sentence() -> impl Strategy<Value = String> {
    "[A-Z][a-z]{1,8}( [a-z|]{1,8}){0,4}\\.?"
}

fn items(min: usize) -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(sentence(), min..4)
}

fn list_cell() -> impl Strategy<Value = ListCell> {
    prop_oneof![Just(ListCell::not_applicable()), items(1).prop_map(ListCell::of)]
}

fn use_case() -> impl Strategy<Value = UseCase> {
    (
        (1u32..500, sentence(), sentence(), sentence()),
        (items(0), items(0), items(1), items(0)),
        (list_cell(), list_cell()),
    )
        .prop_map(
            |((n, title, actor, description), (pre, trig, main, post), (ext, rel))| UseCase {
                id: format!("UC{n}"),
                title,
                actor,
                description,
                preconditions: pre,
                triggers: trig,
                main_scenario: main,
                postconditions: post,
                extensions: ext,
                relationships: rel,
            },
        )
}

proptest! {
    #[test]
    fn render_parse_round_trip(uc in use_case()) {
        let text = render_usecase(&uc);
        prop_assert_eq!(parse_usecase(&text).unwrap(), uc);
    }
}
