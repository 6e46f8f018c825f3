//! The recycling-platform case study shipped with the crate.
//!
//! Diagrams and mapping files are embedded; the use-case corpus is read from
//! [`corpus_dir`].

use std::path::PathBuf;

use crate::model::ClassModel;
use crate::plantuml::parse;
use crate::report::RelationshipMapping;
use crate::suggest::MappingConfig;
use crate::usecase::{load_corpus, Corpus};

pub const INITIAL_PUML: &str = include_str!("../fixtures/recycling/initial.puml");
pub const ENHANCED_PUML: &str = include_str!("../fixtures/recycling/enhanced.puml");
pub const RULES_JSON: &str = include_str!("../fixtures/recycling/rules.json");
pub const RELATIONSHIPS_JSON: &str = include_str!("../fixtures/recycling/relationships.json");
pub const AUX_TYPES: &str = include_str!("../fixtures/recycling/aux_types.txt");

pub fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join("recycling")
}

pub fn corpus_dir() -> PathBuf {
    dir().join("usecases")
}

pub fn initial_model() -> ClassModel {
    parse(INITIAL_PUML).expect("initial fixture parses")
}

pub fn enhanced_model() -> ClassModel {
    parse(ENHANCED_PUML).expect("enhanced fixture parses")
}

pub fn corpus() -> Corpus {
    load_corpus(corpus_dir()).expect("fixture corpus loads")
}

/// The rules mapping with the corpus aliases applied.
pub fn rules_mapping() -> MappingConfig {
    MappingConfig::from_json(RULES_JSON)
        .expect("fixture mapping parses")
        .with_aliases(corpus().id_aliases)
}

pub fn relationship_mapping() -> RelationshipMapping {
    RelationshipMapping::from_json(RELATIONSHIPS_JSON).expect("fixture relationship mapping parses")
}

/// Names listed in an auxiliary-types file: one per line, `#` comments.
pub fn parse_aux_types(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_owned)
        .collect()
}

pub fn aux_types() -> Vec<String> {
    parse_aux_types(AUX_TYPES)
}
