//! Offline backend replaying a fixed use-case → suggestion mapping.
//!
//! The mapping file is a JSON array:
//!
//! ```json
//! [
//!   { "use_case": "UC1",
//!     "suggestions": [
//!       { "kind": "add_method", "class": "User",
//!         "signature": "+registerUser(name: string): boolean" }
//!     ] }
//! ]
//! ```
//!
//! `kind` is one of `add_class` (with optional `attributes`), `add_attribute`
//! (`signature` holds the attribute line), `add_method` and
//! `add_relationship` (`relationship` holds the PlantUML line).

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{SuggestError, Suggestion, SuggestionBackend, SuggestionKind, SuggestionSet};
use crate::model::{ClassDef, ClassModel};
use crate::plantuml::{parse_attribute, parse_method, parse_relationship};
use crate::usecase::UseCase;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleKind {
    AddClass,
    AddAttribute,
    AddMethod,
    AddRelationship,
}

/// One suggestion as written in the mapping file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSpec {
    pub kind: RuleKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relationship: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub attributes: Vec<String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub rationale: String,
}

impl RuleSpec {
    fn to_kind(&self) -> Result<SuggestionKind, String> {
        let class = || {
            self.class
                .clone()
                .ok_or_else(|| format!("{:?} rule needs `class`", self.kind))
        };
        let signature = || {
            self.signature
                .as_deref()
                .ok_or_else(|| format!("{:?} rule needs `signature`", self.kind))
        };
        Ok(match self.kind {
            RuleKind::AddClass => {
                let mut def = ClassDef::new(class()?);
                for a in &self.attributes {
                    def.attributes.push(parse_attribute(a)?);
                }
                SuggestionKind::AddClass { class_def: def }
            }
            RuleKind::AddAttribute => SuggestionKind::AddAttribute {
                class: class()?,
                attribute: parse_attribute(signature()?)?,
            },
            RuleKind::AddMethod => SuggestionKind::AddMethod {
                class: class()?,
                method: parse_method(signature()?)?,
            },
            RuleKind::AddRelationship => {
                let text = self
                    .relationship
                    .as_deref()
                    .ok_or("add_relationship rule needs `relationship`")?;
                SuggestionKind::AddRelationship {
                    relationship: parse_relationship(text)?,
                }
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleEntry {
    pub use_case: String,
    #[serde(default)]
    pub suggestions: Vec<RuleSpec>,
}

/// Parsed mapping file plus the id aliases used to match entries.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MappingConfig {
    pub entries: Vec<RuleEntry>,
    compiled: Vec<(String, Vec<Suggestion>)>,
    aliases: BTreeMap<String, String>,
}

impl MappingConfig {
    pub fn from_json(text: &str) -> Result<Self, SuggestError> {
        let entries: Vec<RuleEntry> =
            serde_json::from_str(text).map_err(|e| SuggestError::MappingError(format!("mapping JSON: {e}")))?;
        let mut compiled = Vec::with_capacity(entries.len());
        for entry in &entries {
            let mut out = Vec::with_capacity(entry.suggestions.len());
            for (i, spec) in entry.suggestions.iter().enumerate() {
                let kind = spec
                    .to_kind()
                    .map_err(|m| SuggestError::MappingError(format!("{} suggestion {}: {m}", entry.use_case, i + 1)))?;
                out.push(Suggestion::new(kind, &entry.use_case).with_rationale(&spec.rationale));
            }
            compiled.push((entry.use_case.clone(), out));
        }
        Ok(Self {
            entries,
            compiled,
            aliases: BTreeMap::new(),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, SuggestError> {
        let path = path.as_ref();
        let text =
            fs::read_to_string(path).map_err(|e| SuggestError::MappingError(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Alternative id -> canonical id, typically a corpus's alias table.
    pub fn with_aliases(mut self, aliases: BTreeMap<String, String>) -> Self {
        self.aliases = aliases;
        self
    }

    pub fn canonical<'a>(&'a self, id: &'a str) -> &'a str {
        self.aliases.get(id).map(String::as_str).unwrap_or(id)
    }

    /// Every suggestion mapped to `uc_id` after alias resolution, in file
    /// order, attributed to `uc_id`.
    pub fn suggestions_for(&self, uc_id: &str) -> Vec<Suggestion> {
        let want = self.canonical(uc_id);
        self.compiled
            .iter()
            .filter(|(id, _)| self.canonical(id) == want)
            .flat_map(|(_, s)| s.iter().cloned())
            .map(|mut s| {
                s.source_uc = uc_id.to_owned();
                s
            })
            .collect()
    }
}

/// Suggestions mapped to `uc.id`. A class a suggestion needs must be in
/// `model` or be introduced by an `add_class` earlier in the mapping file;
/// whether the reviewer accepted that class is the pipeline's concern.
pub fn rules_suggest(mapping: &MappingConfig, model: &ClassModel, uc: &UseCase) -> Result<SuggestionSet, SuggestError> {
    let want = mapping.canonical(&uc.id);
    let mut introduced: Vec<&str> = Vec::new();
    for (id, suggestions) in &mapping.compiled {
        let matching = mapping.canonical(id) == want;
        for s in suggestions {
            if let SuggestionKind::AddClass { class_def } = &s.kind {
                introduced.push(&class_def.name);
                continue;
            }
            if !matching {
                continue;
            }
            for c in s.kind.required_classes() {
                if !model.has_class(c) && !introduced.contains(&c) {
                    return Err(SuggestError::MappingError(format!(
                        "{}: class `{c}` is not in the model and no add_class for it precedes `{}`",
                        uc.id, s.kind
                    )));
                }
            }
        }
    }
    Ok(SuggestionSet::new(RULES_BACKEND, mapping.suggestions_for(&uc.id)))
}

pub const RULES_BACKEND: &str = "rules";

#[derive(Debug, Clone)]
pub struct RulesBackend {
    mapping: MappingConfig,
}

impl RulesBackend {
    pub fn new(mapping: MappingConfig) -> Self {
        Self { mapping }
    }

    pub fn mapping(&self) -> &MappingConfig {
        &self.mapping
    }
}

impl SuggestionBackend for RulesBackend {
    fn name(&self) -> &str {
        RULES_BACKEND
    }

    fn suggest(&self, model: &ClassModel, uc: &UseCase) -> Result<SuggestionSet, SuggestError> {
        rules_suggest(&self.mapping, model, uc)
    }
}
