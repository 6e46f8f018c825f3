//! Additive enhancement suggestions and the backends that produce them.
//!
//! Two backends exist: [`llm::LlmBackend`] talks to a chat-completion
//! endpoint and recovers suggestions by diffing the diagram it replies with,
//! and [`rules::RulesBackend`] replays a fixed mapping file offline.

pub mod llm;
pub mod prompt;
pub mod rules;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::merge::{diff, DeltaSummary, ModelDelta};
use crate::model::{Attribute, ClassDef, ClassModel, Method, Relationship};
use crate::usecase::UseCase;

pub use llm::{
    chat_completion, first_fenced_block, llm_suggest, request_body, suggestions_from_reply, LlmBackend, LlmConfig,
    RetryPolicy,
};
pub use prompt::{build_messages, build_prompt, PromptMessages, ENRICHMENT_PROMPT};
pub use rules::{rules_suggest, MappingConfig, RulesBackend};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuggestError {
    #[error("authentication failed: {0}")]
    AuthError(String),
    #[error("transport failed after {attempts} attempt(s): {message}")]
    TransportError { attempts: u32, message: String },
    #[error("malformed reply: {0}")]
    MalformedReply(String),
    #[error("reply drops existing elements ({}): first missing `{first_missing}`", removed_summary(.removed))]
    DestructiveReply {
        removed: DeltaSummary,
        first_missing: String,
    },
    #[error("mapping error: {0}")]
    MappingError(String),
}

fn removed_summary(s: &DeltaSummary) -> String {
    let r = &s.removed;
    format!(
        "{} classes, {} attributes, {} methods, {} relationships",
        r.classes, r.attributes, r.methods, r.relationships
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SuggestionKind {
    /// A new class. Only its attributes travel with it; methods are
    /// separate `AddMethod` suggestions so they can be reviewed one by one.
    AddClass {
        class_def: ClassDef,
    },
    AddAttribute {
        class: String,
        attribute: Attribute,
    },
    AddMethod {
        class: String,
        method: Method,
    },
    AddRelationship {
        relationship: Relationship,
    },
}

impl SuggestionKind {
    /// AddClass first so dependents can refer to the new class.
    fn rank(&self) -> u8 {
        match self {
            SuggestionKind::AddClass { .. } => 0,
            SuggestionKind::AddAttribute { .. } => 1,
            SuggestionKind::AddMethod { .. } => 2,
            SuggestionKind::AddRelationship { .. } => 3,
        }
    }

    /// Classes this suggestion needs to exist beforehand.
    pub fn required_classes(&self) -> Vec<&str> {
        match self {
            SuggestionKind::AddClass { .. } => Vec::new(),
            SuggestionKind::AddAttribute { class, .. } | SuggestionKind::AddMethod { class, .. } => {
                vec![class.as_str()]
            }
            SuggestionKind::AddRelationship { relationship } => {
                let (a, b) = relationship.endpoints();
                vec![a, b]
            }
        }
    }
}

impl fmt::Display for SuggestionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SuggestionKind::AddClass { class_def } => {
                write!(f, "add class {}", class_def.name)?;
                if !class_def.attributes.is_empty() {
                    let attrs: Vec<String> = class_def.attributes.iter().map(|a| a.to_string()).collect();
                    write!(f, " {{ {} }}", attrs.join("; "))?;
                }
                Ok(())
            }
            SuggestionKind::AddAttribute { class, attribute } => {
                write!(f, "add attribute {class}.{attribute}")
            }
            SuggestionKind::AddMethod { class, method } => {
                write!(f, "add method {class}.{}{method}", method.visibility.marker())
            }
            SuggestionKind::AddRelationship { relationship } => {
                write!(f, "add relationship {relationship}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Suggestion {
    #[serde(flatten)]
    pub kind: SuggestionKind,
    pub source_uc: String,
    #[serde(default)]
    pub rationale: String,
}

impl Suggestion {
    pub fn new(kind: SuggestionKind, source_uc: impl Into<String>) -> Self {
        Self {
            kind,
            source_uc: source_uc.into(),
            rationale: String::new(),
        }
    }

    pub fn with_rationale(mut self, rationale: impl Into<String>) -> Self {
        self.rationale = rationale.into();
        self
    }
}

impl fmt::Display for Suggestion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.source_uc, self.kind)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuggestionSet {
    pub suggestions: Vec<Suggestion>,
    pub backend_name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw_reply: Option<String>,
}

impl SuggestionSet {
    /// Drops repeated suggestions and orders the rest so that every
    /// `AddClass` precedes the suggestions that may depend on it.
    pub fn new(backend_name: impl Into<String>, suggestions: Vec<Suggestion>) -> Self {
        let mut unique: Vec<Suggestion> = Vec::with_capacity(suggestions.len());
        for s in suggestions {
            if !unique.contains(&s) {
                unique.push(s);
            }
        }
        unique.sort_by_key(|s| s.kind.rank());
        Self {
            suggestions: unique,
            backend_name: backend_name.into(),
            raw_reply: None,
        }
    }

    pub fn empty(backend_name: impl Into<String>) -> Self {
        Self::new(backend_name, Vec::new())
    }

    pub fn len(&self) -> usize {
        self.suggestions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.suggestions.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Suggestion> {
        self.suggestions.iter()
    }
}

/// A source of suggestions for one use case at a time.
pub trait SuggestionBackend {
    fn name(&self) -> &str;
    fn suggest(&self, model: &ClassModel, uc: &UseCase) -> Result<SuggestionSet, SuggestError>;
}

/// Converts the additive part of `diff(old, replied)` into suggestions
/// attributed to `source_uc`. Any removal is reported as
/// [`SuggestError::DestructiveReply`] instead of being repaired.
pub fn extract_suggestions(
    old: &ClassModel,
    replied: &ClassModel,
    source_uc: &str,
) -> Result<SuggestionSet, SuggestError> {
    let delta = diff(old, replied);
    if delta.has_removals() {
        return Err(SuggestError::DestructiveReply {
            removed: delta.summarize(),
            first_missing: delta.first_removal().unwrap_or_default(),
        });
    }
    Ok(SuggestionSet::new("diff", suggestions_of(&delta, source_uc)))
}

/// The additive part of `delta` as suggestions, ignoring removals.
pub fn suggestions_of(delta: &ModelDelta, source_uc: &str) -> Vec<Suggestion> {
    let mut out = Vec::new();
    for c in &delta.added_classes {
        out.push(Suggestion::new(
            SuggestionKind::AddClass { class_def: c.shell() },
            source_uc,
        ));
    }
    for a in &delta.added_attributes {
        out.push(Suggestion::new(
            SuggestionKind::AddAttribute {
                class: a.class.clone(),
                attribute: a.attribute.clone(),
            },
            source_uc,
        ));
    }
    for m in &delta.added_methods {
        out.push(Suggestion::new(
            SuggestionKind::AddMethod {
                class: m.class.clone(),
                method: m.method.without_provenance(),
            },
            source_uc,
        ));
    }
    for r in &delta.added_relationships {
        out.push(Suggestion::new(
            SuggestionKind::AddRelationship {
                relationship: r.clone(),
            },
            source_uc,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Parameter;

    #[test]
    fn set_orders_classes_first_and_dedups() {
        let m = Suggestion::new(
            SuggestionKind::AddMethod {
                class: "New".into(),
                method: Method::new("f", vec![], "void"),
            },
            "UC1",
        );
        let c = Suggestion::new(
            SuggestionKind::AddClass {
                class_def: ClassDef::new("New"),
            },
            "UC1",
        );
        let set = SuggestionSet::new("t", vec![m.clone(), c.clone(), m.clone()]);
        assert_eq!(set.suggestions, vec![c, m]);
    }

    #[test]
    fn suggestion_json_shape() {
        let s = Suggestion::new(
            SuggestionKind::AddMethod {
                class: "User".into(),
                method: Method::new("f", vec![Parameter::new("a", "string")], "boolean"),
            },
            "UC1",
        );
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["kind"], "add_method");
        assert_eq!(v["class"], "User");
        assert_eq!(v["source_uc"], "UC1");
        let back: Suggestion = serde_json::from_value(v).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn extract_on_identical_models_is_empty() {
        let m = ClassModel::new().add_class(ClassDef::new("A")).unwrap();
        assert!(extract_suggestions(&m, &m, "UC1").unwrap().is_empty());
    }

    #[test]
    fn extract_rejects_removals() {
        let m = ClassModel::new().add_class(ClassDef::new("A")).unwrap();
        let err = extract_suggestions(&m, &ClassModel::new(), "UC1").unwrap_err();
        assert!(matches!(err, SuggestError::DestructiveReply { .. }));
    }
}
