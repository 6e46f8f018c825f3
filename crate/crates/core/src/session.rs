//! Persisted enrichment session: inputs, per-use-case iteration records and
//! the current diagram snapshot. Stored as one JSON file.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::merge::apply_one;
use crate::model::{ClassModel, ModelError};
use crate::plantuml::{parse, print, ParseError};
use crate::report::Metrics;
use crate::suggest::{LlmConfig, Suggestion, SuggestionKind, SuggestionSet};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: not a session file: {message}")]
    Format { path: PathBuf, message: String },
    #[error("session format version {found} is not supported (expected {FORMAT_VERSION})")]
    Version { found: u32 },
    #[error("stored snapshot does not parse: {0}")]
    Snapshot(ParseError),
    #[error("replaying decisions failed at {use_case}: {source}")]
    Replay {
        use_case: String,
        #[source]
        source: ModelError,
    },
    #[error("stored snapshot differs from the model replayed from the base diagram")]
    Integrity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BackendSpec {
    Llm { config: LlmConfig },
    Rules { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "decision", rename_all = "snake_case")]
pub enum Decision {
    Accepted,
    Rejected,
    /// Accepted with a reviewer-supplied replacement payload.
    Edited {
        payload: SuggestionKind,
    },
}

impl Decision {
    pub fn is_accepted(&self) -> bool {
        !matches!(self, Decision::Rejected)
    }

    /// The element to merge for `suggestion`, if any.
    pub fn effective<'a>(&'a self, suggestion: &'a Suggestion) -> Option<&'a SuggestionKind> {
        match self {
            Decision::Accepted => Some(&suggestion.kind),
            Decision::Rejected => None,
            Decision::Edited { payload } => Some(payload),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationSummary {
    pub metrics: Metrics,
    #[serde(default)]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub use_case_id: String,
    pub suggestions: SuggestionSet,
    /// Parallel to `suggestions`.
    pub decisions: Vec<Decision>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validation_summary: Option<ValidationSummary>,
    /// Set when the iteration aborted; such a record has no decisions and is
    /// retried on resume.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl IterationRecord {
    pub fn failed(&self) -> bool {
        self.error.is_some()
    }

    /// Suggestions paired with their decisions.
    pub fn reviewed(&self) -> impl Iterator<Item = (&Suggestion, &Decision)> {
        self.suggestions.iter().zip(&self.decisions)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Session {
    pub format_version: u32,
    pub base_diagram_path: PathBuf,
    pub corpus_path: PathBuf,
    pub backend: BackendSpec,
    #[serde(default)]
    pub iterations: Vec<IterationRecord>,
    pub current_model_snapshot: String,
}

impl Session {
    pub fn new(base_diagram_path: PathBuf, corpus_path: PathBuf, backend: BackendSpec, base: &ClassModel) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            base_diagram_path,
            corpus_path,
            backend,
            iterations: Vec::new(),
            current_model_snapshot: print(base),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, SessionError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| SessionError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_json(&text).map_err(|e| match e {
            SessionError::Format { message, .. } => SessionError::Format {
                path: path.to_owned(),
                message,
            },
            other => other,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, SessionError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| SessionError::Format {
            path: PathBuf::new(),
            message: e.to_string(),
        })?;
        let found = value.get("format_version").and_then(|v| v.as_u64()).unwrap_or(0) as u32;
        if found != FORMAT_VERSION {
            return Err(SessionError::Version { found });
        }
        serde_json::from_value(value).map_err(|e| SessionError::Format {
            path: PathBuf::new(),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("session serializes") + "\n"
    }

    /// Writes to a sibling temporary file and renames it over `path`, so a
    /// crash leaves either the old or the new file.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), SessionError> {
        let path = path.as_ref();
        let io = |source| SessionError::Io {
            path: path.to_owned(),
            source,
        };
        let mut tmp_name = path.file_name().unwrap_or_default().to_os_string();
        tmp_name.push(".tmp");
        let tmp = path.with_file_name(tmp_name);
        {
            let mut f = fs::File::create(&tmp).map_err(io)?;
            f.write_all(self.to_json().as_bytes()).map_err(io)?;
            f.sync_all().map_err(io)?;
        }
        fs::rename(&tmp, path).map_err(io)
    }

    pub fn snapshot_model(&self) -> Result<ClassModel, SessionError> {
        parse(&self.current_model_snapshot).map_err(SessionError::Snapshot)
    }

    /// Completed iterations only.
    pub fn completed(&self) -> impl Iterator<Item = &IterationRecord> {
        self.iterations.iter().filter(|it| !it.failed())
    }

    /// Rebuilds the model from `base` by merging every accepted or edited
    /// suggestion in record order.
    pub fn replay(&self, base: &ClassModel) -> Result<ClassModel, SessionError> {
        let mut model = base.clone();
        for it in self.completed() {
            for (s, d) in it.reviewed() {
                if let Some(kind) = d.effective(s) {
                    model = apply_one(&model, kind, Some(&it.use_case_id)).map_err(|source| SessionError::Replay {
                        use_case: it.use_case_id.clone(),
                        source,
                    })?;
                }
            }
        }
        Ok(model)
    }

    /// Checks that the stored snapshot equals the replayed model.
    pub fn check_integrity(&self, base: &ClassModel) -> Result<(), SessionError> {
        let replayed = self.replay(base)?;
        if replayed.canonical_equal(&self.snapshot_model()?) {
            Ok(())
        } else {
            Err(SessionError::Integrity)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ClassDef, Method};

    fn session() -> Session {
        let base = ClassModel::new().add_class(ClassDef::new("A")).unwrap();
        Session::new(
            "b.puml".into(),
            "uc".into(),
            BackendSpec::Rules { path: "r.json".into() },
            &base,
        )
    }

    #[test]
    fn json_round_trip() {
        let mut s = session();
        s.iterations.push(IterationRecord {
            use_case_id: "UC1".into(),
            suggestions: SuggestionSet::new(
                "rules",
                vec![Suggestion::new(
                    SuggestionKind::AddMethod {
                        class: "A".into(),
                        method: Method::new("f", vec![], "void"),
                    },
                    "UC1",
                )],
            ),
            decisions: vec![Decision::Edited {
                payload: SuggestionKind::AddMethod {
                    class: "A".into(),
                    method: Method::new("g", vec![], "void"),
                },
            }],
            validation_summary: None,
            error: None,
        });
        let back = Session::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn rejects_other_versions() {
        let text = session()
            .to_json()
            .replace("\"format_version\": 1", "\"format_version\": 9");
        assert!(matches!(
            Session::from_json(&text),
            Err(SessionError::Version { found: 9 })
        ));
    }

    #[test]
    fn save_is_atomic_rename() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.json");
        session().save(&p).unwrap();
        assert_eq!(Session::load(&p).unwrap(), session());
        assert!(!dir.path().join("s.json.tmp").exists());
    }
}
