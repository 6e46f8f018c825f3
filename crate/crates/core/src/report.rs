//! Validation of an enriched model against the corpus: metrics,
//! traceability, relationship validation, gaps and lint.
//!
//! Every report is serde-serializable and has an aligned plain-text form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::merge::ModelDelta;
use crate::model::{ClassModel, Relationship, TypeRegistry};
use crate::session::{Decision, Session};
use crate::suggest::SuggestionKind;
use crate::usecase::{id_number, Corpus};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportError {
    #[error("use case `{0}` is not in the corpus, even after alias resolution")]
    UnknownUseCase(String),
}

/// Left-aligned text table with a dashed rule under the header.
pub fn text_table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i + 1 == cells.len() {
                s.push_str(cell);
            } else {
                let pad = w - cell.chars().count();
                s.push_str(cell);
                s.push_str(&" ".repeat(pad + 2));
            }
        }
        s.trim_end().to_owned() + "\n"
    };
    let mut out = line(headers.to_vec());
    out += &line(
        widths
            .iter()
            .map(|w| "-".repeat(*w))
            .collect::<Vec<_>>()
            .iter()
            .map(String::as_str)
            .collect(),
    );
    for row in rows {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}

// ---------------------------------------------------------------- metrics

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metrics {
    pub class_count: usize,
    pub method_count: usize,
    /// Associations plus generalizations.
    pub relationship_count: usize,
    pub dynamic_behaviors_captured: bool,
}

pub fn metrics(model: &ClassModel) -> Metrics {
    let method_count = model.method_count();
    Metrics {
        class_count: model.classes.len(),
        method_count,
        relationship_count: model.relationships.len(),
        dynamic_behaviors_captured: method_count > 0,
    }
}

impl Metrics {
    pub fn to_text(&self) -> String {
        let yes_no = if self.dynamic_behaviors_captured { "yes" } else { "no" };
        text_table(
            &["metric", "value"],
            &[
                vec!["classes".into(), self.class_count.to_string()],
                vec!["methods".into(), self.method_count.to_string()],
                vec!["relationships".into(), self.relationship_count.to_string()],
                vec!["dynamic behaviors captured".into(), yes_no.into()],
            ],
        )
    }
}

// ----------------------------------------------------------- traceability

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowDecision {
    Accepted,
    Rejected,
    /// Accepted after a human edit; the signature is the edited one.
    Edited,
    Pending,
}

impl RowDecision {
    pub fn is_accepted(self) -> bool {
        matches!(self, RowDecision::Accepted | RowDecision::Edited)
    }

    fn as_str(self) -> &'static str {
        match self {
            RowDecision::Accepted => "accepted",
            RowDecision::Rejected => "rejected",
            RowDecision::Edited => "edited",
            RowDecision::Pending => "pending",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRow {
    pub use_case_id: String,
    pub class: String,
    pub signature: String,
    pub decision: RowDecision,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceabilityMatrix {
    pub rows: Vec<TraceRow>,
}

impl TraceabilityMatrix {
    pub fn accepted(&self) -> impl Iterator<Item = &TraceRow> {
        self.rows.iter().filter(|r| r.decision.is_accepted())
    }

    /// Distinct (use case, method signature) pairs over accepted rows. A
    /// method placed on several classes for one use case counts once.
    pub fn method_pairs(&self) -> BTreeSet<(String, String)> {
        self.accepted()
            .map(|r| (r.use_case_id.clone(), r.signature.clone()))
            .collect()
    }

    pub fn to_text(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.use_case_id.clone(),
                    r.class.clone(),
                    r.signature.clone(),
                    r.decision.as_str().into(),
                ]
            })
            .collect();
        text_table(&["use case", "class", "method", "decision"], &rows)
    }
}

/// One row per reviewed `AddMethod` suggestion, keyed to canonical use-case
/// ids.
pub fn traceability(corpus: &Corpus, session: &Session) -> Result<TraceabilityMatrix, ReportError> {
    let mut rows = Vec::new();
    for it in &session.iterations {
        let uc = corpus
            .resolve(&it.use_case_id)
            .ok_or_else(|| ReportError::UnknownUseCase(it.use_case_id.clone()))?;
        for (i, s) in it.suggestions.iter().enumerate() {
            let SuggestionKind::AddMethod { class, method } = &s.kind else {
                continue;
            };
            let (class, method, decision) = match it.decisions.get(i) {
                None => (class, method, RowDecision::Pending),
                Some(Decision::Accepted) => (class, method, RowDecision::Accepted),
                Some(Decision::Rejected) => (class, method, RowDecision::Rejected),
                Some(Decision::Edited {
                    payload: SuggestionKind::AddMethod { class, method },
                }) => (class, method, RowDecision::Edited),
                Some(Decision::Edited { .. }) => (class, method, RowDecision::Edited),
            };
            rows.push(TraceRow {
                use_case_id: uc.to_owned(),
                class: class.clone(),
                signature: method.to_string(),
                decision,
            });
        }
    }
    Ok(TraceabilityMatrix { rows })
}

// --------------------------------------------------- relationship validation

/// One row of the relationship → use-case mapping file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationshipRule {
    /// Unordered pair of class names.
    pub endpoints: [String; 2],
    /// When set, only associations with this label match.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default)]
    pub description: String,
    pub use_cases: Vec<String>,
}

impl RelationshipRule {
    fn matches(&self, r: &Relationship) -> bool {
        let (a, b) = r.endpoints();
        let [x, y] = &self.endpoints;
        let ends = (a == x && b == y) || (a == y && b == x);
        ends && self.label.as_deref().is_none_or(|l| r.label() == Some(l))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RelationshipMapping {
    pub rules: Vec<RelationshipRule>,
}

impl RelationshipMapping {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationshipRow {
    pub relationship: String,
    pub use_cases: Vec<String>,
    /// No mapping rule covers this addition.
    pub flagged: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationshipReport {
    pub rows: Vec<RelationshipRow>,
}

impl RelationshipReport {
    pub fn flagged_count(&self) -> usize {
        self.rows.iter().filter(|r| r.flagged).count()
    }

    pub fn to_text(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                let ucs = if r.flagged {
                    "UNMAPPED".into()
                } else {
                    r.use_cases.join(", ")
                };
                vec![r.relationship.clone(), ucs]
            })
            .collect();
        text_table(&["added relationship", "use cases"], &rows)
    }
}

fn sort_ids(ids: &mut Vec<String>) {
    ids.sort_by_key(|id| (id_number(id).unwrap_or(u32::MAX), id.clone()));
    ids.dedup();
}

pub fn relationship_validation(delta: &ModelDelta, mapping: &RelationshipMapping) -> RelationshipReport {
    let rows = delta
        .added_relationships
        .iter()
        .map(|r| {
            let mut use_cases: Vec<String> = mapping
                .rules
                .iter()
                .filter(|rule| rule.matches(r))
                .flat_map(|rule| rule.use_cases.iter().cloned())
                .collect();
            sort_ids(&mut use_cases);
            RelationshipRow {
                relationship: r.to_string(),
                flagged: use_cases.is_empty(),
                use_cases,
            }
        })
        .collect();
    RelationshipReport { rows }
}

// ------------------------------------------------------------------- gaps

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UncoveredUseCase {
    pub id: String,
    pub note: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapReport {
    pub methodless_classes: Vec<String>,
    pub uncovered_use_cases: Vec<UncoveredUseCase>,
    pub unresolved_parameter_types: Vec<String>,
}

impl GapReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "Classes without methods ({}):", self.methodless_classes.len());
        for c in &self.methodless_classes {
            let _ = writeln!(out, "  {c}");
        }
        let _ = writeln!(
            out,
            "\nUse cases without accepted suggestions ({}):",
            self.uncovered_use_cases.len()
        );
        let rows: Vec<Vec<String>> = self
            .uncovered_use_cases
            .iter()
            .map(|u| vec![u.id.clone(), u.note.clone()])
            .collect();
        for l in text_table(&["id", "note"], &rows).lines() {
            let _ = writeln!(out, "  {l}");
        }
        let _ = writeln!(
            out,
            "\nUnresolved parameter types ({}):",
            self.unresolved_parameter_types.len()
        );
        for t in &self.unresolved_parameter_types {
            let _ = writeln!(out, "  {t}");
        }
        out
    }
}

fn unresolved_types(model: &ClassModel, registry: &TypeRegistry) -> BTreeSet<String> {
    model
        .classes
        .iter()
        .flat_map(|c| &c.methods)
        .flat_map(|m| m.params.iter().map(|p| &p.type_name).chain([&m.return_type]))
        .filter(|t| !registry.is_resolvable(t))
        .cloned()
        .collect()
}

pub fn gaps(model: &ClassModel, corpus: &Corpus, session: &Session, registry: &TypeRegistry) -> GapReport {
    let methodless_classes = model
        .classes
        .iter()
        .filter(|c| c.methods.is_empty())
        .map(|c| c.name.clone())
        .collect();

    let mut processed: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for it in &session.iterations {
        if it.error.is_some() {
            continue;
        }
        let Some(id) = corpus.resolve(&it.use_case_id) else {
            continue;
        };
        let e = processed.entry(id).or_default();
        e.0 += it.suggestions.len();
        e.1 += it.decisions.iter().filter(|d| d.is_accepted()).count();
    }
    let uncovered_use_cases = corpus
        .cases
        .iter()
        .filter_map(|uc| {
            let note = match processed.get(uc.id.as_str()) {
                None => "not yet processed".to_owned(),
                Some((_, accepted)) if *accepted > 0 => return None,
                Some((0, _)) => format!("no suggestions ({})", uc.title),
                Some((n, _)) => format!("{n} suggestion(s) rejected ({})", uc.title),
            };
            Some(UncoveredUseCase {
                id: uc.id.clone(),
                note,
            })
        })
        .collect();

    GapReport {
        methodless_classes,
        uncovered_use_cases,
        unresolved_parameter_types: unresolved_types(model, registry).into_iter().collect(),
    }
}

// ------------------------------------------------------------------- lint

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LintKind {
    MethodNotLowerCamel,
    ClassNotUpperCamel,
    UnresolvedType,
    DuplicateAssociation,
}

impl LintKind {
    pub fn is_naming(self) -> bool {
        matches!(self, LintKind::MethodNotLowerCamel | LintKind::ClassNotUpperCamel)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LintFinding {
    pub kind: LintKind,
    /// Class, `Class.method` or relationship text.
    pub subject: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LintReport {
    pub findings: Vec<LintFinding>,
}

impl LintReport {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn count(&self, kind: LintKind) -> usize {
        self.findings.iter().filter(|f| f.kind == kind).count()
    }

    pub fn naming_count(&self) -> usize {
        self.findings.iter().filter(|f| f.kind.is_naming()).count()
    }

    /// Distinct type names reported as unresolved.
    pub fn unresolved_types(&self) -> BTreeSet<&str> {
        self.findings
            .iter()
            .filter(|f| f.kind == LintKind::UnresolvedType)
            .filter_map(|f| f.message.split('`').nth(1))
            .collect()
    }

    pub fn to_text(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .findings
            .iter()
            .map(|f| {
                let kind = serde_json::to_value(f.kind)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_owned));
                vec![kind.unwrap_or_default(), f.subject.clone(), f.message.clone()]
            })
            .collect();
        text_table(&["finding", "subject", "detail"], &rows)
    }
}

pub fn is_lower_camel(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_lowercase()) && chars.all(|c| c.is_ascii_alphanumeric())
}

pub fn is_upper_camel(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_uppercase()) && chars.all(|c| c.is_ascii_alphanumeric())
}

pub fn lint(model: &ClassModel, registry: &TypeRegistry) -> LintReport {
    let mut findings = Vec::new();
    for c in &model.classes {
        if !is_upper_camel(&c.name) {
            findings.push(LintFinding {
                kind: LintKind::ClassNotUpperCamel,
                subject: c.name.clone(),
                message: format!("class name `{}` is not UpperCamelCase", c.name),
            });
        }
        for m in &c.methods {
            let subject = format!("{}.{}", c.name, m.name);
            if !is_lower_camel(&m.name) {
                findings.push(LintFinding {
                    kind: LintKind::MethodNotLowerCamel,
                    subject: subject.clone(),
                    message: format!("method name `{}` is not lowerCamelCase", m.name),
                });
            }
            let types = m.params.iter().map(|p| &p.type_name).chain([&m.return_type]);
            let mut seen = BTreeSet::new();
            for t in types {
                if !registry.is_resolvable(t) && seen.insert(t) {
                    findings.push(LintFinding {
                        kind: LintKind::UnresolvedType,
                        subject: subject.clone(),
                        message: format!("type `{t}` is neither a primitive, a class nor a declared auxiliary"),
                    });
                }
            }
        }
    }

    let mut seen: BTreeMap<(&str, &str, &str), usize> = BTreeMap::new();
    for r in model.associations() {
        let (a, b) = r.endpoints();
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let n = seen.entry((a, b, r.label().unwrap_or(""))).or_default();
        *n += 1;
        if *n == 2 {
            findings.push(LintFinding {
                kind: LintKind::DuplicateAssociation,
                subject: r.to_string(),
                message: format!("more than one association between {a} and {b} with the same label"),
            });
        }
    }
    LintReport { findings }
}

// -------------------------------------------------------------- bundles

/// What `validate` prints: metrics plus lint findings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub metrics: Metrics,
    pub lint: LintReport,
}

impl ValidationReport {
    pub fn new(model: &ClassModel, registry: &TypeRegistry) -> Self {
        Self {
            metrics: metrics(model),
            lint: lint(model, registry),
        }
    }

    pub fn has_findings(&self) -> bool {
        !self.lint.is_clean()
    }

    pub fn to_text(&self) -> String {
        format!("{}\n{}", self.metrics.to_text(), self.lint.to_text())
    }
}

/// Every evaluation artifact for a session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullReport {
    pub initial: Metrics,
    pub enhanced: Metrics,
    pub traceability: TraceabilityMatrix,
    pub relationships: RelationshipReport,
    pub gaps: GapReport,
    pub lint: LintReport,
}

impl FullReport {
    pub fn has_findings(&self) -> bool {
        !self.lint.is_clean() || self.relationships.flagged_count() > 0
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let pairs = [
            ("Initial diagram", self.initial.to_text()),
            ("Enhanced diagram", self.enhanced.to_text()),
            ("Traceability", self.traceability.to_text()),
            ("Relationship validation", self.relationships.to_text()),
            ("Gaps", self.gaps.to_text()),
            ("Lint", self.lint.to_text()),
        ];
        for (title, body) in pairs {
            let _ = writeln!(out, "== {title} ==\n{body}");
        }
        out
    }
}
