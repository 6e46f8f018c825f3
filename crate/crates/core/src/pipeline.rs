//! The enrichment loop: for each pending use case, suggest, review, merge,
//! validate and checkpoint.

use std::io::{self, BufRead, IsTerminal, Write};
use std::path::PathBuf;

use thiserror::Error;

use crate::merge::apply_one;
use crate::model::{ClassDef, ClassModel};
use crate::plantuml::{parse_attribute, parse_method, parse_relationship, print};
use crate::report::metrics;
use crate::session::{Decision, IterationRecord, Session, SessionError, ValidationSummary};
use crate::suggest::{SuggestError, Suggestion, SuggestionBackend, SuggestionKind, SuggestionSet};
use crate::usecase::Corpus;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Interactive,
    AcceptAll,
    RejectAll,
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("interactive review needs a terminal on stdin; use --mode accept-all or reject-all")]
    NonInteractiveEnvironment,
    #[error("review input ended before a decision was made")]
    InputClosed,
    #[error("review I/O: {0}")]
    Io(#[from] io::Error),
    #[error(transparent)]
    Session(#[from] SessionError),
    #[error("iteration {use_case} failed: {source}")]
    IterationFailed {
        use_case: String,
        #[source]
        source: Box<SuggestError>,
        /// The session as persisted, including the failed record.
        session: Box<Session>,
    },
}

/// Produces one decision per suggestion.
pub trait Reviewer {
    fn review(&mut self, suggestion: &Suggestion, model: &ClassModel) -> Result<Decision, PipelineError>;
}

/// Gives the same decision to everything.
#[derive(Debug, Clone, Copy)]
pub struct UniformReviewer {
    pub accept: bool,
}

impl Reviewer for UniformReviewer {
    fn review(&mut self, _: &Suggestion, _: &ClassModel) -> Result<Decision, PipelineError> {
        Ok(if self.accept {
            Decision::Accepted
        } else {
            Decision::Rejected
        })
    }
}

/// Reads `a`/`r`/`e` answers from `input`, writing prompts to `output`.
pub struct PromptReviewer<R, W> {
    pub input: R,
    pub output: W,
}

impl<R: BufRead, W: Write> PromptReviewer<R, W> {
    pub fn new(input: R, output: W) -> Self {
        Self { input, output }
    }
}

impl<R: BufRead, W: Write> Reviewer for PromptReviewer<R, W> {
    fn review(&mut self, suggestion: &Suggestion, model: &ClassModel) -> Result<Decision, PipelineError> {
        review_prompt(suggestion, model, &mut self.input, &mut self.output)
    }
}

/// Reviewer for `mode`. Interactive mode requires stdin to be a terminal.
pub fn reviewer_for(mode: Mode) -> Result<Box<dyn Reviewer>, PipelineError> {
    Ok(match mode {
        Mode::AcceptAll => Box::new(UniformReviewer { accept: true }),
        Mode::RejectAll => Box::new(UniformReviewer { accept: false }),
        Mode::Interactive => {
            if !io::stdin().is_terminal() {
                return Err(PipelineError::NonInteractiveEnvironment);
            }
            Box::new(PromptReviewer::new(io::stdin().lock(), io::stderr()))
        }
    })
}

fn read_line(input: &mut impl BufRead) -> Result<Option<String>, PipelineError> {
    let mut line = String::new();
    if input.read_line(&mut line)? == 0 {
        return Ok(None);
    }
    Ok(Some(line.trim().to_owned()))
}

/// Parses reviewer text into a payload of the same kind as `original`.
///
/// Methods and attributes are written as member lines, relationships as
/// PlantUML relationship lines, and classes as `Name` optionally followed by
/// `;`-separated attribute lines.
pub fn parse_edit(original: &SuggestionKind, text: &str) -> Result<SuggestionKind, String> {
    Ok(match original {
        SuggestionKind::AddMethod { class, .. } => SuggestionKind::AddMethod {
            class: class.clone(),
            method: parse_method(text)?,
        },
        SuggestionKind::AddAttribute { class, .. } => SuggestionKind::AddAttribute {
            class: class.clone(),
            attribute: parse_attribute(text)?,
        },
        SuggestionKind::AddRelationship { .. } => SuggestionKind::AddRelationship {
            relationship: parse_relationship(text)?,
        },
        SuggestionKind::AddClass { .. } => {
            let mut parts = text.split(';').map(str::trim);
            let name = parts.next().unwrap_or_default();
            if !crate::model::is_identifier(name) {
                return Err(format!("`{name}` is not a class name"));
            }
            let mut def = ClassDef::new(name);
            for a in parts.filter(|p| !p.is_empty()) {
                def.attributes.push(parse_attribute(a)?);
            }
            SuggestionKind::AddClass { class_def: def }
        }
    })
}

/// Shows one suggestion and reads a decision. An edit is re-validated
/// against `model`; invalid payloads are reported and asked for again, and an
/// empty payload returns to the a/r/e question.
pub fn review_prompt(
    suggestion: &Suggestion,
    model: &ClassModel,
    input: &mut impl BufRead,
    output: &mut impl Write,
) -> Result<Decision, PipelineError> {
    writeln!(output, "\n{suggestion}")?;
    if !suggestion.rationale.is_empty() {
        writeln!(output, "  rationale: {}", suggestion.rationale)?;
    }
    loop {
        write!(output, "[a]ccept, [r]eject or [e]dit? ")?;
        output.flush()?;
        let answer = read_line(input)?.ok_or(PipelineError::InputClosed)?;
        match answer.to_ascii_lowercase().as_str() {
            "a" | "accept" => return Ok(Decision::Accepted),
            "r" | "reject" => return Ok(Decision::Rejected),
            "e" | "edit" => loop {
                write!(output, "replacement (empty to go back): ")?;
                output.flush()?;
                let text = read_line(input)?.ok_or(PipelineError::InputClosed)?;
                if text.is_empty() {
                    break;
                }
                let checked =
                    parse_edit(&suggestion.kind, &text).and_then(|payload| match apply_one(model, &payload, None) {
                        Ok(_) => Ok(payload),
                        Err(e) => Err(e.to_string()),
                    });
                match checked {
                    Ok(payload) => return Ok(Decision::Edited { payload }),
                    Err(msg) => writeln!(output, "  invalid: {msg}")?,
                }
            },
            other => writeln!(output, "  unrecognised answer `{other}`")?,
        }
    }
}

/// Inputs that are not part of the session itself.
pub struct EnrichContext<'a> {
    pub corpus: &'a Corpus,
    pub backend: &'a dyn SuggestionBackend,
    /// Checkpoint target; the session is saved after every iteration.
    pub session_path: Option<PathBuf>,
    /// Process at most this many use cases in this call.
    pub limit: Option<usize>,
}

/// Use cases without a completed iteration, in ascending id order.
pub fn pending_use_cases<'a>(session: &Session, corpus: &'a Corpus) -> Vec<&'a str> {
    corpus
        .ids()
        .filter(|id| {
            !session
                .completed()
                .any(|it| corpus.resolve(&it.use_case_id) == Some(id))
        })
        .collect()
}

fn review_and_merge(
    model: &mut ClassModel,
    set: &SuggestionSet,
    uc: &str,
    reviewer: &mut dyn Reviewer,
) -> Result<(Vec<Decision>, Vec<String>), PipelineError> {
    let mut decisions = Vec::with_capacity(set.len());
    let mut notes = Vec::new();
    for s in set.iter() {
        let mut decision = reviewer.review(s, model)?;
        if let Some(kind) = decision.effective(s) {
            match apply_one(model, kind, Some(uc)) {
                Ok(next) => *model = next,
                Err(e) => {
                    notes.push(format!("not merged, recorded as rejected: {} ({e})", s.kind));
                    decision = Decision::Rejected;
                }
            }
        }
        decisions.push(decision);
    }
    Ok((decisions, notes))
}

/// Runs the loop over every pending use case. A backend failure is recorded
/// in the session, checkpointed, and returned as
/// [`PipelineError::IterationFailed`]; earlier iterations stay intact.
pub fn run_enrich(
    mut session: Session,
    ctx: &EnrichContext<'_>,
    reviewer: &mut dyn Reviewer,
) -> Result<Session, PipelineError> {
    session.iterations.retain(|it| !it.failed());
    let mut model = session.snapshot_model()?;
    let pending: Vec<String> = pending_use_cases(&session, ctx.corpus)
        .into_iter()
        .map(str::to_owned)
        .collect();

    for id in pending.iter().take(ctx.limit.unwrap_or(usize::MAX)) {
        let uc = ctx.corpus.get(id).expect("pending ids come from the corpus");
        let set = match ctx.backend.suggest(&model, uc) {
            Ok(set) => set,
            Err(source) => {
                session.iterations.push(IterationRecord {
                    use_case_id: id.clone(),
                    suggestions: SuggestionSet::empty(ctx.backend.name()),
                    decisions: Vec::new(),
                    validation_summary: None,
                    error: Some(source.to_string()),
                });
                if let Some(p) = &ctx.session_path {
                    session.save(p)?;
                }
                return Err(PipelineError::IterationFailed {
                    use_case: id.clone(),
                    source: Box::new(source),
                    session: Box::new(session),
                });
            }
        };
        let (decisions, notes) = review_and_merge(&mut model, &set, id, reviewer)?;
        session.iterations.push(IterationRecord {
            use_case_id: id.clone(),
            suggestions: set,
            decisions,
            validation_summary: Some(ValidationSummary {
                metrics: metrics(&model),
                notes,
            }),
            error: None,
        });
        session.current_model_snapshot = print(&model);
        if let Some(p) = &ctx.session_path {
            session.save(p)?;
        }
    }
    Ok(session)
}
