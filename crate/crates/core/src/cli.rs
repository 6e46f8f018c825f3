//! Command-line front end. The `umlenrich` binary only forwards to [`run`].
//!
//! Exit codes: 0 success, 1 findings (lint findings, unmapped relationships,
//! unparseable diagram), 2 usage error, 3 backend or I/O failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::fixtures::parse_aux_types;
use crate::merge::{diff, summarize};
use crate::model::{type_registry, ClassModel, TypeRegistry};
use crate::pipeline::{reviewer_for, run_enrich, EnrichContext, Mode, PipelineError};
use crate::plantuml::{parse, print, print_canonical};
use crate::report::{
    gaps, lint, metrics, relationship_validation, traceability, FullReport, RelationshipMapping, ValidationReport,
};
use crate::session::{BackendSpec, Session};
use crate::suggest::{LlmBackend, LlmConfig, MappingConfig, RulesBackend, SuggestionBackend};
use crate::usecase::{load_corpus, Corpus};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDINGS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FAILURE: i32 = 3;

pub const DEFAULT_API_KEY_ENV: &str = "UMLENRICH_API_KEY";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendKind {
    Llm,
    Rules,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "umlenrich",
    version,
    about = "Enrich PlantUML class diagrams from use-case tables"
)]
pub struct Cli {
    /// Base PlantUML class diagram.
    #[arg(long, global = true)]
    pub diagram: Option<PathBuf>,
    /// Directory of use-case Markdown files.
    #[arg(long, global = true)]
    pub corpus: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "rules")]
    pub backend: BackendKind,
    /// Mapping file for the rules backend.
    #[arg(long, global = true)]
    pub rules_file: Option<PathBuf>,
    /// Session file; created by `enrich` when missing, resumed otherwise.
    #[arg(long, global = true)]
    pub session: Option<PathBuf>,
    /// Chat-completion base URL, e.g. http://localhost:8080/v1.
    #[arg(long, global = true)]
    pub base_url: Option<String>,
    #[arg(long, global = true)]
    pub model_name: Option<String>,
    /// Name of the environment variable that holds the API key.
    #[arg(long, global = true, default_value = DEFAULT_API_KEY_ENV)]
    pub api_key_env: String,
    #[arg(long, global = true, default_value_t = 60.0)]
    pub timeout: f64,
    #[arg(long, global = true, default_value_t = 3)]
    pub max_retries: u32,
    /// File listing non-class parameter types, one per line.
    #[arg(long, global = true)]
    pub aux_types: Option<PathBuf>,
    /// Relationship → use-case mapping used by `report`.
    #[arg(long, global = true)]
    pub relationship_map: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a diagram and print element counts.
    Parse {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Parse and re-print a diagram.
    Print {
        file: PathBuf,
        /// Sort classes, members and relationships.
        #[arg(long)]
        canonical: bool,
    },
    /// Structural difference between two diagrams, as JSON.
    Diff {
        old: PathBuf,
        new: PathBuf,
        /// Print every changed element instead of counts.
        #[arg(long)]
        full: bool,
    },
    /// Suggestions for one use case against `--diagram`, as JSON.
    Suggest {
        #[arg(long)]
        uc: String,
    },
    /// Run the review loop over every pending use case.
    Enrich {
        #[arg(long, value_enum)]
        mode: Mode,
        /// Stop after this many use cases.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Metrics and lint for `--diagram` or the session snapshot.
    Validate {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Metrics, traceability, relationship validation, gaps and lint for a
    /// session.
    Report {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Failure(String),
}

type CliResult = Result<i32, CliError>;

fn fail(e: impl std::fmt::Display) -> CliError {
    CliError::Failure(e.to_string())
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))
}

fn require<'a, T>(value: &'a Option<T>, flag: &str) -> Result<&'a T, CliError> {
    value
        .as_ref()
        .ok_or_else(|| CliError::Usage(format!("{flag} is required for this command")))
}

fn json(value: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(CliError::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(CliError::Failure(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_FAILURE
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let w = |out: &mut dyn Write, s: &str| out.write_all(s.as_bytes()).map_err(fail);
    match &cli.command {
        Command::Parse { file, format } => {
            let model = match parse(&read(file)?) {
                Ok(m) => m,
                Err(e) => {
                    let _ = writeln!(err, "{}: {e}", file.display());
                    return Ok(EXIT_FINDINGS);
                }
            };
            let m = metrics(&model);
            match format {
                Format::Json => w(out, &json(&m))?,
                Format::Text => w(
                    out,
                    &format!(
                        "{} classes, {} methods, {} relationships ({} associations, {} generalizations)\n",
                        m.class_count,
                        m.method_count,
                        m.relationship_count,
                        model.associations().count(),
                        model.generalizations().count()
                    ),
                )?,
            }
            Ok(EXIT_OK)
        }
        Command::Print { file, canonical } => {
            let model = load_diagram(file)?;
            w(
                out,
                &if *canonical {
                    print_canonical(&model)
                } else {
                    print(&model)
                },
            )?;
            Ok(EXIT_OK)
        }
        Command::Diff { old, new, full } => {
            let delta = diff(&load_diagram(old)?, &load_diagram(new)?);
            w(out, &if *full { json(&delta) } else { json(&summarize(&delta)) })?;
            Ok(EXIT_OK)
        }
        Command::Suggest { uc } => {
            let model = load_diagram(require(&cli.diagram, "--diagram")?)?;
            let corpus = load_corpus_at(require(&cli.corpus, "--corpus")?)?;
            let spec = backend_spec(cli)?;
            let backend = build_backend(&spec, &corpus)?;
            let case = corpus
                .get(uc)
                .ok_or_else(|| CliError::Usage(format!("use case `{uc}` is not in the corpus")))?;
            let set = backend.suggest(&model, case).map_err(fail)?;
            w(out, &json(&set))?;
            Ok(EXIT_OK)
        }
        Command::Enrich { mode, limit } => enrich(cli, *mode, *limit, out, err),
        Command::Validate { format } => {
            let model = match (&cli.diagram, &cli.session) {
                (Some(d), _) => load_diagram(d)?,
                (None, Some(s)) => {
                    let session = Session::load(s).map_err(fail)?;
                    let base = load_diagram(&session.base_diagram_path)?;
                    session.check_integrity(&base).map_err(fail)?;
                    session.snapshot_model().map_err(fail)?
                }
                (None, None) => return Err(CliError::Usage("--diagram or --session is required".into())),
            };
            let report = ValidationReport::new(&model, &registry(cli, &model)?);
            w(
                out,
                &match format {
                    Format::Json => json(&report),
                    Format::Text => report.to_text(),
                },
            )?;
            Ok(if report.has_findings() { EXIT_FINDINGS } else { EXIT_OK })
        }
        Command::Report { format } => {
            let session = Session::load(require(&cli.session, "--session")?).map_err(fail)?;
            let base = load_diagram(&session.base_diagram_path)?;
            let corpus = load_corpus_at(&session.corpus_path)?;
            let model = session.snapshot_model().map_err(fail)?;
            let mapping = match &cli.relationship_map {
                Some(p) => {
                    RelationshipMapping::from_json(&read(p)?).map_err(|e| fail(format!("{}: {e}", p.display())))?
                }
                None => RelationshipMapping::default(),
            };
            let reg = registry(cli, &model)?;
            let report = FullReport {
                initial: metrics(&base),
                enhanced: metrics(&model),
                traceability: traceability(&corpus, &session).map_err(fail)?,
                relationships: relationship_validation(&diff(&base, &model), &mapping),
                gaps: gaps(&model, &corpus, &session, &reg),
                lint: lint(&model, &reg),
            };
            w(
                out,
                &match format {
                    Format::Json => json(&report),
                    Format::Text => report.to_text(),
                },
            )?;
            Ok(if report.has_findings() { EXIT_FINDINGS } else { EXIT_OK })
        }
    }
}

fn load_diagram(path: &Path) -> Result<ClassModel, CliError> {
    parse(&read(path)?).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn load_corpus_at(path: &Path) -> Result<Corpus, CliError> {
    load_corpus(path).map_err(fail)
}

fn registry(cli: &Cli, model: &ClassModel) -> Result<TypeRegistry, CliError> {
    let aux = match &cli.aux_types {
        Some(p) => parse_aux_types(&read(p)?),
        None => Vec::new(),
    };
    Ok(type_registry(model, aux))
}

fn backend_spec(cli: &Cli) -> Result<BackendSpec, CliError> {
    Ok(match cli.backend {
        BackendKind::Rules => BackendSpec::Rules {
            path: require(&cli.rules_file, "--rules-file")?.clone(),
        },
        BackendKind::Llm => {
            let mut config = LlmConfig::new(
                require(&cli.base_url, "--base-url")?,
                require(&cli.model_name, "--model-name")?,
                &cli.api_key_env,
            );
            config.timeout_secs = cli.timeout;
            config.max_retries = cli.max_retries;
            config.validate().map_err(CliError::Usage)?;
            BackendSpec::Llm { config }
        }
    })
}

fn build_backend(spec: &BackendSpec, corpus: &Corpus) -> Result<Box<dyn SuggestionBackend>, CliError> {
    Ok(match spec {
        BackendSpec::Rules { path } => {
            let mapping = MappingConfig::load(path).map_err(fail)?;
            Box::new(RulesBackend::new(mapping.with_aliases(corpus.id_aliases.clone())))
        }
        BackendSpec::Llm { config } => Box::new(LlmBackend::new(config.clone())),
    })
}

fn enrich(cli: &Cli, mode: Mode, limit: Option<usize>, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let session = match &cli.session {
        Some(p) if p.exists() => Session::load(p).map_err(fail)?,
        _ => {
            let diagram = require(&cli.diagram, "--diagram")?;
            let corpus = require(&cli.corpus, "--corpus")?;
            let base = load_diagram(diagram)?;
            Session::new(diagram.clone(), corpus.clone(), backend_spec(cli)?, &base)
        }
    };
    let corpus = load_corpus_at(&session.corpus_path)?;
    let backend = build_backend(&session.backend, &corpus)?;
    let mut reviewer = reviewer_for(mode).map_err(|e| CliError::Usage(e.to_string()))?;
    let ctx = EnrichContext {
        corpus: &corpus,
        backend: backend.as_ref(),
        session_path: cli.session.clone(),
        limit,
    };
    let session = match run_enrich(session, &ctx, reviewer.as_mut()) {
        Ok(s) => s,
        Err(PipelineError::IterationFailed { use_case, source, .. }) => {
            return Err(fail(format!("{use_case}: {source} (earlier iterations were kept)")));
        }
        Err(e) => return Err(fail(e)),
    };
    let done = session.completed().count();
    let m = metrics(&session.snapshot_model().map_err(fail)?);
    let _ = writeln!(
        err,
        "{done}/{} use cases processed; {} classes, {} methods, {} relationships",
        corpus.len(),
        m.class_count,
        m.method_count,
        m.relationship_count
    );
    if cli.session.is_none() {
        out.write_all(session.current_model_snapshot.as_bytes()).map_err(fail)?;
    }
    Ok(EXIT_OK)
}
