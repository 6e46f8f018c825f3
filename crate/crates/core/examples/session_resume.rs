//! Checkpoint a run to disk, stop early, and resume it later.

use umlenrich::fixtures::{corpus, enhanced_model, initial_model, rules_mapping};
use umlenrich::pipeline::{run_enrich, EnrichContext, UniformReviewer};
use umlenrich::session::{BackendSpec, Session};
use umlenrich::suggest::RulesBackend;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::temp_dir().join(format!("umlenrich-example-{}.json", std::process::id()));
    let corpus = corpus();
    let backend = RulesBackend::new(rules_mapping());
    let mut ctx = EnrichContext {
        corpus: &corpus,
        backend: &backend,
        session_path: Some(path.clone()),
        limit: Some(8),
    };
    let base = initial_model();
    let fresh = Session::new(
        "initial.puml".into(),
        "usecases".into(),
        BackendSpec::Rules {
            path: "rules.json".into(),
        },
        &base,
    );
    run_enrich(fresh, &ctx, &mut UniformReviewer { accept: true })?;

    let saved = Session::load(&path)?;
    println!(
        "after the first run: {} of {} use cases",
        saved.completed().count(),
        corpus.len()
    );

    ctx.limit = None;
    let done = run_enrich(saved, &ctx, &mut UniformReviewer { accept: true })?;
    println!(
        "after resuming:      {} of {} use cases",
        done.completed().count(),
        corpus.len()
    );
    println!(
        "equals the enriched diagram: {}",
        done.snapshot_model()?.canonical_equal(&enhanced_model())
    );
    std::fs::remove_file(&path)?;
    Ok(())
}
