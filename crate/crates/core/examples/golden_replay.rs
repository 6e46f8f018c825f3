//! Run the deterministic rules backend over the whole corpus, accepting
//! every suggestion, and compare the result with the published diagram.

use umlenrich::fixtures::{corpus, enhanced_model, initial_model, rules_mapping};
use umlenrich::pipeline::{run_enrich, EnrichContext, UniformReviewer};
use umlenrich::session::{BackendSpec, Session};
use umlenrich::suggest::RulesBackend;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = corpus();
    let backend = RulesBackend::new(rules_mapping());
    let ctx = EnrichContext {
        corpus: &corpus,
        backend: &backend,
        session_path: None,
        limit: None,
    };
    let base = initial_model();
    let session = Session::new(
        "initial.puml".into(),
        "usecases".into(),
        BackendSpec::Rules {
            path: "rules.json".into(),
        },
        &base,
    );
    let session = run_enrich(session, &ctx, &mut UniformReviewer { accept: true })?;

    for it in &session.iterations {
        let m = &it.validation_summary.as_ref().ok_or("missing summary")?.metrics;
        println!(
            "{:>5}  +{} suggestion(s)  -> {} methods",
            it.use_case_id,
            it.suggestions.len(),
            m.method_count
        );
    }
    let model = session.snapshot_model()?;
    println!(
        "matches the enriched diagram: {}",
        model.canonical_equal(&enhanced_model())
    );
    session.check_integrity(&base)?;
    Ok(())
}
