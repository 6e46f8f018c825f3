//! Traceability, relationship validation, gaps and lint for a finished
//! session.

use umlenrich::fixtures::{aux_types, corpus, initial_model, relationship_mapping, rules_mapping};
use umlenrich::merge::diff;
use umlenrich::model::type_registry;
use umlenrich::pipeline::{run_enrich, EnrichContext, UniformReviewer};
use umlenrich::report::{gaps, lint, relationship_validation, traceability};
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
    let model = session.snapshot_model()?;

    let matrix = traceability(&corpus, &session)?;
    println!("{}", matrix.to_text());
    println!("{} distinct use case / method pairs\n", matrix.method_pairs().len());

    println!(
        "{}",
        relationship_validation(&diff(&base, &model), &relationship_mapping()).to_text()
    );

    let registry = type_registry(&model, aux_types());
    println!("{}", gaps(&model, &corpus, &session, &registry).to_text());

    let bare = lint(&model, &type_registry(&model, Vec::<String>::new()));
    println!("without auxiliary types, unresolved: {:?}", bare.unresolved_types());
    println!("with them, lint is clean: {}", lint(&model, &registry).is_clean());
    Ok(())
}
