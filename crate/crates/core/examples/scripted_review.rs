//! Review suggestions through the a/r/e prompt, driven by a script instead
//! of a terminal.

use std::io::Cursor;

use umlenrich::fixtures::{corpus, initial_model, rules_mapping};
use umlenrich::pipeline::{run_enrich, EnrichContext, PromptReviewer};
use umlenrich::session::{BackendSpec, Decision, Session};
use umlenrich::suggest::RulesBackend;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = corpus();
    let backend = RulesBackend::new(rules_mapping());
    // UC1: accept. UC2: edit. UC3: reject, accept, accept.
    let script = "a\ne\n+listProduct(productID: string, quantity: integer): boolean\nr\na\na\n";
    let mut reviewer = PromptReviewer::new(Cursor::new(script), Vec::new());
    let ctx = EnrichContext {
        corpus: &corpus,
        backend: &backend,
        session_path: None,
        limit: Some(3),
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
    let session = run_enrich(session, &ctx, &mut reviewer)?;

    print!("{}", String::from_utf8(reviewer.output)?);
    println!("\n");
    for it in &session.iterations {
        for (s, d) in it.reviewed() {
            let verdict = match d {
                Decision::Accepted => "accepted".to_owned(),
                Decision::Rejected => "rejected".to_owned(),
                Decision::Edited { payload } => format!("edited to {payload}"),
            };
            println!("{:>4}  {}\n      -> {verdict}", it.use_case_id, s.kind);
        }
    }
    Ok(())
}
