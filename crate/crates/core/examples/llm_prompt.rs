//! Build the chat-completion request for one use case and turn a reply
//! into suggestions. No network traffic: the reply is canned.
//!
//! To talk to a real endpoint, use `LlmBackend` with an `LlmConfig`; the API
//! key is read from the environment variable the config names.

use umlenrich::fixtures::{corpus, initial_model};
use umlenrich::model::Method;
use umlenrich::plantuml::print;
use umlenrich::suggest::{build_messages, request_body, suggestions_from_reply, LlmConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = initial_model();
    let corpus = corpus();
    let uc = corpus.get("UC1").ok_or("missing UC1")?;

    let cfg = LlmConfig::new("http://localhost:8080/v1", "local-model", "UMLENRICH_API_KEY");
    let messages = build_messages(&model, uc);
    let body = request_body(&cfg, &messages);
    println!("system prompt: {} chars", messages.system.len());
    println!("user message:  {} chars", messages.user.len());
    println!(
        "request keys:  {:?}",
        body.as_object().map(|o| o.keys().collect::<Vec<_>>())
    );

    let replied = model.add_method(
        "User",
        Method::new(
            "registerUser",
            vec![umlenrich::model::Parameter::new("name", "string")],
            "boolean",
        ),
    )?;
    let reply = format!("Updated diagram:\n```plantuml\n{}```\n", print(&replied));
    let set = suggestions_from_reply(&model, &reply, &uc.id, "llm:local-model")?;
    for s in set.iter() {
        println!("{s}");
    }
    Ok(())
}
