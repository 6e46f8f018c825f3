//! Prompt construction for the chat-completion backend.

use crate::model::ClassModel;
use crate::plantuml::print;
use crate::usecase::{render_usecase, UseCase};

/// System message sent with every enrichment request.
pub const ENRICHMENT_PROMPT: &str = "You are assigned the task of enriching the dynamics of a given PlantUML class diagram based on detailed use cases presented in table format. Your role involves deeply analyzing each use case table to determine the interactions and behaviors necessary within the system. Utilizing the provided class diagram, identify the involved classes and define the methods or operations required for each class to support the described functionality. Generate PlantUML code to update the class diagram, ensuring adherence to syntax and UML best practices. Maintain consistency in property names and utilize only existing attributes in the class diagram for method definitions. As new use case tables are provided, dynamically update the class diagram to accurately represent the system\u{2019}s behavior. Validate the completeness and accuracy of the updated diagram after each iteration. Your process must follow guidelines for thorough analysis, method incorporation, and validation, ensuring consistency throughout. Additionally, preserve all added methods in each iteration and maintain consistency in naming conventions, formatting, and UML notation.";

/// Appended to the user message; replies are parsed against this contract.
pub const REPLY_INSTRUCTION: &str = "Reply with exactly one fenced ```plantuml code block that contains the FULL updated class diagram from @startuml to @enduml. Keep every existing class, attribute, method and relationship exactly as it is; only add to the diagram.";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptMessages {
    pub system: String,
    pub user: String,
}

pub fn build_messages(model: &ClassModel, uc: &UseCase) -> PromptMessages {
    let user = format!(
        "Current class diagram:\n\n```plantuml\n{}```\n\nUse case table:\n\n{}\n{}\n",
        print(model),
        render_usecase(uc),
        REPLY_INSTRUCTION
    );
    PromptMessages {
        system: ENRICHMENT_PROMPT.to_owned(),
        user,
    }
}

/// The full prompt as one text: system message, diagram, use case, reply
/// instruction.
pub fn build_prompt(model: &ClassModel, uc: &UseCase) -> String {
    let m = build_messages(model, uc);
    format!("{}\n\n{}", m.system, m.user)
}
