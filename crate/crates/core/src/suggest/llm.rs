//! Chat-completion backend.
//!
//! One request per use case: `POST {base_url}/chat/completions` with a
//! system and a user message. The reply must carry the full updated diagram
//! in its first fenced code block; suggestions are whatever that diagram
//! adds to the current one.

use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::prompt::{build_messages, PromptMessages};
use super::{extract_suggestions, SuggestError, SuggestionBackend, SuggestionSet};
use crate::model::ClassModel;
use crate::plantuml::parse;
use crate::usecase::UseCase;

/// Exponential backoff between attempts, doubling from `initial_ms` up to
/// `max_ms`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetryPolicy {
    pub initial_ms: u64,
    pub max_ms: u64,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self {
            initial_ms: 1_000,
            max_ms: 30_000,
        }
    }
}

impl RetryPolicy {
    /// Delay before retry number `retry` (0-based).
    pub fn delay(&self, retry: u32) -> Duration {
        let factor = 1u64.checked_shl(retry).unwrap_or(u64::MAX);
        Duration::from_millis(self.initial_ms.saturating_mul(factor).min(self.max_ms))
    }
}

fn default_timeout() -> f64 {
    60.0
}

fn default_retries() -> u32 {
    3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LlmConfig {
    pub base_url: String,
    pub model_name: String,
    /// Name of the environment variable holding the API key.
    pub api_key_env_var: String,
    #[serde(default = "default_timeout")]
    pub timeout_secs: f64,
    #[serde(default = "default_retries")]
    pub max_retries: u32,
    #[serde(default)]
    pub temperature: f64,
    #[serde(default)]
    pub retry: RetryPolicy,
}

impl LlmConfig {
    pub fn new(base_url: impl Into<String>, model_name: impl Into<String>, api_key_env_var: impl Into<String>) -> Self {
        Self {
            base_url: base_url.into(),
            model_name: model_name.into(),
            api_key_env_var: api_key_env_var.into(),
            timeout_secs: default_timeout(),
            max_retries: default_retries(),
            temperature: 0.0,
            retry: RetryPolicy::default(),
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.timeout_secs.is_nan() || self.timeout_secs <= 0.0 {
            return Err("timeout must be positive".into());
        }
        if self.base_url.is_empty() || self.model_name.is_empty() {
            return Err("base_url and model_name are required".into());
        }
        Ok(())
    }

    fn endpoint(&self) -> String {
        format!("{}/chat/completions", self.base_url.trim_end_matches('/'))
    }
}

/// JSON body of a chat-completion request.
pub fn request_body(cfg: &LlmConfig, messages: &PromptMessages) -> Value {
    json!({
        "model": cfg.model_name,
        "temperature": cfg.temperature,
        "messages": [
            { "role": "system", "content": messages.system },
            { "role": "user", "content": messages.user },
        ],
    })
}

enum Attempt {
    Done(String),
    Retry(String),
    Fatal(SuggestError),
}

fn attempt_once(agent: &ureq::Agent, url: &str, key: &str, body: &str) -> Attempt {
    let resp = agent
        .post(url)
        .header("Authorization", &format!("Bearer {key}"))
        .header("Content-Type", "application/json")
        .send(body);
    let mut resp = match resp {
        Ok(r) => r,
        Err(e) => return Attempt::Retry(e.to_string()),
    };
    let status = resp.status().as_u16();
    let text = match resp.body_mut().read_to_string() {
        Ok(t) => t,
        Err(e) => return Attempt::Retry(format!("reading body: {e}")),
    };
    match status {
        200..=299 => Attempt::Done(text),
        401 | 403 => Attempt::Fatal(SuggestError::AuthError(format!("HTTP {status}"))),
        408 | 429 | 500..=599 => Attempt::Retry(format!("HTTP {status}")),
        _ => Attempt::Fatal(SuggestError::TransportError {
            attempts: 1,
            message: format!("HTTP {status}: {}", text.chars().take(200).collect::<String>()),
        }),
    }
}

/// Sends one chat-completion request and returns `choices[0].message.content`.
pub fn chat_completion(cfg: &LlmConfig, messages: &PromptMessages) -> Result<String, SuggestError> {
    cfg.validate().map_err(|m| SuggestError::TransportError {
        attempts: 0,
        message: m,
    })?;
    let key = std::env::var(&cfg.api_key_env_var)
        .map_err(|_| SuggestError::AuthError(format!("environment variable `{}` is not set", cfg.api_key_env_var)))?;
    let agent: ureq::Agent = ureq::Agent::config_builder()
        .timeout_global(Some(Duration::from_secs_f64(cfg.timeout_secs)))
        .http_status_as_error(false)
        .build()
        .into();
    let url = cfg.endpoint();
    let body = request_body(cfg, messages).to_string();

    let mut attempts = 0;
    loop {
        attempts += 1;
        match attempt_once(&agent, &url, &key, &body) {
            Attempt::Done(text) => return reply_content(&text),
            Attempt::Fatal(SuggestError::TransportError { message, .. }) => {
                return Err(SuggestError::TransportError { attempts, message })
            }
            Attempt::Fatal(e) => return Err(e),
            Attempt::Retry(message) => {
                if attempts > cfg.max_retries {
                    return Err(SuggestError::TransportError { attempts, message });
                }
                thread::sleep(cfg.retry.delay(attempts - 1));
            }
        }
    }
}

fn reply_content(body: &str) -> Result<String, SuggestError> {
    let v: Value =
        serde_json::from_str(body).map_err(|e| SuggestError::MalformedReply(format!("response is not JSON: {e}")))?;
    v.pointer("/choices/0/message/content")
        .and_then(Value::as_str)
        .map(str::to_owned)
        .ok_or_else(|| SuggestError::MalformedReply("missing choices[0].message.content".into()))
}

/// Body of the first fenced code block in `reply`, if any.
pub fn first_fenced_block(reply: &str) -> Option<&str> {
    let open = reply.find("```")?;
    let after = &reply[open + 3..];
    // Skip the info string (e.g. `plantuml`).
    let body_start = after.find('\n')? + 1;
    let body = &after[body_start..];
    let close = body.find("```")?;
    Some(&body[..close])
}

/// Turns a raw reply into suggestions against `old`. Pure: replaying a
/// recorded reply yields the same set.
pub fn suggestions_from_reply(
    old: &ClassModel,
    reply: &str,
    source_uc: &str,
    backend_name: &str,
) -> Result<SuggestionSet, SuggestError> {
    let block = first_fenced_block(reply)
        .ok_or_else(|| SuggestError::MalformedReply("no fenced code block in reply".into()))?;
    let replied =
        parse(block).map_err(|e| SuggestError::MalformedReply(format!("fenced block does not parse: {e}")))?;
    let mut set = extract_suggestions(old, &replied, source_uc)?;
    set.backend_name = backend_name.to_owned();
    set.raw_reply = Some(reply.to_owned());
    Ok(set)
}

pub fn llm_suggest(cfg: &LlmConfig, model: &ClassModel, uc: &UseCase) -> Result<SuggestionSet, SuggestError> {
    let reply = chat_completion(cfg, &build_messages(model, uc))?;
    suggestions_from_reply(model, &reply, &uc.id, &backend_name(cfg))
}

fn backend_name(cfg: &LlmConfig) -> String {
    format!("llm:{}", cfg.model_name)
}

#[derive(Debug, Clone)]
pub struct LlmBackend {
    cfg: LlmConfig,
    name: String,
}

impl LlmBackend {
    pub fn new(cfg: LlmConfig) -> Self {
        let name = backend_name(&cfg);
        Self { cfg, name }
    }

    pub fn config(&self) -> &LlmConfig {
        &self.cfg
    }
}

impl SuggestionBackend for LlmBackend {
    fn name(&self) -> &str {
        &self.name
    }

    fn suggest(&self, model: &ClassModel, uc: &UseCase) -> Result<SuggestionSet, SuggestError> {
        llm_suggest(&self.cfg, model, uc)
    }
}
