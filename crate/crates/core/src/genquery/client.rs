//! Adapter boundary between the generator and a concrete endpoint.
//!
//! A backend turns one [`CompletionRequest`] into one completion string.
//! [`HttpBackend`] speaks two OpenAI-style JSON schemas:
//!
//! | schema       | request body                                   | completion read from          |
//! |--------------|------------------------------------------------|-------------------------------|
//! | `chat`       | `{model, messages:[{role:"user",content}], temperature, max_tokens?, top_p?}` | `choices[0].message.content` |
//! | `completion` | `{model, prompt, temperature, max_tokens?, top_p?}` | `choices[0].text`         |
//!
//! Another schema is added by implementing [`CompletionBackend`].

use super::GenError;
use serde_json::{json, Map, Value};
use std::str::FromStr;
use std::time::Duration;

#[derive(Debug, Clone, PartialEq)]
pub struct CompletionRequest {
    pub model: String,
    pub prompt: String,
    pub temperature: f64,
    pub max_tokens: Option<u32>,
    pub top_p: Option<f64>,
}

pub trait CompletionBackend: Send + Sync {
    /// One completion for one request. Retrying is the caller's job.
    fn complete(&self, request: &CompletionRequest) -> Result<String, GenError>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ApiSchema {
    #[default]
    Chat,
    Completion,
}

impl FromStr for ApiSchema {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "chat" => Ok(ApiSchema::Chat),
            "completion" | "completions" => Ok(ApiSchema::Completion),
            other => Err(GenError::InvalidConfig(format!("unknown api schema `{other}`"))),
        }
    }
}

impl ApiSchema {
    pub fn request_body(self, request: &CompletionRequest) -> Value {
        let mut body = Map::new();
        body.insert("model".into(), json!(request.model));
        match self {
            ApiSchema::Chat => {
                body.insert("messages".into(), json!([{"role": "user", "content": request.prompt}]));
            }
            ApiSchema::Completion => {
                body.insert("prompt".into(), json!(request.prompt));
            }
        }
        body.insert("temperature".into(), json!(request.temperature));
        if let Some(n) = request.max_tokens {
            body.insert("max_tokens".into(), json!(n));
        }
        if let Some(p) = request.top_p {
            body.insert("top_p".into(), json!(p));
        }
        Value::Object(body)
    }

    pub fn extract_completion(self, response: &Value) -> Result<String, GenError> {
        let choice = response.pointer("/choices/0");
        let text = match self {
            ApiSchema::Chat => choice.and_then(|c| c.pointer("/message/content")),
            ApiSchema::Completion => choice.and_then(|c| c.get("text")),
        };
        match text {
            Some(Value::String(s)) => Ok(s.clone()),
            Some(Value::Null) => Ok(String::new()),
            _ => Err(GenError::MalformedResponse(format!(
                "no completion text in response: {}",
                truncate(&response.to_string(), 200)
            ))),
        }
    }
}

fn truncate(s: &str, max: usize) -> &str {
    match s.char_indices().nth(max) {
        Some((i, _)) => &s[..i],
        None => s,
    }
}

/// Blocking HTTP backend.
pub struct HttpBackend {
    agent: ureq::Agent,
    endpoint_url: String,
    schema: ApiSchema,
    api_key: Option<String>,
}

impl HttpBackend {
    pub fn new(endpoint_url: impl Into<String>, schema: ApiSchema, timeout: Duration, api_key: Option<String>) -> Self {
        let agent = ureq::Agent::config_builder()
            .http_status_as_error(false)
            .timeout_global(Some(timeout))
            .build()
            .into();
        Self { agent, endpoint_url: endpoint_url.into(), schema, api_key }
    }

    /// Reads the key from `api_key_env` when one is named; an unset or
    /// empty variable is [`GenError::AuthMissing`].
    pub fn from_env(
        endpoint_url: impl Into<String>,
        schema: ApiSchema,
        timeout: Duration,
        api_key_env: Option<&str>,
    ) -> Result<Self, GenError> {
        let api_key = match api_key_env {
            Some(var) => match std::env::var(var) {
                Ok(key) if !key.is_empty() => Some(key),
                _ => return Err(GenError::AuthMissing(var.to_string())),
            },
            None => None,
        };
        Ok(Self::new(endpoint_url, schema, timeout, api_key))
    }
}

fn retry_after(value: Option<&str>) -> Option<Duration> {
    let secs: f64 = value?.trim().parse().ok()?;
    (secs.is_finite() && secs >= 0.0).then(|| Duration::from_secs_f64(secs))
}

impl CompletionBackend for HttpBackend {
    fn complete(&self, request: &CompletionRequest) -> Result<String, GenError> {
        let mut call = self.agent.post(&self.endpoint_url).header("Content-Type", "application/json");
        if let Some(key) = &self.api_key {
            call = call.header("Authorization", format!("Bearer {key}"));
        }
        let mut response = call
            .send_json(self.schema.request_body(request))
            .map_err(|e| GenError::EndpointUnreachable(e.to_string()))?;
        let status = response.status().as_u16();
        if status == 429 {
            let delay = retry_after(response.headers().get("retry-after").and_then(|v| v.to_str().ok()));
            return Err(GenError::RateLimited { retry_after: delay });
        }
        let body = response
            .body_mut()
            .read_to_string()
            .map_err(|e| GenError::EndpointUnreachable(e.to_string()))?;
        if !(200..300).contains(&status) {
            return Err(GenError::HttpStatus { status, body: truncate(&body, 200).to_string() });
        }
        let value: Value = serde_json::from_str(&body).map_err(|e| GenError::MalformedResponse(e.to_string()))?;
        self.schema.extract_completion(&value)
    }
}
