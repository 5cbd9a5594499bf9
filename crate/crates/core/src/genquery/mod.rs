//! Natural-language query generation from Boolean queries.
//!
//! A [`PromptTemplate`] wraps the rendered Boolean query; a
//! [`QueryGenerator`] sends the prompt to a [`CompletionBackend`] once per
//! variant and persists the result in a [`QueryCache`] before returning it.
//!
//! Two modes are supported:
//!
//! - single: one generation at temperature 0.0001 (endpoints commonly
//!   reject exactly 0);
//! - multi: `num_generations` generations (10 by default) at temperature 1.
//!
//! Completions are used verbatim apart from trimming surrounding whitespace.

mod cache;
mod client;
mod prompt;

pub use cache::QueryCache;
pub use client::{ApiSchema, CompletionBackend, CompletionRequest, HttpBackend};
pub use prompt::{build_prompt, PromptTemplate, TemplateKind, PLACEHOLDER};

use crate::boolquery::parse_boolean;
use crate::corpusio::{CorpusError, GeneratedQuerySet, GenerationMode, Topic};
use std::time::Duration;
use thiserror::Error;

pub const SINGLE_TEMPERATURE: f64 = 0.0001;
pub const MULTI_TEMPERATURE: f64 = 1.0;
pub const DEFAULT_MULTI_GENERATIONS: usize = 10;

#[derive(Debug, Error)]
pub enum GenError {
    #[error("prompt template has no `{{boolean}}` placeholder")]
    MissingPlaceholder,
    #[error("prompt template has more than one `{{boolean}}` placeholder")]
    DuplicatePlaceholder,
    #[error("invalid generation config: {0}")]
    InvalidConfig(String),
    #[error("endpoint unreachable: {0}")]
    EndpointUnreachable(String),
    #[error("API key variable `{0}` is not set")]
    AuthMissing(String),
    #[error("rate limited (retry after {retry_after:?})")]
    RateLimited { retry_after: Option<Duration> },
    #[error("endpoint returned HTTP {status}: {body}")]
    HttpStatus { status: u16, body: String },
    #[error("malformed endpoint response: {0}")]
    MalformedResponse(String),
    #[error("empty completion after {attempts} attempts")]
    EmptyCompletion { attempts: u32 },
    #[error(transparent)]
    Cache(#[from] CorpusError),
}

impl GenError {
    /// Transient failures worth another attempt.
    pub fn is_retryable(&self) -> bool {
        match self {
            GenError::EndpointUnreachable(_) | GenError::RateLimited { .. } | GenError::EmptyCompletion { .. } => true,
            GenError::HttpStatus { status, .. } => *status >= 500,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationConfig {
    pub endpoint_url: String,
    pub model_name: String,
    /// Cache key component; defaults to the model name.
    pub model_tag: String,
    pub mode: GenerationMode,
    pub temperature: f64,
    pub num_generations: usize,
    /// Extra attempts per variant after the first one.
    pub max_retries: u32,
    pub timeout: Duration,
    pub schema: ApiSchema,
    pub max_tokens: Option<u32>,
    pub top_p: Option<f64>,
    /// Environment variable holding the bearer token; `None` sends no key.
    pub api_key_env: Option<String>,
    /// First backoff delay; doubles on every retry.
    pub retry_base: Duration,
    pub max_backoff: Duration,
}

impl GenerationConfig {
    fn base(endpoint_url: &str, model_name: &str, mode: GenerationMode, temperature: f64, n: usize) -> Self {
        Self {
            endpoint_url: endpoint_url.to_string(),
            model_name: model_name.to_string(),
            model_tag: model_name.to_string(),
            mode,
            temperature,
            num_generations: n,
            max_retries: 3,
            timeout: Duration::from_secs(60),
            schema: ApiSchema::Chat,
            max_tokens: Some(256),
            top_p: None,
            api_key_env: Some("OPENAI_API_KEY".to_string()),
            retry_base: Duration::from_secs(1),
            max_backoff: Duration::from_secs(60),
        }
    }

    pub fn single(endpoint_url: &str, model_name: &str) -> Self {
        Self::base(endpoint_url, model_name, GenerationMode::Single, SINGLE_TEMPERATURE, 1)
    }

    pub fn multi(endpoint_url: &str, model_name: &str) -> Self {
        Self::base(endpoint_url, model_name, GenerationMode::Multi, MULTI_TEMPERATURE, DEFAULT_MULTI_GENERATIONS)
    }

    pub fn for_mode(mode: GenerationMode, endpoint_url: &str, model_name: &str) -> Self {
        match mode {
            GenerationMode::Single => Self::single(endpoint_url, model_name),
            GenerationMode::Multi => Self::multi(endpoint_url, model_name),
        }
    }

    pub fn validate(&self) -> Result<(), GenError> {
        let bad = |msg: String| Err(GenError::InvalidConfig(msg));
        if self.endpoint_url.trim().is_empty() {
            return bad("endpoint_url is empty".into());
        }
        if self.model_name.trim().is_empty() {
            return bad("model_name is empty".into());
        }
        if self.model_tag.is_empty() || self.model_tag.chars().any(char::is_whitespace) {
            return bad(format!("model_tag `{}` must be non-empty and free of whitespace", self.model_tag));
        }
        if !(0.0..=1.0).contains(&self.temperature) {
            return bad(format!("temperature {} outside [0, 1]", self.temperature));
        }
        if self.num_generations == 0 {
            return bad("num_generations must be at least 1".into());
        }
        match self.mode {
            GenerationMode::Single if self.temperature != SINGLE_TEMPERATURE || self.num_generations != 1 => {
                return bad(format!(
                    "single mode needs temperature {SINGLE_TEMPERATURE} and 1 generation, got {} and {}",
                    self.temperature, self.num_generations
                ));
            }
            GenerationMode::Multi if self.temperature != MULTI_TEMPERATURE => {
                return bad(format!("multi mode needs temperature {MULTI_TEMPERATURE}, got {}", self.temperature));
            }
            _ => {}
        }
        if let Some(p) = self.top_p {
            if !(p > 0.0 && p <= 1.0) {
                return bad(format!("top_p {p} outside (0, 1]"));
            }
        }
        if self.max_tokens == Some(0) {
            return bad("max_tokens must be positive".into());
        }
        Ok(())
    }

    fn request(&self, prompt: &str) -> CompletionRequest {
        CompletionRequest {
            model: self.model_name.clone(),
            prompt: prompt.to_string(),
            temperature: self.temperature,
            max_tokens: self.max_tokens,
            top_p: self.top_p,
        }
    }

    fn backoff(&self, retry: u32) -> Duration {
        self.retry_base
            .checked_mul(1u32.checked_shl(retry).unwrap_or(u32::MAX))
            .unwrap_or(self.max_backoff)
            .min(self.max_backoff)
    }
}

/// Result of [`QueryGenerator::load_or_generate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Loaded {
    pub set: GeneratedQuerySet,
    /// `true` when served from the cache without contacting the endpoint.
    pub cached: bool,
}

pub struct QueryGenerator<B> {
    config: GenerationConfig,
    backend: B,
    cache: QueryCache,
}

impl<B: CompletionBackend> QueryGenerator<B> {
    pub fn new(config: GenerationConfig, backend: B, cache: QueryCache) -> Result<Self, GenError> {
        config.validate()?;
        Ok(Self { config, backend, cache })
    }

    pub fn config(&self) -> &GenerationConfig {
        &self.config
    }

    pub fn cache(&self) -> &QueryCache {
        &self.cache
    }

    fn complete_with_retry(&self, request: &CompletionRequest) -> Result<String, GenError> {
        let attempts = self.config.max_retries.saturating_add(1);
        let mut last = GenError::EmptyCompletion { attempts: 0 };
        for attempt in 0..attempts {
            let delay = match self.backend.complete(request) {
                Ok(text) => {
                    let text = text.trim();
                    if !text.is_empty() {
                        return Ok(text.to_string());
                    }
                    last = GenError::EmptyCompletion { attempts: attempt + 1 };
                    self.config.backoff(attempt)
                }
                Err(e) if e.is_retryable() => {
                    let delay = match &e {
                        GenError::RateLimited { retry_after: Some(d) } => (*d).min(self.config.max_backoff),
                        _ => self.config.backoff(attempt),
                    };
                    last = e;
                    delay
                }
                Err(e) => return Err(e),
            };
            if attempt + 1 < attempts {
                log::warn!("attempt {} of {attempts} failed: {last}; retrying in {delay:?}", attempt + 1);
                std::thread::sleep(delay);
            }
        }
        Err(last)
    }

    /// Requests `num_generations` completions for `prompt` (one request
    /// each), stores them under `topic_id` and returns them.
    pub fn generate(&self, topic_id: &str, prompt: &str) -> Result<GeneratedQuerySet, GenError> {
        let request = self.config.request(prompt);
        let queries = (0..self.config.num_generations)
            .map(|_| self.complete_with_retry(&request))
            .collect::<Result<Vec<_>, _>>()?;
        let set = GeneratedQuerySet {
            topic_id: topic_id.to_string(),
            model_tag: self.config.model_tag.clone(),
            mode: self.config.mode,
            queries,
        };
        self.cache.store(&set)?;
        Ok(set)
    }

    /// Cached set for the topic if present, otherwise a fresh generation.
    pub fn load_or_generate(&self, topic: &Topic, template: &PromptTemplate) -> Result<Loaded, GenError> {
        if let Some(set) = self.cache.lookup(&topic.topic_id, &self.config.model_tag, self.config.mode)? {
            return Ok(Loaded { set, cached: true });
        }
        let query = parse_boolean(&topic.boolean_query_raw).map_err(|source| CorpusError::InvalidBoolean {
            topic: topic.topic_id.clone(),
            source,
        })?;
        let set = self.generate(&topic.topic_id, &build_prompt(template, &query))?;
        Ok(Loaded { set, cached: false })
    }
}
