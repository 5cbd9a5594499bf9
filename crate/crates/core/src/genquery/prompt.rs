use super::GenError;
use crate::boolquery::{render, QueryNode};

pub const PLACEHOLDER: &str = "{boolean}";

const CHATGPT_QUERY: &str = "Construct a high-quality natural language query for the boolean query of a systematic review: {boolean}.\n\nThe effectiveness of the query will be determined by its capability to retrieve relevant documents when searching on a semantic-based search engine.";

const ALPACA_QUERY: &str = "Below is an instruction that describes a task, paired with an input that provides further context. Write a response that appropriately completes the request.\n\n### Instruction:\nConstruct a natural language query using the systematic review boolean query provided.\n\n### Input:\n{boolean}\n\n### Response:\n";

const TITLE_GEN: &str = "Construct a title for a systematic review that uses the following boolean query: {boolean}.\n\nReply with the title only.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TemplateKind {
    ChatGptQuery,
    AlpacaQuery,
    TitleGen,
    Custom,
}

/// Prompt text with exactly one `{boolean}` placeholder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptTemplate {
    kind: TemplateKind,
    text: String,
}

impl PromptTemplate {
    /// Chat-model query prompt.
    pub fn chatgpt_query() -> Self {
        Self { kind: TemplateKind::ChatGptQuery, text: CHATGPT_QUERY.to_string() }
    }

    /// Instruction/Input/Response scaffold for Alpaca-style models.
    pub fn alpaca_query() -> Self {
        Self { kind: TemplateKind::AlpacaQuery, text: ALPACA_QUERY.to_string() }
    }

    /// Asks for a review title instead of a query.
    pub fn title_gen() -> Self {
        Self { kind: TemplateKind::TitleGen, text: TITLE_GEN.to_string() }
    }

    pub fn custom(text: impl Into<String>) -> Result<Self, GenError> {
        let text = text.into();
        match text.matches(PLACEHOLDER).count() {
            0 => Err(GenError::MissingPlaceholder),
            1 => Ok(Self { kind: TemplateKind::Custom, text }),
            _ => Err(GenError::DuplicatePlaceholder),
        }
    }

    /// Looks up a built-in template: `chatgpt`, `alpaca` or `title`.
    pub fn builtin(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "chatgpt" | "chatgpt-query" => Some(Self::chatgpt_query()),
            "alpaca" | "alpaca-query" => Some(Self::alpaca_query()),
            "title" | "title-gen" => Some(Self::title_gen()),
            _ => None,
        }
    }

    pub fn kind(&self) -> TemplateKind {
        self.kind
    }

    pub fn text(&self) -> &str {
        &self.text
    }
}

/// Substitutes the rendered query for the placeholder.
pub fn build_prompt(template: &PromptTemplate, query: &QueryNode) -> String {
    template.text.replacen(PLACEHOLDER, &render(query), 1)
}
