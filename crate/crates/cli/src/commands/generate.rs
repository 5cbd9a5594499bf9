use super::rank::parse_mode;
use super::thread_pool;
use crate::config::Settings;
use crate::error::{usage, CliResult, Context};
use rayon::prelude::*;
use screenprio::corpusio::load_topics;
use screenprio::genquery::{
    ApiSchema, GenerationConfig, HttpBackend, Loaded, PromptTemplate, QueryCache, QueryGenerator,
};
use std::time::Duration;

pub fn generation_config(settings: &Settings) -> CliResult<GenerationConfig> {
    let mode = parse_mode(settings)?;
    let mut config = GenerationConfig::for_mode(mode, settings.require("endpoint_url")?, settings.require("model_name")?);
    if let Some(tag) = settings.get("model_tag") {
        config.model_tag = tag.to_string();
    }
    if let Some(t) = settings.parsed("temperature")? {
        config.temperature = t;
    }
    if let Some(n) = settings.parsed("num_generations")? {
        config.num_generations = n;
    }
    if let Some(r) = settings.parsed("max_retries")? {
        config.max_retries = r;
    }
    if let Some(secs) = settings.parsed::<f64>("timeout")? {
        if !(secs.is_finite() && secs > 0.0) {
            return Err(usage(format!("timeout {secs} must be a positive number of seconds")));
        }
        config.timeout = Duration::from_secs_f64(secs);
    }
    if let Some(schema) = settings.parsed::<ApiSchema>("api_schema")? {
        config.schema = schema;
    }
    if let Some(n) = settings.parsed("max_tokens")? {
        config.max_tokens = Some(n);
    }
    if let Some(p) = settings.parsed("top_p")? {
        config.top_p = Some(p);
    }
    match settings.get("api_key_env") {
        Some("none") | Some("") => config.api_key_env = None,
        Some(var) => config.api_key_env = Some(var.to_string()),
        None => {}
    }
    if let Some(ms) = settings.parsed("retry_base_ms")? {
        config.retry_base = Duration::from_millis(ms);
    }
    config.validate()?;
    Ok(config)
}

pub fn prompt_template(settings: &Settings) -> CliResult<PromptTemplate> {
    let name = settings.get("template").unwrap_or("chatgpt");
    if let Some(t) = PromptTemplate::builtin(name) {
        return Ok(t);
    }
    let text = std::fs::read_to_string(name)
        .map_err(|e| usage(format!("template `{name}` is neither built in nor a readable file: {e}")))?;
    Ok(PromptTemplate::custom(text)?)
}

/// Loads or generates the query set of every topic. Prints one
/// `topic<TAB>count<TAB>cached|generated` line per topic.
pub fn cmd_generate(settings: &Settings) -> CliResult<Vec<Loaded>> {
    let config = generation_config(settings)?;
    let template = prompt_template(settings)?;
    let topics_path = settings.existing_path("topics")?;
    let topics = load_topics(&topics_path).context(format!("topics {}", topics_path.display()))?;
    let cache = QueryCache::new(settings.require("generated")?);

    // The key is only needed when something has to be generated.
    let mut misses = 0;
    for t in &topics {
        if cache.lookup(&t.topic_id, &config.model_tag, config.mode)?.is_none() {
            misses += 1;
        }
    }
    let backend = if misses > 0 {
        HttpBackend::from_env(&config.endpoint_url, config.schema, config.timeout, config.api_key_env.as_deref())?
    } else {
        HttpBackend::new(&config.endpoint_url, config.schema, config.timeout, None)
    };
    let generator = QueryGenerator::new(config, backend, cache)?;

    let pool = thread_pool(settings)?;
    let loaded: Vec<Loaded> = pool.install(|| {
        topics
            .par_iter()
            .map(|t| {
                generator
                    .load_or_generate(t, &template)
                    .map_err(|e| crate::error::CliError::from(e).context(format!("topic `{}`", t.topic_id)))
            })
            .collect::<CliResult<Vec<_>>>()
    })?;
    for l in &loaded {
        println!(
            "{}\t{}\t{}",
            l.set.topic_id,
            l.set.queries.len(),
            if l.cached { "cached" } else { "generated" }
        );
    }
    log::info!("{misses} of {} topics generated", topics.len());
    Ok(loaded)
}
