use super::thread_pool;
use crate::config::Settings;
use crate::error::{data, usage, CliResult, Context};
use rayon::prelude::*;
use screenprio::boolquery::{extract_terms, parse_boolean, QueryNode};
use screenprio::clf::{rank_clf, ClauseScoring};
use screenprio::corpusio::{
    load_candidates, load_corpus, load_topics, read_generated, write_run, Document, GeneratedQuerySet, GenerationMode,
    RankedList, Topic,
};
use screenprio::lexrank::{score_bm25, score_qlm_jm, tokenize, Index, ScorerParams};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scorer {
    Bm25,
    Qlm,
    Clf,
}

impl FromStr for Scorer {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "bm25" => Ok(Scorer::Bm25),
            "qlm" => Ok(Scorer::Qlm),
            "clf" => Ok(Scorer::Clf),
            other => Err(format!("unknown scorer `{other}` (bm25, qlm, clf)")),
        }
    }
}

impl fmt::Display for Scorer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scorer::Bm25 => "bm25",
            Scorer::Qlm => "qlm",
            Scorer::Clf => "clf",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    BooleanTerms,
    Generated,
    FinalTitle,
    WorkingTitle,
}

impl FromStr for Source {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "boolean-terms" => Ok(Source::BooleanTerms),
            "generated" => Ok(Source::Generated),
            "final-title" => Ok(Source::FinalTitle),
            "working-title" => Ok(Source::WorkingTitle),
            other => Err(format!(
                "unknown source `{other}` (boolean-terms, generated, final-title, working-title)"
            )),
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::BooleanTerms => "boolean-terms",
            Source::Generated => "generated",
            Source::FinalTitle => "final-title",
            Source::WorkingTitle => "working-title",
        })
    }
}

pub fn parse_mode(settings: &Settings) -> CliResult<GenerationMode> {
    match settings.get("mode").unwrap_or("single") {
        "single" => Ok(GenerationMode::Single),
        "multi" => Ok(GenerationMode::Multi),
        other => Err(usage(format!("mode `{other}` is not single or multi"))),
    }
}

/// What one query variant of one topic is scored with.
enum TopicQuery {
    Terms(Vec<String>),
    Clauses(QueryNode),
}

/// Settings resolved for ranking.
pub struct RankPlan {
    pub scorer: Scorer,
    pub source: Source,
    pub params: ScorerParams,
    pub clf_scoring: ClauseScoring,
    pub mode: GenerationMode,
    pub model_tag: Option<String>,
}

impl RankPlan {
    pub fn from_settings(settings: &Settings) -> CliResult<Self> {
        let scorer: Scorer = settings.parsed_or("scorer", Scorer::Bm25)?;
        let source: Source = settings.parsed_or("source", Source::BooleanTerms)?;
        if scorer == Scorer::Clf && source != Source::BooleanTerms {
            return Err(usage(format!(
                "invalid combination: scorer clf needs the boolean-terms source, got {source}"
            )));
        }
        let defaults = ScorerParams::default();
        let params = ScorerParams {
            bm25_k1: settings.parsed_or("bm25_k1", defaults.bm25_k1)?,
            bm25_b: settings.parsed_or("bm25_b", defaults.bm25_b)?,
            qlm_lambda: settings.parsed_or("qlm_lambda", defaults.qlm_lambda)?,
        };
        params.validate().map_err(usage)?;
        let clf_scoring = match settings.get("clf_scoring").unwrap_or("bm25") {
            "bm25" => ClauseScoring::Bm25,
            "binary" => ClauseScoring::Binary,
            other => return Err(usage(format!("clf_scoring `{other}` is not bm25 or binary"))),
        };
        let model_tag = settings.get("model_tag").or(settings.get("model_name")).map(str::to_string);
        if source == Source::Generated && model_tag.is_none() {
            return Err(usage("the generated source needs model_tag (or model_name) to pick the stored queries"));
        }
        Ok(Self { scorer, source, params, clf_scoring, mode: parse_mode(settings)?, model_tag })
    }

    /// `{scorer}-{source}`, plus `-v{i}` per multi-mode variant.
    pub fn tag(&self, variant: Option<usize>) -> String {
        match variant {
            Some(i) => format!("{}-{}-v{i}", self.scorer, self.source),
            None => format!("{}-{}", self.scorer, self.source),
        }
    }
}

fn topic_queries(plan: &RankPlan, topic: &Topic, generated: Option<&GeneratedQuerySet>) -> CliResult<Vec<TopicQuery>> {
    let id = &topic.topic_id;
    let title = |t: &Option<String>, what: &str| {
        t.as_deref()
            .map(|s| vec![TopicQuery::Terms(tokenize(s))])
            .ok_or_else(|| data(format!("topic `{id}` has no {what}")))
    };
    match plan.source {
        Source::BooleanTerms => {
            let query = parse_boolean(&topic.boolean_query_raw).context(format!("topic `{id}`"))?;
            Ok(vec![match plan.scorer {
                Scorer::Clf => TopicQuery::Clauses(query),
                _ => TopicQuery::Terms(extract_terms(&query, false)),
            }])
        }
        Source::FinalTitle => title(&topic.final_title, "final title"),
        Source::WorkingTitle => title(&topic.working_title, "working title"),
        Source::Generated => {
            let set = generated.ok_or_else(|| data(format!("missing generated queries for topic `{id}`")))?;
            Ok(set.queries.iter().map(|q| TopicQuery::Terms(tokenize(q))).collect())
        }
    }
}

fn candidate_docs<'a>(
    topic: &Topic,
    corpus: &'a [Document],
    by_id: &HashMap<&str, &'a Document>,
    candidates: Option<&BTreeMap<String, Vec<String>>>,
) -> CliResult<Vec<Document>> {
    match candidates {
        None => Ok(corpus.to_vec()),
        Some(map) => {
            let ids = map
                .get(&topic.topic_id)
                .ok_or_else(|| data(format!("no candidates listed for topic `{}`", topic.topic_id)))?;
            ids.iter()
                .map(|id| {
                    by_id.get(id.as_str()).map(|d| (*d).clone()).ok_or_else(|| {
                        data(format!("candidate `{id}` of topic `{}` is not in the corpus", topic.topic_id))
                    })
                })
                .collect()
        }
    }
}

fn rank_topic(plan: &RankPlan, topic_id: &str, docs: &[Document], queries: &[TopicQuery]) -> CliResult<Vec<RankedList>> {
    let index = Index::build(topic_id, docs).context(format!("topic `{topic_id}`"))?;
    queries
        .iter()
        .map(|q| {
            let list = match (q, plan.scorer) {
                (TopicQuery::Clauses(node), _) => rank_clf(&index, node, &plan.params, plan.clf_scoring)?,
                (TopicQuery::Terms(terms), Scorer::Qlm) => score_qlm_jm(&index, terms, &plan.params)?,
                (TopicQuery::Terms(terms), _) => score_bm25(&index, terms, &plan.params)?,
            };
            Ok(list)
        })
        .collect::<CliResult<Vec<_>>>()
        .map_err(|e| e.context(format!("topic `{topic_id}`")))
}

/// Ranks every topic and writes `{runs_dir}/{tag}.run` per query variant.
/// Returns the written paths in variant order.
pub fn cmd_rank(settings: &Settings) -> CliResult<Vec<PathBuf>> {
    let plan = RankPlan::from_settings(settings)?;
    let corpus_path = settings.existing_path("corpus")?;
    let topics_path = settings.existing_path("topics")?;
    let candidates_path = settings.optional_existing_path("candidates")?;
    let runs_dir = PathBuf::from(settings.require("runs_dir")?);

    let corpus = load_corpus(&corpus_path).context(format!("corpus {}", corpus_path.display()))?;
    let topics = load_topics(&topics_path).context(format!("topics {}", topics_path.display()))?;
    let candidates = candidates_path
        .map(|p| load_candidates(&p).context(format!("candidates {}", p.display())))
        .transpose()?;
    let generated: Vec<GeneratedQuerySet> = if plan.source == Source::Generated {
        let path = settings.existing_path("generated")?;
        read_generated(&path).context(format!("generated queries {}", path.display()))?
    } else {
        Vec::new()
    };
    let find_set = |topic: &str| {
        generated
            .iter()
            .find(|s| s.topic_id == topic && Some(&s.model_tag) == plan.model_tag.as_ref() && s.mode == plan.mode)
    };

    let by_id: HashMap<&str, &Document> = corpus.iter().map(|d| (d.doc_id.as_str(), d)).collect();
    let jobs = topics
        .iter()
        .map(|t| {
            let queries = topic_queries(&plan, t, find_set(&t.topic_id))?;
            let docs = candidate_docs(t, &corpus, &by_id, candidates.as_ref())?;
            Ok((t.topic_id.as_str(), docs, queries))
        })
        .collect::<CliResult<Vec<_>>>()?;

    let variants = jobs.first().map_or(1, |(_, _, q)| q.len());
    if let Some((topic, _, q)) = jobs.iter().find(|(_, _, q)| q.len() != variants) {
        return Err(data(format!(
            "topic `{topic}` has {} query variants, expected {variants} like the other topics",
            q.len()
        )));
    }

    let pool = thread_pool(settings)?;
    let ranked: Vec<Vec<RankedList>> = pool.install(|| {
        jobs.par_iter()
            .map(|(topic, docs, queries)| rank_topic(&plan, topic, docs, queries))
            .collect::<CliResult<Vec<_>>>()
    })?;

    std::fs::create_dir_all(&runs_dir).context(format!("creating {}", runs_dir.display()))?;
    let multi = plan.source == Source::Generated && plan.mode == GenerationMode::Multi;
    let mut written = Vec::with_capacity(variants);
    for v in 0..variants {
        let tag = plan.tag(multi.then_some(v));
        let lists: Vec<RankedList> = ranked.iter().map(|per_topic| per_topic[v].clone()).collect();
        let path = runs_dir.join(format!("{tag}.run"));
        write_run(&lists, &path, Some(&tag)).context(format!("writing {}", path.display()))?;
        log::info!("wrote {} ({} topics)", path.display(), lists.len());
        written.push(path);
    }
    Ok(written)
}
