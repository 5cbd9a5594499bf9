use crate::corpusio::{format_generated, read_generated, write_atomic, CorpusError, GeneratedQuerySet, GenerationMode};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, MutexGuard};

/// Generated-query file keyed by `(topic_id, model_tag, mode)`.
///
/// All access goes through one lock; writes rewrite the whole file
/// atomically, so concurrent readers only ever see complete records.
#[derive(Debug)]
pub struct QueryCache {
    path: PathBuf,
    lock: Mutex<()>,
}

impl QueryCache {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Self { path: path.into(), lock: Mutex::new(()) }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn guard(&self) -> MutexGuard<'_, ()> {
        self.lock.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
    }

    pub fn lookup(
        &self,
        topic_id: &str,
        model_tag: &str,
        mode: GenerationMode,
    ) -> Result<Option<GeneratedQuerySet>, CorpusError> {
        let _guard = self.guard();
        Ok(read_generated(&self.path)?
            .into_iter()
            .find(|s| s.topic_id == topic_id && s.model_tag == model_tag && s.mode == mode))
    }

    /// Inserts `set`, replacing any stored set with the same key.
    pub fn store(&self, set: &GeneratedQuerySet) -> Result<(), CorpusError> {
        set.validate()?;
        let _guard = self.guard();
        let mut sets = read_generated(&self.path)?;
        match sets.iter_mut().find(|s| s.key() == set.key()) {
            Some(slot) => *slot = set.clone(),
            None => sets.push(set.clone()),
        }
        write_atomic(&self.path, format_generated(&sets).as_bytes())
    }

    pub fn all(&self) -> Result<Vec<GeneratedQuerySet>, CorpusError> {
        let _guard = self.guard();
        read_generated(&self.path)
    }
}
