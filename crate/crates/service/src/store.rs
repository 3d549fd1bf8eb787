//! File-backed annotation store: one annotations file per annotator under
//! `<corpus>/annotations/`, merged on read. Writes for one annotator are
//! serialized and replace the file atomically.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use lpattack_core::io::{load_annotations, save_annotations};
use lpattack_core::model::Annotation;

use crate::error::ApiError;

pub const ANNOTATIONS_DIR: &str = "annotations";

pub struct AnnotationStore {
    dir: PathBuf,
    locks: Mutex<HashMap<String, Arc<tokio::sync::Mutex<()>>>>,
}

pub fn valid_annotator_id(id: &str) -> bool {
    !id.is_empty()
        && !id.starts_with('.')
        && id.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
}

impl AnnotationStore {
    pub fn open(corpus_dir: &Path) -> std::io::Result<Self> {
        let dir = corpus_dir.join(ANNOTATIONS_DIR);
        std::fs::create_dir_all(&dir)?;
        Ok(AnnotationStore {
            dir,
            locks: Mutex::new(HashMap::new()),
        })
    }

    fn path(&self, annotator: &str) -> PathBuf {
        self.dir.join(format!("{annotator}.json"))
    }

    fn lock(&self, annotator: &str) -> Arc<tokio::sync::Mutex<()>> {
        let mut locks = self.locks.lock().unwrap_or_else(|p| p.into_inner());
        Arc::clone(locks.entry(annotator.to_string()).or_default())
    }

    /// Inserts or replaces the annotator's annotation for its debate and
    /// returns the stored id `annotator/debate`.
    pub async fn put(&self, ann: Annotation) -> Result<String, ApiError> {
        let annotator = ann.annotator_id.clone();
        let stored_id = format!("{annotator}/{}", ann.debate_id);
        let lock = self.lock(&annotator);
        let _guard = lock.lock().await;
        let path = self.path(&annotator);
        tokio::task::spawn_blocking(move || {
            let mut current = if path.exists() { load_annotations(&path)? } else { Vec::new() };
            match current.iter_mut().find(|a| a.debate_id == ann.debate_id) {
                Some(slot) => *slot = ann,
                None => current.push(ann),
            }
            save_annotations(&path, &current)
        })
        .await
        .map_err(|e| ApiError::internal(e.to_string()))?
        .map_err(|e| ApiError::internal(format!("annotation store: {e}")))?;
        Ok(stored_id)
    }

    /// Annotator ids with a file in the store, sorted.
    pub fn annotators(&self) -> Result<Vec<String>, ApiError> {
        let mut out = Vec::new();
        let entries = std::fs::read_dir(&self.dir).map_err(|e| ApiError::internal(e.to_string()))?;
        for entry in entries {
            let path = entry.map_err(|e| ApiError::internal(e.to_string()))?.path();
            if path.extension().is_some_and(|e| e == "json") {
                if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                    if valid_annotator_id(stem) {
                        out.push(stem.to_string());
                    }
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// One annotator's annotations; `None` when the annotator has no file.
    pub async fn of(&self, annotator: &str) -> Result<Option<Vec<Annotation>>, ApiError> {
        let path = self.path(annotator);
        if !valid_annotator_id(annotator) || !path.exists() {
            return Ok(None);
        }
        tokio::task::spawn_blocking(move || load_annotations(&path))
            .await
            .map_err(|e| ApiError::internal(e.to_string()))?
            .map(Some)
            .map_err(|e| ApiError::internal(format!("annotation store: {e}")))
    }

    /// Every stored annotation, annotators in id order.
    pub async fn all(&self) -> Result<Vec<Annotation>, ApiError> {
        let mut out = Vec::new();
        for annotator in self.annotators()? {
            out.extend(self.of(&annotator).await?.unwrap_or_default());
        }
        Ok(out)
    }
}
