//! Topic discovery: collapsed Gibbs sampling for LDA, C_V coherence for
//! choosing the number of topics, multi-seed stability checks and the
//! human topic-labeling step.

mod coherence;
pub mod io;
mod labels;
mod lda;
mod likelihood;
mod selection;

use serde::{Deserialize, Serialize};

pub use coherence::{coherence_cv, CoherenceParams, CoherenceScores};
pub use labels::{apply_topic_labels, label_template, TopicLabel, TopicLabels};
pub use lda::{fit_lda, GibbsSampler, TopicModel};
pub use likelihood::{log_likelihood, log_likelihood_from_counts};
pub use selection::{
    robustness_check, robustness_check_with_seeds, select_topic_count, CoherenceSweep,
    RobustnessReport, SweepParams,
};

#[derive(Debug, thiserror::Error)]
pub enum TopicError {
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("document {id} has no terms after stop-word removal")]
    EmptyDocument { id: String },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Corpus(#[from] crate::corpus::CorpusError),
    #[error("top word `{word}` never occurs in the reference corpus")]
    MissingReferenceWord { word: String },
    #[error("no label for topic {topic}")]
    MissingLabel { topic: usize },
    #[error("label file row {row}: {reason}")]
    InvalidLabel { row: usize, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Sampler settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaConfig {
    pub topic_count: usize,
    /// Symmetric per-topic document prior; `None` means `5 / topic_count`.
    pub alpha: Option<f64>,
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
}

impl LdaConfig {
    pub fn new(topic_count: usize, iterations: usize, seed: u64) -> Self {
        LdaConfig {
            topic_count,
            alpha: None,
            beta: 0.01,
            iterations,
            seed,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(5.0 / self.topic_count as f64)
    }

    pub fn validate(&self) -> Result<(), TopicError> {
        if self.topic_count == 0 {
            return Err(TopicError::InvalidConfig(
                "topic_count must be at least 1".into(),
            ));
        }
        let alpha = self.alpha();
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(TopicError::InvalidConfig(format!(
                "alpha must be positive, got {alpha}"
            )));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(TopicError::InvalidConfig(format!(
                "beta must be positive, got {}",
                self.beta
            )));
        }
        if self.iterations == 0 {
            return Err(TopicError::InvalidConfig(
                "iterations must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// The `n` most probable terms of every topic, most probable first. Ties
/// go to the smaller vocabulary index.
pub fn top_words(model: &TopicModel, n: usize) -> Vec<Vec<usize>> {
    let n = n.min(model.vocab_size());
    (0..model.topic_count())
        .map(|k| {
            let row = model.phi().row(k);
            let mut idx: Vec<usize> = (0..row.len()).collect();
            idx.sort_by(|&a, &b| row[b].total_cmp(&row[a]).then(a.cmp(&b)));
            idx.truncate(n);
            idx
        })
        .collect()
}

/// [`top_words`] resolved to term strings.
pub fn top_terms(
    model: &TopicModel,
    vocab: &crate::corpus::Vocabulary,
    n: usize,
) -> Vec<Vec<String>> {
    top_words(model, n)
        .into_iter()
        .map(|ws| ws.into_iter().map(|w| vocab.term(w).to_string()).collect())
        .collect()
}
