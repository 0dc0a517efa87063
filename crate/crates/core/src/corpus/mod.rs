//! Post ingestion, cleaning, duplicate/short-post filtering and vocabulary
//! construction.

mod clean;
mod filter;
pub mod io;
mod stopwords;
mod vocab;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

pub use clean::{clean_text, clean_text_with, CleanOptions};
pub use filter::{filter_corpus, MIN_TOKENS};
pub use stopwords::{tokenize, StopWords};
pub use vocab::{build_vocabulary, Vocabulary};

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("line {line}: {reason}")]
    InvalidRecord { line: usize, reason: String },
    #[error("document {id}: term `{term}` is not in the vocabulary")]
    UnknownTerm { id: String, term: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum AuthorClass {
    Individual,
    Organization,
    #[default]
    Unknown,
}

/// One post as delivered by the data provider.
#[derive(Debug, Clone, PartialEq)]
pub struct RawPost {
    pub id: String,
    pub text: String,
    pub timestamp: DateTime<Utc>,
    pub author_id: String,
    pub author_class: AuthorClass,
}

/// A cleaned post: lowercase tokens in their original order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleanDoc {
    pub id: String,
    pub timestamp: DateTime<Utc>,
    pub author_id: String,
    pub tokens: Vec<String>,
}

impl CleanDoc {
    /// Cleans a raw post and splits it on whitespace. No filtering is applied.
    pub fn from_raw(post: &RawPost, opts: &CleanOptions) -> Self {
        let cleaned = clean_text_with(&post.text, opts);
        CleanDoc {
            id: post.id.clone(),
            timestamp: post.timestamp,
            author_id: post.author_id.clone(),
            tokens: cleaned.split_whitespace().map(str::to_owned).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Counts recorded while turning raw posts into the analysis corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestCounts {
    pub raw_posts: usize,
    pub after_filter: usize,
    /// Posts that survived cleaning/filtering but had no content terms left
    /// after stop-word removal.
    pub dropped_all_stopwords: usize,
    pub retained: usize,
}

/// Full ingest: clean, filter, then drop documents with no content terms.
pub fn prepare_corpus(
    posts: &[RawPost],
    opts: &CleanOptions,
    stopwords: &StopWords,
) -> (Vec<CleanDoc>, IngestCounts) {
    let cleaned: Vec<CleanDoc> = posts.iter().map(|p| CleanDoc::from_raw(p, opts)).collect();
    let filtered = filter_corpus(cleaned);
    let after_filter = filtered.len();
    let retained: Vec<CleanDoc> = filtered
        .into_iter()
        .filter(|d| d.tokens.iter().any(|t| !stopwords.contains(t)))
        .collect();
    let counts = IngestCounts {
        raw_posts: posts.len(),
        after_filter,
        dropped_all_stopwords: after_filter - retained.len(),
        retained: retained.len(),
    };
    (retained, counts)
}
