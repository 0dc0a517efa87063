//! Rule-based sentiment engines and their scoring against human gold labels.
//!
//! Both engines produce a two-way label: positive and neutral posts are
//! merged into [`SentimentLabel::NonNegative`].

mod agreement;
mod compound;
mod difference;
pub mod io;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::CleanDoc;

pub use agreement::{evaluate_agreement, select_engine, AgreementReport, GoldRecord};
pub use compound::{
    compound_label, compound_score, CompoundEngine, CompoundParams, ValenceLexicon,
};
pub use difference::{score_difference, DifferenceEngine, PolarityLexicon};

#[derive(Debug, thiserror::Error)]
pub enum SentimentError {
    #[error("document {id} has no tokens")]
    EmptyTokens { id: String },
    #[error("no prediction for gold record {id}")]
    MissingPrediction { id: String },
    #[error("no gold records with coder agreement")]
    NoUnanimousRecords,
    #[error("no agreement reports to choose from")]
    NoReports,
    #[error("unknown engine `{0}`")]
    UnknownEngine(String),
    #[error("invalid lexicon: {0}")]
    InvalidLexicon(String),
    #[error("invalid label `{0}` (expected NEG or NONNEG)")]
    InvalidLabel(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SentimentLabel {
    #[serde(rename = "NEG")]
    Negative,
    #[serde(rename = "NONNEG")]
    NonNegative,
}

impl SentimentLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            SentimentLabel::Negative => "NEG",
            SentimentLabel::NonNegative => "NONNEG",
        }
    }

    pub fn is_negative(self) -> bool {
        self == SentimentLabel::Negative
    }
}

impl fmt::Display for SentimentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SentimentLabel {
    type Err = SentimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "NEG" => Ok(SentimentLabel::Negative),
            "NONNEG" => Ok(SentimentLabel::NonNegative),
            other => Err(SentimentError::InvalidLabel(other.to_string())),
        }
    }
}

/// Score and label for one document.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub score: f64,
    pub label: SentimentLabel,
}

pub trait SentimentEngine: Sync {
    fn name(&self) -> &str;
    fn classify(&self, doc: &CleanDoc) -> Result<Classification, SentimentError>;
}
