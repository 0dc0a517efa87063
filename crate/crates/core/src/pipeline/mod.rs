//! End-to-end orchestration: configuration, stage runners that persist
//! their outputs, monthly and per-topic aggregates, charts and the run
//! manifest.

mod aggregates;
mod charts;
mod config;
mod manifest;
mod stages;

pub use aggregates::{
    average_topic_weight, monthly_sentiment_rates, top_k_topics_by_group, MonthRate, TopTopics,
    TrendReport,
};
pub use charts::{emit_charts, ChartFiles};
pub use config::{
    EngineChoice, LdaSection, LexiconPaths, PipelineConfig, ReportSection, RobustnessSection,
    StatsSection, SweepSection,
};
pub use manifest::{file_sha256, Conservation, RunManifest, RunStatus, Seeds};
pub use stages::{
    agree, compare, fit, ingest, label_template, report, run_pipeline, sentiment, sweep,
    CompareSummary, FitSummary, ReportSummary, SentimentSummary,
};

use crate::corpus::CorpusError;
use crate::sentiment::SentimentError;
use crate::stats::StatsError;
use crate::topics::TopicError;

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("config error: {0}")]
    Config(String),
    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<PipelineError>,
    },
    #[error("document {id} has no sentiment label")]
    UnlabeledDocument { id: String },
    #[error("no months to report")]
    EmptyMonthRange,
    #[error("{0}")]
    Data(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Sentiment(#[from] SentimentError),
    #[error(transparent)]
    Topics(#[from] TopicError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl PipelineError {
    /// Process exit status: 2 config, 3 data, 4 numerical.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) | PipelineError::Topics(TopicError::InvalidConfig(_)) => 2,
            PipelineError::Stage { source, .. } => source.exit_code(),
            PipelineError::Numerical(_)
            | PipelineError::Stats(StatsError::ZeroPooledVariance | StatsError::NoStrata) => 4,
            _ => 3,
        }
    }

    /// Name of the stage that failed, if known.
    pub fn stage(&self) -> Option<&'static str> {
        match self {
            PipelineError::Stage { stage, .. } => Some(stage),
            _ => None,
        }
    }

    pub(crate) fn in_stage(self, stage: &'static str) -> Self {
        match self {
            e @ (PipelineError::Stage { .. } | PipelineError::Config(_)) => e,
            e => PipelineError::Stage {
                stage,
                source: Box::new(e),
            },
        }
    }

    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        PipelineError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
