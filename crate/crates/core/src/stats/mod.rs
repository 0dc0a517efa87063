//! Per-topic comparison of negative and non-negative documents.

mod compare;
mod effect;
mod fdr;
mod ttest;

pub use compare::{
    alpha_threshold, compare_all_topics, CompareOptions, Direction, TestResult, TopicComparison,
};
pub use effect::{
    classify_effect, cohens_d, stratified_effect_size, EffectClass, EffectSize, DEFAULT_STRATA,
};
pub use fdr::fdr_adjust;
pub use ttest::{t_test, welch_t_test, TTest, TTestKind};

#[derive(Debug, thiserror::Error)]
pub enum StatsError {
    #[error("each group needs at least two observations (got {x} and {y})")]
    TooFewSamples { x: usize, y: usize },
    #[error("pooled variance is zero")]
    ZeroPooledVariance,
    #[error("p-value {value} at position {index} is outside [0, 1]")]
    PValueOutOfRange { index: usize, value: f64 },
    #[error("no stratum produced an effect size")]
    NoStrata,
    #[error("only one sentiment group is present: every document is {0}")]
    OneGroup(crate::sentiment::SentimentLabel),
    #[error("no topics retained for comparison")]
    NoRetainedTopics,
    #[error("{0}")]
    Shape(String),
}

pub(crate) fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Unbiased sample variance (two-pass).
pub(crate) fn variance(x: &[f64]) -> f64 {
    let m = mean(x);
    x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (x.len() as f64 - 1.0)
}
