//! Sentiment classification, topic discovery and per-topic statistical
//! comparison of short social-media posts.
//!
//! The crate is organized by pipeline stage:
//!
//! - [`corpus`]: ingest, cleaning, filtering, vocabulary
//! - [`sentiment`]: difference and compound-score engines, gold agreement
//! - [`topics`]: collapsed Gibbs LDA, coherence-based topic count selection
//! - [`stats`]: Welch t-test, Benjamini-Hochberg, stratified Cohen's d
//! - [`pipeline`]: orchestration, aggregates, reports and charts

pub mod corpus;
pub mod format;
pub mod matrix;
pub mod pipeline;
pub mod sentiment;
pub mod special;
pub mod stats;
pub mod synthetic;
pub mod topics;
