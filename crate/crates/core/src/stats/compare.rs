use serde::{Deserialize, Serialize};

use super::{
    cohens_d, fdr_adjust, mean, stratified_effect_size, t_test, EffectSize, StatsError, TTestKind,
    DEFAULT_STRATA,
};
use crate::matrix::Matrix;
use crate::sentiment::SentimentLabel;

/// Significance level scaled to the corpus size: `0.05 / sqrt(n / 100)`.
pub fn alpha_threshold(n: usize) -> f64 {
    0.05 / (n as f64 / 100.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    NegGreater,
    NonNegGreater,
    NS,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::NegGreater => "NEG > NONNEG",
            Direction::NonNegGreater => "NONNEG > NEG",
            Direction::NS => "NS",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub topic: usize,
    pub t: f64,
    pub df: f64,
    pub p: f64,
    pub p_adj: f64,
    pub direction: Direction,
    pub alpha_used: f64,
    pub mean_neg: f64,
    pub mean_nonneg: f64,
    pub n_neg: usize,
    pub n_nonneg: usize,
}

/// One row of the topic comparison table. Effect sizes exist only for
/// significant topics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicComparison {
    pub test: TestResult,
    pub effect: Option<EffectSize>,
    /// Cohen's d over the complete groups.
    pub full_d: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CompareOptions {
    /// Document count that sets the significance level.
    pub n_docs: usize,
    /// Round the significance level to three decimals.
    pub round_alpha: bool,
    pub kind: TTestKind,
    pub sizes: Vec<usize>,
    pub repeats: usize,
    pub seed: u64,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            n_docs: 0,
            round_alpha: false,
            kind: TTestKind::Welch,
            sizes: DEFAULT_STRATA.to_vec(),
            repeats: 1,
            seed: 0,
        }
    }
}

impl CompareOptions {
    pub fn alpha(&self) -> f64 {
        let a = alpha_threshold(self.n_docs);
        if self.round_alpha {
            (a * 1000.0).round() / 1000.0
        } else {
            a
        }
    }
}

fn topic_seed(seed: u64, topic: usize) -> u64 {
    seed ^ (topic as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Tests every retained topic's weight for a difference between negative
/// and non-negative documents.
///
/// `theta` has one row per document and `labels` gives each row's
/// sentiment. p-values are adjusted across the retained topics with
/// Benjamini-Hochberg; a topic is significant when its adjusted p-value is
/// at most the size-scaled level. Each group's weights are sorted before
/// testing, so results do not depend on document order.
pub fn compare_all_topics(
    theta: &Matrix,
    labels: &[SentimentLabel],
    retained: &[usize],
    opts: &CompareOptions,
) -> Result<Vec<TopicComparison>, StatsError> {
    if labels.len() != theta.rows() {
        return Err(StatsError::Shape(format!(
            "{} labels for {} documents",
            labels.len(),
            theta.rows()
        )));
    }
    if retained.is_empty() {
        return Err(StatsError::NoRetainedTopics);
    }
    if let Some(&k) = retained.iter().find(|&&k| k >= theta.cols()) {
        return Err(StatsError::Shape(format!(
            "retained topic {k} but the model has {} topics",
            theta.cols()
        )));
    }
    if let Some(first) = labels.first() {
        if labels.iter().all(|l| l == first) {
            log::warn!("every document is {first}; topic comparison needs both groups");
            return Err(StatsError::OneGroup(*first));
        }
    }
    let alpha = opts.alpha();

    let mut groups = Vec::with_capacity(retained.len());
    let mut tests = Vec::with_capacity(retained.len());
    for &k in retained {
        let (mut neg, mut nonneg): (Vec<f64>, Vec<f64>) = (Vec::new(), Vec::new());
        for (d, label) in labels.iter().enumerate() {
            let w = theta.get(d, k);
            match label {
                SentimentLabel::Negative => neg.push(w),
                SentimentLabel::NonNegative => nonneg.push(w),
            }
        }
        neg.sort_by(f64::total_cmp);
        nonneg.sort_by(f64::total_cmp);
        tests.push(t_test(&neg, &nonneg, opts.kind)?);
        groups.push((neg, nonneg));
    }
    let p: Vec<f64> = tests.iter().map(|t| t.p).collect();
    let p_adj = fdr_adjust(&p)?;

    let mut rows = Vec::with_capacity(retained.len());
    for (i, &k) in retained.iter().enumerate() {
        let (neg, nonneg) = &groups[i];
        let (mean_neg, mean_nonneg) = (mean(neg), mean(nonneg));
        let direction = if p_adj[i] <= alpha {
            if mean_neg > mean_nonneg {
                Direction::NegGreater
            } else {
                Direction::NonNegGreater
            }
        } else {
            Direction::NS
        };
        let (effect, full_d) = if direction == Direction::NS {
            (None, None)
        } else {
            let effect = match stratified_effect_size(
                neg,
                nonneg,
                &opts.sizes,
                opts.repeats,
                topic_seed(opts.seed, k),
            ) {
                Ok(e) => Some(e),
                Err(e) => {
                    log::warn!("topic {k}: no effect size: {e}");
                    None
                }
            };
            (effect, cohens_d(neg, nonneg).ok())
        };
        rows.push(TopicComparison {
            test: TestResult {
                topic: k,
                t: tests[i].t,
                df: tests[i].df,
                p: tests[i].p,
                p_adj: p_adj[i],
                direction,
                alpha_used: alpha,
                mean_neg,
                mean_nonneg,
                n_neg: neg.len(),
                n_nonneg: nonneg.len(),
            },
            effect,
            full_d,
        });
    }
    Ok(rows)
}
