use std::collections::{BTreeMap, HashMap};

use chrono::Datelike;
use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::corpus::CleanDoc;
use crate::matrix::Matrix;
use crate::sentiment::SentimentLabel;

/// Sentiment shares of one calendar month (or of the whole corpus).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonthRate {
    /// `YYYY-MM`, or `overall`.
    pub month: String,
    pub n_docs: usize,
    pub n_neg: usize,
    pub n_nonneg: usize,
    /// `100 * n_neg / n_docs`, full precision.
    pub neg_rate: f64,
    pub nonneg_rate: f64,
    /// Two-decimal rates reconciled so the pair sums to exactly 100.00.
    pub neg_rate_2dp: f64,
    pub nonneg_rate_2dp: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendReport {
    /// Ascending by month.
    pub months: Vec<MonthRate>,
    pub overall: MonthRate,
}

/// Largest-remainder rounding of `counts / total` to hundredths of a percent.
fn hundredths(counts: [usize; 2], total: usize) -> [u64; 2] {
    let total = total as u64;
    let mut floors = counts.map(|c| 10_000 * c as u64 / total);
    let rems = counts.map(|c| 10_000 * c as u64 % total);
    let short = 10_000 - floors.iter().sum::<u64>();
    let mut order = [0, 1];
    order.sort_by(|&a, &b| rems[b].cmp(&rems[a]).then(a.cmp(&b)));
    for &i in order.iter().take(short as usize) {
        floors[i] += 1;
    }
    floors
}

fn month_rate(month: String, n_neg: usize, n_nonneg: usize) -> MonthRate {
    let n = n_neg + n_nonneg;
    let [h_neg, h_nonneg] = hundredths([n_neg, n_nonneg], n);
    MonthRate {
        month,
        n_docs: n,
        n_neg,
        n_nonneg,
        neg_rate: 100.0 * n_neg as f64 / n as f64,
        nonneg_rate: 100.0 * n_nonneg as f64 / n as f64,
        neg_rate_2dp: h_neg as f64 / 100.0,
        nonneg_rate_2dp: h_nonneg as f64 / 100.0,
    }
}

/// Negative and non-negative shares per UTC calendar month, plus an
/// overall row.
pub fn monthly_sentiment_rates(
    docs: &[CleanDoc],
    labels: &HashMap<String, SentimentLabel>,
) -> Result<TrendReport, PipelineError> {
    let mut buckets: BTreeMap<(i32, u32), [usize; 2]> = BTreeMap::new();
    for doc in docs {
        let label = labels
            .get(&doc.id)
            .ok_or_else(|| PipelineError::UnlabeledDocument { id: doc.id.clone() })?;
        let slot = buckets
            .entry((doc.timestamp.year(), doc.timestamp.month()))
            .or_default();
        slot[usize::from(!label.is_negative())] += 1;
    }
    if buckets.is_empty() {
        return Err(PipelineError::EmptyMonthRange);
    }
    let (mut neg, mut nonneg) = (0, 0);
    let months = buckets
        .into_iter()
        .map(|((y, m), [a, b])| {
            neg += a;
            nonneg += b;
            month_rate(format!("{y:04}-{m:02}"), a, b)
        })
        .collect();
    Ok(TrendReport {
        months,
        overall: month_rate("overall".into(), neg, nonneg),
    })
}

/// Column means of θ over all documents for the retained topics, in the
/// order given. An empty θ yields zeros.
pub fn average_topic_weight(theta: &Matrix, retained: &[usize]) -> Vec<(usize, f64)> {
    let n = theta.rows();
    retained
        .iter()
        .map(|&k| {
            let sum: f64 = theta.iter_rows().map(|r| r[k]).sum();
            (k, if n == 0 { 0.0 } else { sum / n as f64 })
        })
        .collect()
}

/// Highest-weight topics of each sentiment group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopTopics {
    /// `(topic, mean θ within the group)`, descending.
    pub negative: Vec<(usize, f64)>,
    pub nonnegative: Vec<(usize, f64)>,
}

fn ranked(theta: &Matrix, rows: &[usize], retained: &[usize], k: usize) -> Vec<(usize, f64)> {
    let mut means: Vec<(usize, f64)> = retained
        .iter()
        .map(|&t| {
            (
                t,
                rows.iter().map(|&d| theta.get(d, t)).sum::<f64>() / rows.len() as f64,
            )
        })
        .collect();
    means.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    means.truncate(k);
    means
}

/// Ranks retained topics by their mean weight within the negative and
/// non-negative documents and keeps the top `k` of each. Ties go to the
/// lower topic index.
pub fn top_k_topics_by_group(
    theta: &Matrix,
    labels: &[SentimentLabel],
    retained: &[usize],
    k: usize,
) -> Result<TopTopics, PipelineError> {
    if labels.len() != theta.rows() {
        return Err(PipelineError::Data(format!(
            "{} labels for {} documents",
            labels.len(),
            theta.rows()
        )));
    }
    let (neg, nonneg): (Vec<usize>, Vec<usize>) =
        (0..labels.len()).partition(|&d| labels[d].is_negative());
    for (rows, label) in [
        (&neg, SentimentLabel::Negative),
        (&nonneg, SentimentLabel::NonNegative),
    ] {
        if rows.is_empty() {
            return Err(PipelineError::Data(format!(
                "no {label} documents to rank topics for"
            )));
        }
    }
    Ok(TopTopics {
        negative: ranked(theta, &neg, retained, k),
        nonnegative: ranked(theta, &nonneg, retained, k),
    })
}
