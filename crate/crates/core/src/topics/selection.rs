use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{coherence_cv, fit_lda, top_terms, CoherenceParams, LdaConfig, TopicError};
use crate::corpus::{CleanDoc, Vocabulary};

/// Settings for choosing the topic count by coherence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepParams {
    pub min_topics: usize,
    pub max_topics: usize,
    /// Sweeps per candidate fit; usually far below the final fit's budget.
    pub iterations: usize,
    pub top_n: usize,
    pub coherence: CoherenceParams,
}

impl Default for SweepParams {
    fn default() -> Self {
        SweepParams {
            min_topics: 2,
            max_topics: 100,
            iterations: 500,
            top_n: 10,
            coherence: CoherenceParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherenceSweep {
    /// `(topic_count, mean C_V)` in increasing topic count.
    pub scores: Vec<(usize, f64)>,
    /// Per-topic C_V of each candidate fit, aligned with `scores`.
    pub per_topic: Vec<Vec<f64>>,
    pub selected: usize,
}

/// Fits one model per topic count in `[min_topics, max_topics]` and keeps
/// the count whose top words have the highest mean C_V coherence against
/// `docs`. Ties go to the smaller count. Candidate fits run in parallel.
pub fn select_topic_count(
    docs: &[CleanDoc],
    vocab: &Vocabulary,
    template: &LdaConfig,
    params: &SweepParams,
) -> Result<CoherenceSweep, TopicError> {
    let (lo, hi) = (params.min_topics, params.max_topics);
    if lo == 0 || lo > hi || hi > vocab.len() {
        return Err(TopicError::InvalidConfig(format!(
            "topic range [{lo}, {hi}] must lie within [1, {}]",
            vocab.len()
        )));
    }
    let results: Vec<(usize, Vec<f64>, f64)> = (lo..=hi)
        .into_par_iter()
        .map(|t| {
            let cfg = LdaConfig {
                topic_count: t,
                iterations: params.iterations,
                ..template.clone()
            };
            let model = fit_lda(docs, vocab, &cfg)?;
            let top = top_terms(&model, vocab, params.top_n);
            let scores = coherence_cv(&top, docs, &params.coherence)?;
            log::debug!("coherence sweep: T={t} C_V={:.6}", scores.mean);
            Ok((t, scores.per_topic, scores.mean))
        })
        .collect::<Result<_, TopicError>>()?;

    let mut best = (results[0].0, results[0].2);
    for &(t, _, mean) in &results[1..] {
        if mean > best.1 {
            best = (t, mean);
        }
    }
    Ok(CoherenceSweep {
        scores: results.iter().map(|(t, _, m)| (*t, *m)).collect(),
        per_topic: results.into_iter().map(|(_, p, _)| p).collect(),
        selected: best.0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustnessReport {
    pub seeds: Vec<u64>,
    pub final_log_likelihoods: Vec<f64>,
    pub mean: f64,
    /// Sample standard deviation.
    pub std: f64,
    /// `std / |mean|`.
    pub cv: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Fits `n_runs` chains with seeds `cfg.seed, cfg.seed + 1, ...` and
/// summarizes the spread of their final log-likelihoods.
pub fn robustness_check(
    docs: &[CleanDoc],
    vocab: &Vocabulary,
    cfg: &LdaConfig,
    n_runs: usize,
    threshold: f64,
) -> Result<RobustnessReport, TopicError> {
    let seeds: Vec<u64> = (0..n_runs as u64)
        .map(|i| cfg.seed.wrapping_add(i))
        .collect();
    robustness_check_with_seeds(docs, vocab, cfg, &seeds, threshold)
}

/// [`robustness_check`] with explicit seeds. Passes iff the coefficient of
/// variation is at most `threshold`.
pub fn robustness_check_with_seeds(
    docs: &[CleanDoc],
    vocab: &Vocabulary,
    cfg: &LdaConfig,
    seeds: &[u64],
    threshold: f64,
) -> Result<RobustnessReport, TopicError> {
    if seeds.len() < 2 {
        return Err(TopicError::InvalidConfig(
            "robustness check needs at least two runs".into(),
        ));
    }
    let finals: Vec<f64> = seeds
        .par_iter()
        .map(|&seed| {
            let cfg = LdaConfig {
                seed,
                ..cfg.clone()
            };
            fit_lda(docs, vocab, &cfg).map(|m| m.final_log_likelihood())
        })
        .collect::<Result<_, _>>()?;
    let n = finals.len() as f64;
    let mean = finals.iter().sum::<f64>() / n;
    let var = finals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let std = var.sqrt();
    let cv = std / mean.abs();
    Ok(RobustnessReport {
        seeds: seeds.to_vec(),
        final_log_likelihoods: finals,
        mean,
        std,
        cv,
        threshold,
        pass: cv <= threshold,
    })
}
