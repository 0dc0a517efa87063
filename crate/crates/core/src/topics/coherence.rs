use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::TopicError;
use crate::corpus::CleanDoc;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CoherenceParams {
    /// Sliding window length in tokens.
    pub window: usize,
    /// Added to joint probabilities inside the logarithms.
    pub epsilon: f64,
}

impl Default for CoherenceParams {
    fn default() -> Self {
        CoherenceParams {
            window: 110,
            epsilon: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherenceScores {
    pub per_topic: Vec<f64>,
    pub mean: f64,
}

/// Boolean window occurrence counts for a fixed word set.
struct WindowCounts {
    windows: u64,
    single: Vec<u64>,
    /// Upper triangle, `joint[i * n + j]` with `i < j`.
    joint: Vec<u64>,
    n: usize,
}

impl WindowCounts {
    fn collect(words: &HashMap<&str, usize>, reference: &[CleanDoc], window: usize) -> Self {
        let n = words.len();
        let mut counts = WindowCounts {
            windows: 0,
            single: vec![0; n],
            joint: vec![0; n * n],
            n,
        };
        let mut in_window = vec![0u32; n];
        let mut present: Vec<usize> = Vec::new();
        for doc in reference {
            let ids: Vec<Option<usize>> = doc
                .tokens
                .iter()
                .map(|t| words.get(t.as_str()).copied())
                .collect();
            if ids.is_empty() {
                continue;
            }
            let width = window.min(ids.len());
            in_window.iter_mut().for_each(|c| *c = 0);
            for id in ids[..width].iter().flatten() {
                in_window[*id] += 1;
            }
            let mut start = 0;
            loop {
                present.clear();
                present.extend((0..n).filter(|&i| in_window[i] > 0));
                counts.record(&present);
                let end = start + width;
                if end >= ids.len() {
                    break;
                }
                if let Some(id) = ids[start] {
                    in_window[id] -= 1;
                }
                if let Some(id) = ids[end] {
                    in_window[id] += 1;
                }
                start += 1;
            }
        }
        counts
    }

    fn record(&mut self, present: &[usize]) {
        self.windows += 1;
        for (a, &i) in present.iter().enumerate() {
            self.single[i] += 1;
            for &j in &present[a + 1..] {
                self.joint[i * self.n + j] += 1;
            }
        }
    }

    fn joint(&self, i: usize, j: usize) -> u64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.joint[i * self.n + j],
            std::cmp::Ordering::Greater => self.joint[j * self.n + i],
            std::cmp::Ordering::Equal => self.single[i],
        }
    }
}

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

/// C_V coherence of each topic's top words against a reference corpus.
///
/// Word and pair probabilities come from boolean sliding windows of
/// `params.window` tokens (documents shorter than the window are a single
/// window). Each top word is represented by its NPMI against every top word
/// of the topic; the topic score is the mean cosine between each such vector
/// and their sum.
pub fn coherence_cv(
    top_words: &[Vec<String>],
    reference: &[CleanDoc],
    params: &CoherenceParams,
) -> Result<CoherenceScores, TopicError> {
    if reference.iter().all(|d| d.tokens.is_empty()) {
        return Err(TopicError::EmptyCorpus);
    }
    if params.window == 0 {
        return Err(TopicError::InvalidConfig(
            "coherence window must be positive".into(),
        ));
    }
    if let Some(short) = top_words.iter().position(|t| t.len() < 2) {
        return Err(TopicError::InvalidConfig(format!(
            "topic {short} has fewer than two top words"
        )));
    }
    let mut ids: HashMap<&str, usize> = HashMap::new();
    for w in top_words.iter().flatten() {
        let next = ids.len();
        ids.entry(w.as_str()).or_insert(next);
    }
    let counts = WindowCounts::collect(&ids, reference, params.window);
    let mut by_id: Vec<&str> = vec![""; ids.len()];
    for (w, &i) in &ids {
        by_id[i] = w;
    }
    if let Some(i) = (0..ids.len())
        .filter(|&i| counts.single[i] == 0)
        .min_by_key(|&i| by_id[i])
    {
        return Err(TopicError::MissingReferenceWord {
            word: by_id[i].to_string(),
        });
    }

    let total = counts.windows as f64;
    let eps = params.epsilon;
    let npmi = |i: usize, j: usize| {
        let pi = counts.single[i] as f64 / total;
        let pj = counts.single[j] as f64 / total;
        let pij = counts.joint(i, j) as f64 / total + eps;
        (pij / (pi * pj)).ln() / -pij.ln()
    };

    let per_topic: Vec<f64> = top_words
        .iter()
        .map(|topic| {
            let idx: Vec<usize> = topic.iter().map(|w| ids[w.as_str()]).collect();
            let vectors: Vec<Vec<f64>> = idx
                .iter()
                .map(|&i| idx.iter().map(|&j| npmi(i, j)).collect())
                .collect();
            let mut sum = vec![0.0; idx.len()];
            for v in &vectors {
                for (s, x) in sum.iter_mut().zip(v) {
                    *s += x;
                }
            }
            let score = vectors.iter().map(|v| cosine(v, &sum)).sum::<f64>() / vectors.len() as f64;
            score.clamp(-1.0, 1.0)
        })
        .collect();
    let mean = per_topic.iter().sum::<f64>() / per_topic.len().max(1) as f64;
    Ok(CoherenceScores { per_topic, mean })
}
