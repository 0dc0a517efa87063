#![allow(dead_code)]

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use chrono::{TimeZone, Utc};
use sentopic::corpus::io::read_corpus;
use sentopic::corpus::{build_vocabulary, CleanDoc, Vocabulary};
use sentopic::pipeline::PipelineConfig;
use sentopic::topics::TopicModel;

pub fn manifest_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

pub fn fixture(name: &str) -> PathBuf {
    manifest_dir().join("tests/fixtures").join(name)
}

pub fn golden_dir() -> PathBuf {
    manifest_dir().join("data/golden")
}

/// The bundled 200-document, two-topic corpus and each document's topic.
pub fn planted2() -> (Vec<CleanDoc>, Vocabulary, Vec<usize>) {
    let docs = read_corpus(&fixture("planted2.jsonl")).unwrap();
    let mut r = csv::Reader::from_path(fixture("planted2_truth.csv")).unwrap();
    let truth: HashMap<String, usize> = r
        .deserialize::<(String, usize)>()
        .map(|row| row.unwrap())
        .collect();
    let topics = docs.iter().map(|d| truth[&d.id]).collect();
    let vocab = build_vocabulary(&docs).unwrap();
    (docs, vocab, topics)
}

/// Golden config with its output redirected to `out`.
pub fn golden_config(out: &Path) -> PipelineConfig {
    let mut cfg = PipelineConfig::load(&golden_dir().join("config.toml")).unwrap();
    cfg.out_dir = out.to_path_buf();
    cfg
}

pub fn doc(id: &str, tokens: &[&str]) -> CleanDoc {
    CleanDoc {
        id: id.to_string(),
        timestamp: Utc.with_ymd_and_hms(2021, 1, 1, 0, 0, 0).unwrap(),
        author_id: "a".into(),
        tokens: tokens.iter().map(|s| s.to_string()).collect(),
    }
}

/// `(n_dk, n_kw, n_k)` recounted from the stored assignments.
pub fn recount(model: &TopicModel) -> (Vec<u32>, Vec<u32>, Vec<u32>) {
    let (t, v) = (model.topic_count(), model.vocab_size());
    let mut n_dk = vec![0; model.doc_count() * t];
    let mut n_kw = vec![0; t * v];
    let mut n_k = vec![0; t];
    for (d, (words, topics)) in model.docs().iter().zip(model.assignments()).enumerate() {
        for (&w, &k) in words.iter().zip(topics) {
            n_dk[d * t + k] += 1;
            n_kw[k * v + w] += 1;
            n_k[k] += 1;
        }
    }
    (n_dk, n_kw, n_k)
}

/// Share of documents whose dominant θ topic, after matching fitted topics
/// to planted ones by majority vote, equals the planted topic. Also returns
/// the matching `fitted -> planted`.
pub fn dominant_accuracy(model: &TopicModel, truth: &[usize], planted: usize) -> (f64, Vec<usize>) {
    let t = model.topic_count();
    let dominant: Vec<usize> = model
        .theta()
        .iter_rows()
        .map(|r| (0..t).max_by(|&a, &b| r[a].total_cmp(&r[b])).unwrap())
        .collect();
    let mut votes = vec![vec![0usize; planted]; t];
    for (&f, &p) in dominant.iter().zip(truth) {
        votes[f][p] += 1;
    }
    let map: Vec<usize> = votes
        .iter()
        .map(|v| (0..planted).max_by_key(|&p| v[p]).unwrap())
        .collect();
    let hits = dominant
        .iter()
        .zip(truth)
        .filter(|(&f, &p)| map[f] == p)
        .count();
    (hits as f64 / truth.len() as f64, map)
}
