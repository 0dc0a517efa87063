//! Model directory layout and the top-words table.
//!
//! A model directory holds `phi.csv` (topic × term), `theta.csv`
//! (document × topic), `assignments.csv` (one row per token) and
//! `meta.json`. Probabilities are written in shortest round-trip form so a
//! reloaded θ is bit-identical.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{LdaConfig, TopicError, TopicModel};
use crate::corpus::Vocabulary;
use crate::format::sig6;
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelMeta {
    pub config: LdaConfig,
    pub alpha: f64,
    pub beta: f64,
    pub topic_count: usize,
    pub vocab_size: usize,
    pub doc_count: usize,
    pub final_log_likelihood: f64,
    pub log_likelihood_trace: Vec<f64>,
}

fn create(path: &Path) -> Result<csv::Writer<BufWriter<File>>, TopicError> {
    let f = File::create(path).map_err(|source| TopicError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(csv::Writer::from_writer(BufWriter::new(f)))
}

fn flush<W: Write>(w: &mut csv::Writer<W>, path: &Path) -> Result<(), TopicError> {
    w.flush().map_err(|source| TopicError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_model(
    dir: &Path,
    model: &TopicModel,
    vocab: &Vocabulary,
    cfg: &LdaConfig,
) -> Result<(), TopicError> {
    std::fs::create_dir_all(dir).map_err(|source| TopicError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let t = model.topic_count();

    let path = dir.join("phi.csv");
    let mut w = create(&path)?;
    let mut header = vec!["topic".to_string()];
    header.extend(vocab.terms().iter().cloned());
    w.write_record(&header)?;
    for (k, row) in model.phi().iter_rows().enumerate() {
        let mut rec = vec![k.to_string()];
        rec.extend(row.iter().map(f64::to_string));
        w.write_record(&rec)?;
    }
    flush(&mut w, &path)?;

    let path = dir.join("theta.csv");
    let mut w = create(&path)?;
    let mut header = vec!["doc_id".to_string()];
    header.extend((0..t).map(|k| format!("t{k}")));
    w.write_record(&header)?;
    for (id, row) in model.doc_ids().iter().zip(model.theta().iter_rows()) {
        let mut rec = vec![id.clone()];
        rec.extend(row.iter().map(f64::to_string));
        w.write_record(&rec)?;
    }
    flush(&mut w, &path)?;

    let path = dir.join("assignments.csv");
    let mut w = create(&path)?;
    w.write_record(["doc_id", "position", "term", "topic"])?;
    for ((id, doc), z) in model
        .doc_ids()
        .iter()
        .zip(model.docs())
        .zip(model.assignments())
    {
        for (i, (&word, &topic)) in doc.iter().zip(z).enumerate() {
            w.write_record([
                id.as_str(),
                &i.to_string(),
                vocab.term(word),
                &topic.to_string(),
            ])?;
        }
    }
    flush(&mut w, &path)?;

    let meta = ModelMeta {
        config: cfg.clone(),
        alpha: model.alpha(),
        beta: model.beta(),
        topic_count: t,
        vocab_size: model.vocab_size(),
        doc_count: model.doc_count(),
        final_log_likelihood: model.final_log_likelihood(),
        log_likelihood_trace: model.log_likelihood_trace().to_vec(),
    };
    let path = dir.join("meta.json");
    let text = serde_json::to_string_pretty(&meta)?;
    std::fs::write(&path, text + "\n").map_err(|source| TopicError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Reads `theta.csv` back as document ids and the θ matrix.
pub fn read_theta(path: &Path) -> Result<(Vec<String>, Matrix), TopicError> {
    let mut r = csv::Reader::from_path(path)?;
    let mut ids = Vec::new();
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        ids.push(rec[0].to_string());
        let row = rec
            .iter()
            .skip(1)
            .map(|x| {
                x.parse::<f64>().map_err(|_| {
                    TopicError::InvalidConfig(format!("theta row {}: bad number `{x}`", i + 1))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok((ids, Matrix::from_rows(rows)))
}

pub fn read_meta(path: &Path) -> Result<ModelMeta, TopicError> {
    let text = std::fs::read_to_string(path).map_err(|source| TopicError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}

/// Writes `topic,rank,term,probability` rows.
pub fn write_top_words<W: Write>(
    out: W,
    model: &TopicModel,
    vocab: &Vocabulary,
    n: usize,
) -> Result<(), TopicError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["topic", "rank", "term", "probability"])?;
    for (k, words) in super::top_words(model, n).into_iter().enumerate() {
        for (rank, word) in words.into_iter().enumerate() {
            w.write_record([
                k.to_string(),
                (rank + 1).to_string(),
                vocab.term(word).to_string(),
                sig6(model.phi().get(k, word)),
            ])?;
        }
    }
    w.flush().map_err(|source| TopicError::Io {
        path: "top words".into(),
        source,
    })
}

/// Reads a top-words table back into per-topic term lists.
pub fn read_top_words(path: &Path) -> Result<Vec<Vec<String>>, TopicError> {
    let mut r = csv::Reader::from_path(path)?;
    let mut out: Vec<Vec<String>> = Vec::new();
    for rec in r.deserialize::<(usize, usize, String, f64)>() {
        let (k, _, term, _) = rec?;
        if out.len() <= k {
            out.resize_with(k + 1, Vec::new);
        }
        out[k].push(term);
    }
    Ok(out)
}
