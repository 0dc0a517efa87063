//! Lexicon, gold-label and prediction files.

use std::collections::HashMap;
use std::path::Path;

use super::{
    Classification, CompoundParams, GoldRecord, PolarityLexicon, SentimentError, SentimentLabel,
    ValenceLexicon,
};
use crate::format::sig6;

const SAMPLE_VALENCE: &str = include_str!("../../data/valence_sample.csv");
const SAMPLE_POSITIVE: &str = include_str!("../../data/polarity_positive.txt");
const SAMPLE_NEGATIVE: &str = include_str!("../../data/polarity_negative.txt");

fn read(path: &Path) -> Result<String, SentimentError> {
    std::fs::read_to_string(path).map_err(|source| SentimentError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn term_list(text: &str) -> impl Iterator<Item = String> + '_ {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
}

/// The bundled sample valence lexicon (a stand-in, not a complete lexicon).
pub fn sample_valence_lexicon(params: &CompoundParams) -> ValenceLexicon {
    ValenceLexicon::parse(SAMPLE_VALENCE, params).expect("bundled valence lexicon is valid")
}

/// The bundled sample polarity word lists.
pub fn sample_polarity_lexicon() -> PolarityLexicon {
    PolarityLexicon::new(term_list(SAMPLE_POSITIVE), term_list(SAMPLE_NEGATIVE))
        .expect("bundled polarity lists are valid")
}

pub fn load_valence_lexicon(
    path: &Path,
    params: &CompoundParams,
) -> Result<ValenceLexicon, SentimentError> {
    ValenceLexicon::parse(&read(path)?, params)
}

pub fn load_polarity_lexicon(
    positive: &Path,
    negative: &Path,
) -> Result<PolarityLexicon, SentimentError> {
    let pos = read(positive)?;
    let neg = read(negative)?;
    PolarityLexicon::new(term_list(&pos), term_list(&neg))
}

/// Reads `id,coder_a,coder_b` rows with `NEG`/`NONNEG` labels.
pub fn read_gold<R: std::io::Read>(input: R) -> Result<Vec<GoldRecord>, SentimentError> {
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut out = Vec::new();
    for row in r.deserialize::<(String, String, String)>() {
        let (id, a, b) = row?;
        out.push(GoldRecord {
            id,
            coder_a: a.parse()?,
            coder_b: b.parse()?,
        });
    }
    Ok(out)
}

pub fn load_gold(path: &Path) -> Result<Vec<GoldRecord>, SentimentError> {
    read_gold(read(path)?.as_bytes())
}

/// One row of the sentiment output table.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub id: String,
    pub engine: String,
    pub score: f64,
    pub label: SentimentLabel,
}

impl Prediction {
    pub fn new(id: &str, engine: &str, c: Classification) -> Self {
        Prediction {
            id: id.to_string(),
            engine: engine.to_string(),
            score: c.score,
            label: c.label,
        }
    }
}

pub fn write_predictions<W: std::io::Write>(
    out: W,
    rows: &[Prediction],
) -> Result<(), SentimentError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["id", "engine", "score", "label"])?;
    for p in rows {
        w.write_record([
            p.id.as_str(),
            p.engine.as_str(),
            &sig6(p.score),
            p.label.as_str(),
        ])?;
    }
    w.flush().map_err(|source| SentimentError::Io {
        path: "predictions".into(),
        source,
    })
}

pub fn read_predictions<R: std::io::Read>(input: R) -> Result<Vec<Prediction>, SentimentError> {
    let mut r = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for row in r.deserialize::<(String, String, f64, String)>() {
        let (id, engine, score, label) = row?;
        out.push(Prediction {
            id,
            engine,
            score,
            label: label.parse()?,
        });
    }
    Ok(out)
}

/// `id -> label` view of a prediction table.
pub fn label_map(rows: &[Prediction]) -> HashMap<String, SentimentLabel> {
    rows.iter().map(|p| (p.id.clone(), p.label)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_lexicons_load() {
        let p = CompoundParams::default();
        let v = sample_valence_lexicon(&p);
        assert_eq!(v.valence("great"), Some(3.1));
        assert_eq!(v.booster("slightly"), Some(-0.293));
        assert!(v.is_negator("won't"));
        let pol = sample_polarity_lexicon();
        assert!(pol.is_positive("hope"));
        assert!(pol.is_negative("cried"));
    }

    #[test]
    fn gold_parsing() {
        let g = read_gold("id,coder_a,coder_b\n1,NEG,NEG\n2, nonneg ,NEG\n".as_bytes()).unwrap();
        assert_eq!(g.len(), 2);
        assert!(g[0].is_unanimous());
        assert!(!g[1].is_unanimous());
        assert!(read_gold("id,coder_a,coder_b\n1,POS,NEG\n".as_bytes()).is_err());
    }

    #[test]
    fn predictions_round_trip() {
        let rows = vec![Prediction {
            id: "a".into(),
            engine: "compound".into(),
            score: -0.25,
            label: SentimentLabel::Negative,
        }];
        let mut buf = Vec::new();
        write_predictions(&mut buf, &rows).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "id,engine,score,label\na,compound,-0.25,NEG\n"
        );
        assert_eq!(read_predictions(buf.as_slice()).unwrap(), rows);
    }
}
