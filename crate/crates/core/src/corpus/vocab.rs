use std::collections::{BTreeSet, HashMap};

use super::{CleanDoc, CorpusError};

/// Term/index bijection with corpus and document frequencies.
///
/// Indices are assigned in lexicographic term order, so the vocabulary does
/// not depend on document order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
    freq: Vec<u64>,
    doc_freq: Vec<u64>,
}

pub fn build_vocabulary(docs: &[CleanDoc]) -> Result<Vocabulary, CorpusError> {
    if docs.is_empty() || docs.iter().all(CleanDoc::is_empty) {
        return Err(CorpusError::EmptyCorpus);
    }
    let terms: Vec<String> = docs
        .iter()
        .flat_map(|d| d.tokens.iter())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .cloned()
        .collect();
    let index: HashMap<String, usize> = terms
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i))
        .collect();
    let mut freq = vec![0u64; terms.len()];
    let mut doc_freq = vec![0u64; terms.len()];
    let mut last_doc = vec![usize::MAX; terms.len()];
    for (d, doc) in docs.iter().enumerate() {
        for tok in &doc.tokens {
            let i = index[tok];
            freq[i] += 1;
            if last_doc[i] != d {
                last_doc[i] = d;
                doc_freq[i] += 1;
            }
        }
    }
    Ok(Vocabulary {
        terms,
        index,
        freq,
        doc_freq,
    })
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn index(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn term(&self, index: usize) -> &str {
        &self.terms[index]
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn freq(&self, index: usize) -> u64 {
        self.freq[index]
    }

    pub fn doc_freq(&self, index: usize) -> u64 {
        self.doc_freq[index]
    }

    pub fn total_tokens(&self) -> u64 {
        self.freq.iter().sum()
    }

    /// Maps a document's tokens to term indices.
    pub fn encode(&self, doc: &CleanDoc) -> Result<Vec<usize>, CorpusError> {
        doc.tokens
            .iter()
            .map(|t| {
                self.index(t).ok_or_else(|| CorpusError::UnknownTerm {
                    id: doc.id.clone(),
                    term: t.clone(),
                })
            })
            .collect()
    }

    /// Writes `term,index,freq,doc_freq` rows.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<(), CorpusError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["term", "index", "freq", "doc_freq"])?;
        for (i, t) in self.terms.iter().enumerate() {
            w.write_record([
                t.clone(),
                i.to_string(),
                self.freq[i].to_string(),
                self.doc_freq[i].to_string(),
            ])?;
        }
        w.flush().map_err(|source| CorpusError::Io {
            path: "vocabulary".into(),
            source,
        })?;
        Ok(())
    }
}
