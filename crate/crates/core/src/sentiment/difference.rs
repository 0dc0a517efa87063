use std::collections::HashSet;

use super::{Classification, SentimentEngine, SentimentError, SentimentLabel};
use crate::corpus::CleanDoc;

/// Positive and negative emotion word lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarityLexicon {
    positive: HashSet<String>,
    negative: HashSet<String>,
}

impl PolarityLexicon {
    pub fn new<P, N>(positive: P, negative: N) -> Result<Self, SentimentError>
    where
        P: IntoIterator,
        P::Item: Into<String>,
        N: IntoIterator,
        N::Item: Into<String>,
    {
        let positive: HashSet<String> = positive.into_iter().map(Into::into).collect();
        let negative: HashSet<String> = negative.into_iter().map(Into::into).collect();
        if let Some(t) = positive.intersection(&negative).min() {
            return Err(SentimentError::InvalidLexicon(format!(
                "`{t}` is both positive and negative"
            )));
        }
        if positive.is_empty() && negative.is_empty() {
            return Err(SentimentError::InvalidLexicon(
                "polarity lexicon is empty".into(),
            ));
        }
        Ok(PolarityLexicon { positive, negative })
    }

    pub fn is_positive(&self, term: &str) -> bool {
        self.positive.contains(term)
    }

    pub fn is_negative(&self, term: &str) -> bool {
        self.negative.contains(term)
    }
}

/// Percentage of positive words minus percentage of negative words.
/// Negative iff the difference is below zero; a tie is non-negative.
pub fn score_difference(
    doc: &CleanDoc,
    lex: &PolarityLexicon,
) -> Result<Classification, SentimentError> {
    if doc.tokens.is_empty() {
        return Err(SentimentError::EmptyTokens { id: doc.id.clone() });
    }
    let (mut pos, mut neg) = (0usize, 0usize);
    for t in &doc.tokens {
        if lex.is_positive(t) {
            pos += 1;
        } else if lex.is_negative(t) {
            neg += 1;
        }
    }
    let diff = 100.0 * (pos as f64 - neg as f64) / doc.tokens.len() as f64;
    let label = if diff < 0.0 {
        SentimentLabel::Negative
    } else {
        SentimentLabel::NonNegative
    };
    Ok(Classification { score: diff, label })
}

pub struct DifferenceEngine {
    pub lexicon: PolarityLexicon,
}

impl SentimentEngine for DifferenceEngine {
    fn name(&self) -> &str {
        "difference"
    }

    fn classify(&self, doc: &CleanDoc) -> Result<Classification, SentimentError> {
        score_difference(doc, &self.lexicon)
    }
}
