use std::collections::HashMap;
use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{Classification, SentimentEngine, SentimentError, SentimentLabel};
use crate::corpus::CleanDoc;

/// Constants of the compound-score rules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CompoundParams {
    /// Magnitude a negated valence keeps after its sign flips.
    pub negation_damping: f64,
    /// Increment for booster entries that do not specify one.
    pub booster_default: f64,
    /// `cs = s / sqrt(s^2 + normalization)`.
    pub normalization: f64,
    /// How many preceding tokens are searched for a negator.
    pub negation_window: usize,
    /// Documents with `cs <= threshold` are negative.
    pub threshold: f64,
}

impl Default for CompoundParams {
    fn default() -> Self {
        CompoundParams {
            negation_damping: 0.74,
            booster_default: 0.293,
            normalization: 15.0,
            negation_window: 3,
            threshold: -0.05,
        }
    }
}

/// Word valences in `[-4, 4]`, booster increments and negators.
#[derive(Debug, Clone, PartialEq)]
pub struct ValenceLexicon {
    valence: HashMap<String, f64>,
    boosters: HashMap<String, f64>,
    negators: HashSet<String>,
}

impl ValenceLexicon {
    pub fn new(
        valence: HashMap<String, f64>,
        boosters: HashMap<String, f64>,
        negators: HashSet<String>,
    ) -> Result<Self, SentimentError> {
        for (t, v) in &valence {
            if !v.is_finite() || !(-4.0..=4.0).contains(v) {
                return Err(SentimentError::InvalidLexicon(format!(
                    "valence of `{t}` is {v}, outside [-4, 4]"
                )));
            }
        }
        for (t, b) in &boosters {
            if !b.is_finite() {
                return Err(SentimentError::InvalidLexicon(format!(
                    "booster `{t}` has increment {b}"
                )));
            }
        }
        if let Some(t) = negators.iter().filter(|n| valence.contains_key(*n)).min() {
            return Err(SentimentError::InvalidLexicon(format!(
                "negator `{t}` also carries a valence"
            )));
        }
        Ok(ValenceLexicon {
            valence,
            boosters,
            negators,
        })
    }

    /// Parses the sectioned CSV format:
    ///
    /// ```text
    /// term,valence
    /// good,1.9
    /// [boosters]
    /// very,0.293
    /// slightly,-0.293
    /// really
    /// [negators]
    /// not
    /// ```
    ///
    /// A booster without an increment gets `params.booster_default`.
    pub fn parse(text: &str, params: &CompoundParams) -> Result<Self, SentimentError> {
        #[derive(Clone, Copy)]
        enum Section {
            Valence,
            Boosters,
            Negators,
        }
        let mut section = Section::Valence;
        let mut valence = HashMap::new();
        let mut boosters = HashMap::new();
        let mut negators = HashSet::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match line.to_ascii_lowercase().as_str() {
                "[valence]" => {
                    section = Section::Valence;
                    continue;
                }
                "[boosters]" => {
                    section = Section::Boosters;
                    continue;
                }
                "[negators]" => {
                    section = Section::Negators;
                    continue;
                }
                "term,valence" | "term,increment" | "term" => continue,
                _ => {}
            }
            let mut fields = line.split(',').map(str::trim);
            let term = fields.next().unwrap_or_default().to_lowercase();
            let value = fields.next();
            let bad = |what: &str| {
                SentimentError::InvalidLexicon(format!("line {}: {what}: `{raw}`", no + 1))
            };
            match section {
                Section::Valence => {
                    let v = value
                        .ok_or_else(|| bad("missing valence"))?
                        .parse::<f64>()
                        .map_err(|_| bad("unparseable valence"))?;
                    valence.insert(term, v);
                }
                Section::Boosters => {
                    let b = match value {
                        Some(v) if !v.is_empty() => {
                            v.parse::<f64>().map_err(|_| bad("unparseable increment"))?
                        }
                        _ => params.booster_default,
                    };
                    boosters.insert(term, b);
                }
                Section::Negators => {
                    negators.insert(term);
                }
            }
        }
        Self::new(valence, boosters, negators)
    }

    pub fn valence(&self, term: &str) -> Option<f64> {
        self.valence.get(term).copied()
    }

    pub fn booster(&self, term: &str) -> Option<f64> {
        self.boosters.get(term).copied()
    }

    pub fn is_negator(&self, term: &str) -> bool {
        self.negators.contains(term)
    }
}

/// Largest double strictly below one.
const BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

/// Label rule: negative iff `cs <= threshold` (inclusive).
pub fn compound_label(cs: f64, params: &CompoundParams) -> SentimentLabel {
    if cs <= params.threshold {
        SentimentLabel::Negative
    } else {
        SentimentLabel::NonNegative
    }
}

/// Sum of rule-adjusted valences, normalized into `(-1, 1)`.
///
/// For each token with a valence: a booster directly before it moves the
/// valence away from zero by the booster's increment, then a negator among
/// the `negation_window` preceding tokens flips the sign and damps it.
pub fn compound_score(
    doc: &CleanDoc,
    lex: &ValenceLexicon,
    params: &CompoundParams,
) -> Result<Classification, SentimentError> {
    if doc.tokens.is_empty() {
        return Err(SentimentError::EmptyTokens { id: doc.id.clone() });
    }
    let tokens = &doc.tokens;
    let mut sum = 0.0;
    for (i, tok) in tokens.iter().enumerate() {
        let Some(mut v) = lex.valence(tok) else {
            continue;
        };
        if v != 0.0 {
            if let Some(b) = i.checked_sub(1).and_then(|p| lex.booster(&tokens[p])) {
                v += b * v.signum();
            }
        }
        let start = i.saturating_sub(params.negation_window);
        if tokens[start..i].iter().any(|t| lex.is_negator(t)) {
            v *= -params.negation_damping;
        }
        sum += v;
    }
    let cs = (sum / (sum * sum + params.normalization).sqrt()).clamp(-BELOW_ONE, BELOW_ONE);
    Ok(Classification {
        score: cs,
        label: compound_label(cs, params),
    })
}

pub struct CompoundEngine {
    pub lexicon: ValenceLexicon,
    pub params: CompoundParams,
}

impl SentimentEngine for CompoundEngine {
    fn name(&self) -> &str {
        "compound"
    }

    fn classify(&self, doc: &CleanDoc) -> Result<Classification, SentimentError> {
        compound_score(doc, &self.lexicon, &self.params)
    }
}
