use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{SentimentError, SentimentLabel};

/// Two human codings of one document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldRecord {
    pub id: String,
    pub coder_a: SentimentLabel,
    pub coder_b: SentimentLabel,
}

impl GoldRecord {
    pub fn is_unanimous(&self) -> bool {
        self.coder_a == self.coder_b
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub engine: String,
    pub n_gold_used: usize,
    pub n_matches: usize,
    /// Percentage rounded half-up to two decimals.
    pub agreement: f64,
}

/// `100 * matches / used` rounded half-up to hundredths, in exact integer
/// arithmetic.
fn percent_2dp(matches: usize, used: usize) -> f64 {
    let (m, n) = (matches as u128, used as u128);
    let hundredths = (20_000 * m + n) / (2 * n);
    hundredths as f64 / 100.0
}

/// Scores an engine's predictions against the records both coders agreed on.
/// Records with disagreeing coders are ignored and need no prediction.
pub fn evaluate_agreement(
    engine: &str,
    predictions: &HashMap<String, SentimentLabel>,
    gold: &[GoldRecord],
) -> Result<AgreementReport, SentimentError> {
    let mut used = 0;
    let mut matches = 0;
    for rec in gold.iter().filter(|r| r.is_unanimous()) {
        let pred = predictions
            .get(&rec.id)
            .ok_or_else(|| SentimentError::MissingPrediction { id: rec.id.clone() })?;
        used += 1;
        if *pred == rec.coder_a {
            matches += 1;
        }
    }
    if used == 0 {
        return Err(SentimentError::NoUnanimousRecords);
    }
    Ok(AgreementReport {
        engine: engine.to_string(),
        n_gold_used: used,
        n_matches: matches,
        agreement: percent_2dp(matches, used),
    })
}

/// Engine with the highest agreement; ties go to the lexicographically
/// smaller engine name.
pub fn select_engine(reports: &[AgreementReport]) -> Result<&str, SentimentError> {
    reports
        .iter()
        .max_by(|a, b| {
            a.agreement
                .total_cmp(&b.agreement)
                .then_with(|| b.engine.cmp(&a.engine))
        })
        .map(|r| r.engine.as_str())
        .ok_or(SentimentError::NoReports)
}
