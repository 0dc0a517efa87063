use std::collections::HashMap;

use super::CleanDoc;

/// Posts with fewer cleaned tokens than this are dropped.
pub const MIN_TOKENS: usize = 5;

/// Drops repeated posts by the same author and posts shorter than
/// [`MIN_TOKENS`]. Two posts are duplicates when they share the author and
/// the exact cleaned token sequence; the earliest one (by timestamp, then by
/// input position) is kept. Survivors keep their input order.
pub fn filter_corpus(docs: Vec<CleanDoc>) -> Vec<CleanDoc> {
    let mut keeper: HashMap<(&str, &[String]), usize> = HashMap::new();
    for (i, doc) in docs.iter().enumerate() {
        keeper
            .entry((doc.author_id.as_str(), doc.tokens.as_slice()))
            .and_modify(|k| {
                if doc.timestamp < docs[*k].timestamp {
                    *k = i;
                }
            })
            .or_insert(i);
    }
    let mut keep = vec![false; docs.len()];
    for &i in keeper.values() {
        keep[i] = docs[i].tokens.len() >= MIN_TOKENS;
    }
    docs.into_iter()
        .zip(keep)
        .filter_map(|(d, k)| k.then_some(d))
        .collect()
}
