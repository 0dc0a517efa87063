use std::collections::HashSet;
use std::path::Path;

use super::CorpusError;

const DEFAULT_ENGLISH: &str = include_str!("../../data/stopwords_en.txt");

/// A stop-word list: one term per line, `#` lines are comments.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopWords(HashSet<String>);

impl StopWords {
    pub fn english() -> Self {
        Self::parse(DEFAULT_ENGLISH)
    }

    pub fn parse(text: &str) -> Self {
        StopWords(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_lowercase)
                .collect(),
        )
    }

    pub fn load(path: &Path) -> Result<Self, CorpusError> {
        let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(Self::parse(&text))
    }

    pub fn contains(&self, term: &str) -> bool {
        self.0.contains(term)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<S: Into<String>> FromIterator<S> for StopWords {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        StopWords(iter.into_iter().map(Into::into).collect())
    }
}

/// Splits cleaned text on whitespace and drops stop words.
pub fn tokenize(text: &str, stopwords: &StopWords) -> Vec<String> {
    text.split_whitespace()
        .filter(|t| !stopwords.contains(t))
        .map(str::to_owned)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn removes_stopwords_in_order() {
        let sw: StopWords = ["the"].into_iter().collect();
        assert_eq!(tokenize("the vaccine works", &sw), ["vaccine", "works"]);
    }

    #[test]
    fn all_stopwords() {
        let sw: StopWords = ["a", "the", "is"].into_iter().collect();
        assert!(tokenize("the a is the", &sw).is_empty());
    }

    #[test]
    fn ten_tokens_three_hits() {
        let sw: StopWords = ["the", "and", "of"].into_iter().collect();
        let text = "nurses gave the shots and everyone felt proud of rollout";
        assert_eq!(text.split_whitespace().count(), 10);
        assert_eq!(tokenize(text, &sw).len(), 7);
    }

    #[test]
    fn parse_skips_comments_and_blanks() {
        let sw = StopWords::parse("# header\nthe\n\n  And \n#x\n");
        assert_eq!(sw.len(), 2);
        assert!(sw.contains("and"));
        assert!(!sw.contains("#x"));
    }

    #[test]
    fn default_list_loaded() {
        let sw = StopWords::english();
        assert!(sw.len() > 500);
        assert!(sw.contains("the"));
        assert!(!sw.contains("vaccine"));
    }
}
