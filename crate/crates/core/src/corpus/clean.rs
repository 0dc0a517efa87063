#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CleanOptions {
    /// Keep apostrophes inside words (`won't`, `it's`). Needed by the
    /// negation rules of the compound-score engine.
    pub keep_apostrophes: bool,
}

impl Default for CleanOptions {
    fn default() -> Self {
        CleanOptions {
            keep_apostrophes: true,
        }
    }
}

pub fn clean_text(raw: &str) -> String {
    clean_text_with(raw, &CleanOptions::default())
}

fn is_url(token: &str) -> bool {
    let lower = token.to_lowercase();
    lower.starts_with("http://") || lower.starts_with("https://") || lower.starts_with("www.")
}

fn is_apostrophe(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}' | '\u{2018}')
}

/// Removes URLs and `@` mentions, reduces everything else to lowercase
/// alphanumerics (plus inner apostrophes) separated by single spaces.
///
/// Whole-token rules (URL, mention) run on the whitespace split of the raw
/// text before any character filtering. Every other non-alphanumeric
/// character becomes a word boundary, so `#vaccine` keeps `vaccine` and
/// `covid-19` becomes `covid 19`.
pub fn clean_text_with(raw: &str, opts: &CleanOptions) -> String {
    let mut buf = String::with_capacity(raw.len());
    for token in raw.split_whitespace() {
        if token.starts_with('@') || is_url(token) {
            continue;
        }
        buf.push(' ');
        for c in token.chars() {
            if c.is_alphanumeric() {
                // Lowercasing may emit combining marks (e.g. U+0130), which
                // are not alphanumeric themselves.
                buf.extend(c.to_lowercase().filter(|l| l.is_alphanumeric()));
            } else if opts.keep_apostrophes && is_apostrophe(c) {
                buf.push('\'');
            } else {
                buf.push(' ');
            }
        }
    }

    let mut out = String::with_capacity(buf.len());
    for word in buf.split_whitespace() {
        let word = word.trim_matches('\'');
        if word.is_empty() {
            continue;
        }
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(word);
    }
    out
}
