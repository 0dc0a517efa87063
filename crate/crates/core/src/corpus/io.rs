//! JSON Lines readers and writers for raw posts and the cleaned corpus.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use chrono::{DateTime, SubsecRound, Utc};
use serde::Deserialize;

use super::{AuthorClass, CleanDoc, CorpusError, RawPost};

#[derive(Deserialize)]
struct PostRecord {
    id: String,
    text: String,
    created_at: String,
    author_id: String,
    #[serde(default)]
    author_class: Option<AuthorClass>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CorpusError + '_ {
    move |source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Parses one raw post from a JSON object. Timestamps may carry any offset;
/// they are converted to UTC and truncated to whole seconds.
pub fn parse_post(line: &str, line_no: usize) -> Result<RawPost, CorpusError> {
    let invalid = |reason: String| CorpusError::InvalidRecord {
        line: line_no,
        reason,
    };
    let rec: PostRecord = serde_json::from_str(line).map_err(|e| invalid(e.to_string()))?;
    if rec.id.is_empty() {
        return Err(invalid("empty id".into()));
    }
    let timestamp = DateTime::parse_from_rfc3339(&rec.created_at)
        .map_err(|e| {
            invalid(format!(
                "post {}: bad created_at `{}`: {e}",
                rec.id, rec.created_at
            ))
        })?
        .with_timezone(&Utc)
        .trunc_subsecs(0);
    Ok(RawPost {
        id: rec.id,
        text: rec.text,
        timestamp,
        author_id: rec.author_id,
        author_class: rec.author_class.unwrap_or_default(),
    })
}

pub fn read_posts(path: &Path) -> Result<Vec<RawPost>, CorpusError> {
    let reader = BufReader::new(File::open(path).map_err(io_err(path))?);
    let mut posts = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        posts.push(parse_post(&line, i + 1)?);
    }
    Ok(posts)
}

pub fn write_corpus(path: &Path, docs: &[CleanDoc]) -> Result<(), CorpusError> {
    let mut w = BufWriter::new(File::create(path).map_err(io_err(path))?);
    for d in docs {
        let line = serde_json::to_string(d).expect("CleanDoc serializes");
        writeln!(w, "{line}").map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

pub fn read_corpus(path: &Path) -> Result<Vec<CleanDoc>, CorpusError> {
    let reader = BufReader::new(File::open(path).map_err(io_err(path))?);
    let mut docs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let doc: CleanDoc =
            serde_json::from_str(&line).map_err(|e| CorpusError::InvalidRecord {
                line: i + 1,
                reason: e.to_string(),
            })?;
        docs.push(doc);
    }
    Ok(docs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_offsets_to_utc() {
        let p = parse_post(
            r#"{"id":"1","text":"hi","created_at":"2020-11-30T23:30:00.75-05:00","author_id":"u"}"#,
            1,
        )
        .unwrap();
        assert_eq!(p.timestamp.to_rfc3339(), "2020-12-01T04:30:00+00:00");
        assert_eq!(p.author_class, AuthorClass::Unknown);
    }

    #[test]
    fn rejects_bad_records() {
        assert!(parse_post(
            r#"{"id":"","text":"","created_at":"2020-11-01T00:00:00Z","author_id":"u"}"#,
            3
        )
        .is_err());
        let err = parse_post(
            r#"{"id":"9","text":"","created_at":"yesterday","author_id":"u"}"#,
            4,
        )
        .unwrap_err();
        assert!(err.to_string().contains("line 4"));
    }

    #[test]
    fn corpus_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        let doc = CleanDoc {
            id: "x".into(),
            timestamp: DateTime::parse_from_rfc3339("2021-01-02T03:04:05Z")
                .unwrap()
                .with_timezone(&Utc),
            author_id: "u".into(),
            tokens: vec!["a".into(), "won't".into()],
        };
        write_corpus(&path, std::slice::from_ref(&doc)).unwrap();
        assert_eq!(read_corpus(&path).unwrap(), vec![doc]);
    }
}
