use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::TopicError;

/// Human coding of one topic: a label plus the two screening answers
/// ("has a meaningful theme", "relevant to the query").
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopicLabel {
    pub topic: usize,
    pub label: String,
    pub q1: bool,
    pub q2: bool,
}

impl TopicLabel {
    pub fn retained(&self) -> bool {
        self.q1 && self.q2
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TopicLabels(BTreeMap<usize, TopicLabel>);

fn parse_bool(s: &str) -> Option<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "y" | "1" => Some(true),
        "false" | "no" | "n" | "0" => Some(false),
        _ => None,
    }
}

impl TopicLabels {
    pub fn new(labels: impl IntoIterator<Item = TopicLabel>) -> Self {
        TopicLabels(labels.into_iter().map(|l| (l.topic, l)).collect())
    }

    pub fn get(&self, topic: usize) -> Option<&TopicLabel> {
        self.0.get(&topic)
    }

    pub fn label(&self, topic: usize) -> &str {
        self.get(topic).map_or("", |l| l.label.as_str())
    }

    /// Reads `topic,label,q1,q2` rows. Booleans accept true/false, yes/no, 1/0.
    pub fn read<R: std::io::Read>(input: R) -> Result<Self, TopicError> {
        let mut r = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(input);
        let mut out = BTreeMap::new();
        for (i, row) in r.records().enumerate() {
            let row = row?;
            let bad = |reason: &str| TopicError::InvalidLabel {
                row: i + 1,
                reason: reason.to_string(),
            };
            if row.len() != 4 {
                return Err(bad("expected 4 columns"));
            }
            let topic: usize = row[0].parse().map_err(|_| bad("topic is not an index"))?;
            let q1 = parse_bool(&row[2]).ok_or_else(|| bad("q1 is not a boolean"))?;
            let q2 = parse_bool(&row[3]).ok_or_else(|| bad("q2 is not a boolean"))?;
            let label = TopicLabel {
                topic,
                label: row[1].to_string(),
                q1,
                q2,
            };
            if out.insert(topic, label).is_some() {
                return Err(bad("duplicate topic"));
            }
        }
        Ok(TopicLabels(out))
    }

    pub fn write<W: std::io::Write>(&self, out: W) -> Result<(), TopicError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["topic", "label", "q1", "q2"])?;
        for l in self.0.values() {
            w.write_record([
                l.topic.to_string(),
                l.label.clone(),
                l.q1.to_string(),
                l.q2.to_string(),
            ])?;
        }
        w.flush().map_err(|source| TopicError::Io {
            path: "topic labels".into(),
            source,
        })
    }
}

/// A template with every topic retained and labeled by its leading top words.
pub fn label_template(top_terms: &[Vec<String>], words_in_label: usize) -> TopicLabels {
    TopicLabels::new(top_terms.iter().enumerate().map(|(k, terms)| {
        TopicLabel {
            topic: k,
            label: terms
                .iter()
                .take(words_in_label)
                .cloned()
                .collect::<Vec<_>>()
                .join(" "),
            q1: true,
            q2: true,
        }
    }))
}

/// Topics that passed both screening questions, ascending. An empty result
/// is returned (with a warning) when every topic is excluded.
pub fn apply_topic_labels(
    topic_count: usize,
    labels: &TopicLabels,
) -> Result<Vec<usize>, TopicError> {
    let mut retained = Vec::new();
    for k in 0..topic_count {
        let l = labels.get(k).ok_or(TopicError::MissingLabel { topic: k })?;
        if l.retained() {
            retained.push(k);
        }
    }
    if retained.is_empty() {
        log::warn!("all {topic_count} topics were excluded by the label file");
    }
    Ok(retained)
}
