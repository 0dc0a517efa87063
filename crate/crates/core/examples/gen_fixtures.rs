//! Regenerates the bundled corpora:
//!
//! - `data/golden/{posts.jsonl, gold_labels.csv, topic_labels.csv}`
//! - `tests/fixtures/planted2.jsonl` and `planted2_truth.csv`
//!
//! The golden label file is derived by fitting the configured model and
//! naming each topic after the generating vocabulary it matches; the sink
//! topic is marked irrelevant.

use std::path::Path;

use sentopic::corpus::io::write_corpus;
use sentopic::pipeline::{self, PipelineConfig};
use sentopic::synthetic::{golden_corpus, planted_corpus, posts_to_jsonl, GOLDEN_TOPICS};
use sentopic::topics::io::read_top_words;
use sentopic::topics::{TopicLabel, TopicLabels};

const GOLDEN_SEED: u64 = 2021;
const TOPIC_NAMES: [&str; 5] = [
    "vaccine appointments",
    "election",
    "science",
    "family",
    "travel",
];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let golden = root.join("data/golden");
    let g = golden_corpus(GOLDEN_SEED);
    std::fs::write(golden.join("posts.jsonl"), posts_to_jsonl(&g.posts))?;
    let mut w = csv::Writer::from_path(golden.join("gold_labels.csv"))?;
    w.write_record(["id", "coder_a", "coder_b"])?;
    for r in &g.gold {
        w.write_record([r.id.as_str(), r.coder_a.as_str(), r.coder_b.as_str()])?;
    }
    w.flush()?;

    let tmp = tempfile::tempdir()?;
    let mut cfg = PipelineConfig::load(&golden.join("config.toml"))?;
    cfg.out_dir = tmp.path().to_path_buf();
    cfg.topic_labels = None;
    cfg.robustness.enabled = false;
    pipeline::ingest(&cfg)?;
    pipeline::fit(&cfg)?;
    let top = read_top_words(&tmp.path().join("top_words.csv"))?;
    let labels = TopicLabels::new(top.iter().enumerate().map(|(k, words)| {
        let planted = (0..GOLDEN_TOPICS.len())
            .max_by_key(|&i| {
                words
                    .iter()
                    .filter(|w| GOLDEN_TOPICS[i].contains(&w.as_str()))
                    .count()
            })
            .unwrap();
        println!(
            "topic {k} -> {} ({})",
            TOPIC_NAMES[planted],
            words.join(" ")
        );
        TopicLabel {
            topic: k,
            label: TOPIC_NAMES[planted].to_string(),
            q1: true,
            q2: planted != 4,
        }
    }));
    labels.write(std::fs::File::create(golden.join("topic_labels.csv"))?)?;

    let fixtures = root.join("tests/fixtures");
    let (docs, truth) = planted_corpus(200, 2, 20, 30, 7);
    write_corpus(&fixtures.join("planted2.jsonl"), &docs)?;
    let mut w = csv::Writer::from_path(fixtures.join("planted2_truth.csv"))?;
    w.write_record(["id", "topic"])?;
    for (d, k) in docs.iter().zip(&truth) {
        w.write_record([d.id.clone(), k.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
