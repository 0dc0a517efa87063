mod common;

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::process::Command;

use chrono::{Duration, TimeZone, Utc};
use common::{golden_config, golden_dir};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sentopic::corpus::CleanDoc;
use sentopic::matrix::Matrix;
use sentopic::pipeline::{
    self, average_topic_weight, emit_charts, monthly_sentiment_rates, run_pipeline, PipelineError,
    RunStatus,
};
use sentopic::sentiment::SentimentLabel;
use sentopic::topics::TopicLabels;

const OUTPUTS: [&str; 19] = [
    "corpus.jsonl",
    "vocabulary.csv",
    "ingest.json",
    "agreement.csv",
    "sentiment.csv",
    "sentiment.json",
    "model/phi.csv",
    "model/theta.csv",
    "model/assignments.csv",
    "model/meta.json",
    "top_words.csv",
    "robustness.json",
    "topic_labels_template.csv",
    "comparison.csv",
    "comparison_long.csv",
    "comparison.json",
    "trend.csv",
    "trend.svg",
    "topic_weights.svg",
];

fn read(dir: &Path, name: &str) -> Vec<u8> {
    std::fs::read(dir.join(name)).unwrap()
}

#[test]
fn golden_run_is_complete_and_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ma = run_pipeline(&golden_config(a.path())).unwrap();
    let mb = run_pipeline(&golden_config(b.path())).unwrap();
    assert_eq!(ma.status, RunStatus::Complete);
    for f in OUTPUTS.iter().chain(&[
        "topic_weights.csv",
        "top_topics.csv",
        "trend.json",
        "manifest.json",
    ]) {
        assert!(a.path().join(f).is_file(), "{f} missing");
    }
    assert!(ma.artifacts.len() >= 12);
    assert_eq!(ma.artifacts, mb.artifacts);
    for name in ma.artifacts.keys() {
        assert_eq!(read(a.path(), name), read(b.path(), name), "{name} differs");
    }

    let c = ma.conservation.unwrap();
    assert!(c.holds());
    let counts = ma.counts.clone().unwrap();
    assert_eq!((counts.raw_posts, counts.retained), (535, 500));
    assert_eq!(c.in_statistics, counts.retained);
    assert_eq!(ma.seeds.base, 2021);
    assert_eq!(ma.selected_topics, Some(5));
    assert_eq!(ma.retained_topics.len(), 4);
    assert_eq!(ma.engine.as_deref(), Some("compound"));
    assert_eq!(ma.agreement.len(), 2);

    let on_disk = pipeline::RunManifest::read(&a.path().join("manifest.json")).unwrap();
    assert_eq!(on_disk, ma);
}

#[test]
fn stages_rerun_from_persisted_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = golden_config(dir.path());
    run_pipeline(&cfg).unwrap();
    let keep: BTreeMap<&str, Vec<u8>> = [
        "comparison.csv",
        "comparison_long.csv",
        "trend.csv",
        "topic_weights.csv",
        "top_topics.csv",
    ]
    .into_iter()
    .map(|f| (f, read(dir.path(), f)))
    .collect();
    for f in keep.keys() {
        std::fs::remove_file(dir.path().join(f)).unwrap();
    }
    pipeline::compare(&cfg).unwrap();
    pipeline::report(&cfg).unwrap();
    for (f, bytes) in keep {
        assert_eq!(read(dir.path(), f), bytes, "{f}");
    }
}

#[test]
fn missing_lexicon_fails_before_any_work() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let mut cfg = golden_config(&out);
    cfg.lexicon.valence = Some(dir.path().join("no_such_lexicon.csv"));
    let err = run_pipeline(&cfg).unwrap_err();
    assert!(matches!(err, PipelineError::Config(_)), "{err}");
    assert_eq!(err.exit_code(), 2);
    assert!(!out.exists());
}

#[test]
fn failing_stage_leaves_partial_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let labels = dir.path().join("labels.csv");
    std::fs::write(
        &labels,
        "topic,label,q1,q2\n0,a,false,true\n1,b,false,true\n2,c,true,false\n3,d,no,no\n4,e,0,1\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let mut cfg = golden_config(&out);
    cfg.topic_labels = Some(labels);
    cfg.robustness.enabled = false;
    let err = run_pipeline(&cfg).unwrap_err();
    assert_eq!(err.stage(), Some("compare"));
    assert_eq!(err.exit_code(), 3);
    let m = pipeline::RunManifest::read(&out.join("manifest.json")).unwrap();
    assert_eq!(m.status, RunStatus::Partial);
    assert_eq!(m.failed_stage.as_deref(), Some("compare"));
    assert_eq!(
        m.stages_completed,
        ["ingest", "sentiment", "fit", "label-template"]
    );
    assert!(out.join("model/theta.csv").is_file());
    assert!(!out.join("comparison.csv").exists());
}

#[test]
fn cli_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_sentopic");
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");

    std::fs::write(&cfg, "input = \"missing.jsonl\"\n[lda]\ntopics = 2\n").unwrap();
    let s = Command::new(bin)
        .args(["--config", cfg.to_str().unwrap(), "run"])
        .status()
        .unwrap();
    assert_eq!(s.code(), Some(2));

    std::fs::write(
        dir.path().join("bad.jsonl"),
        "{\"id\": \"x\", \"text\": 5}\n",
    )
    .unwrap();
    std::fs::write(&cfg, "input = \"bad.jsonl\"\n[lda]\ntopics = 2\n").unwrap();
    let out = Command::new(bin)
        .args(["--config", cfg.to_str().unwrap(), "ingest"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("stage `ingest`"));

    let s = Command::new(bin)
        .args([
            "--config",
            golden_dir().join("config.toml").to_str().unwrap(),
        ])
        .args([
            "--out-dir",
            dir.path().join("g").to_str().unwrap(),
            "--seed",
            "5",
            "ingest",
        ])
        .status()
        .unwrap();
    assert_eq!(s.code(), Some(0));
    assert!(dir.path().join("g/corpus.jsonl").is_file());
}

fn month_docs(n: usize, seed: u64) -> (Vec<CleanDoc>, HashMap<String, SentimentLabel>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = Utc.with_ymd_and_hms(2020, 11, 1, 0, 0, 0).unwrap();
    let span = (Utc.with_ymd_and_hms(2021, 3, 1, 0, 0, 0).unwrap() - start).num_seconds();
    let mut labels = HashMap::new();
    let docs = (0..n)
        .map(|i| {
            let id = format!("d{i}");
            let label = if rng.gen_bool(0.3) {
                SentimentLabel::Negative
            } else {
                SentimentLabel::NonNegative
            };
            labels.insert(id.clone(), label);
            CleanDoc {
                id,
                timestamp: start + Duration::seconds(rng.gen_range(0..span)),
                author_id: "a".into(),
                tokens: vec!["w".into()],
            }
        })
        .collect();
    (docs, labels)
}

fn count(svg: &str, needle: &str) -> usize {
    svg.matches(needle).count()
}

#[test]
fn trend_chart_has_one_tick_per_month_and_two_series() {
    let (docs, labels) = month_docs(300, 3);
    let trend = monthly_sentiment_rates(&docs, &labels).unwrap();
    assert_eq!(trend.months.len(), 4);
    let theta = Matrix::from_rows(vec![vec![0.2, 0.8], vec![0.6, 0.4]]);
    let weights = average_topic_weight(&theta, &[0, 1]);
    let dir = tempfile::tempdir().unwrap();
    let files = emit_charts(&trend, &weights, &TopicLabels::default(), dir.path()).unwrap();

    let svg = std::fs::read_to_string(&files.trend_svg).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(count(&svg, "class=\"x-tick\""), 4);
    assert_eq!(count(&svg, "class=\"series\""), 2);
    for m in &trend.months {
        assert!(svg.contains(&format!(">{}<", m.month)));
    }
    let bars = std::fs::read_to_string(&files.weights_svg).unwrap();
    assert_eq!(count(&bars, "class=\"bar\""), 2);

    let mut r = csv::Reader::from_path(&files.trend_csv).unwrap();
    let rows: Vec<(String, usize, usize, usize, f64, f64)> =
        r.deserialize().map(|x| x.unwrap()).collect();
    assert_eq!(rows.len(), 5);
    for (row, m) in rows.iter().zip(trend.months.iter().chain([&trend.overall])) {
        assert_eq!(
            row,
            &(
                m.month.clone(),
                m.n_docs,
                m.n_neg,
                m.n_nonneg,
                m.neg_rate_2dp,
                m.nonneg_rate_2dp
            )
        );
    }
    let mut r = csv::Reader::from_path(&files.weights_csv).unwrap();
    let rows: Vec<(usize, String, f64)> = r.deserialize().map(|x| x.unwrap()).collect();
    assert_eq!(rows.iter().map(|r| (r.0, r.2)).collect::<Vec<_>>(), weights);
}

#[test]
fn empty_month_range_writes_nothing() {
    let trend = sentopic::pipeline::TrendReport {
        months: vec![],
        overall: monthly_sentiment_rates(&month_docs(1, 0).0, &month_docs(1, 0).1)
            .unwrap()
            .overall,
    };
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("charts");
    assert!(matches!(
        emit_charts(&trend, &[], &TopicLabels::default(), &out),
        Err(PipelineError::EmptyMonthRange)
    ));
    assert!(!out.exists());
}
