use std::collections::HashMap;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::manifest::now;
use super::{
    average_topic_weight, emit_charts, file_sha256, monthly_sentiment_rates, top_k_topics_by_group,
    Conservation, EngineChoice, PipelineConfig, PipelineError, RunManifest, RunStatus, TopTopics,
    TrendReport,
};
use crate::corpus::io::{read_corpus, read_posts, write_corpus};
use crate::corpus::{
    build_vocabulary, prepare_corpus, CleanDoc, CleanOptions, IngestCounts, StopWords, Vocabulary,
};
use crate::format::{fixed2, sig6};
use crate::matrix::Matrix;
use crate::sentiment::io::{
    label_map, load_gold, load_polarity_lexicon, load_valence_lexicon, read_predictions,
    sample_polarity_lexicon, sample_valence_lexicon, write_predictions, Prediction,
};
use crate::sentiment::{
    evaluate_agreement, select_engine, AgreementReport, CompoundEngine, DifferenceEngine,
    SentimentEngine, SentimentLabel,
};
use crate::stats::{compare_all_topics, CompareOptions, Direction, TopicComparison};
use crate::topics::io::{read_meta, read_theta, read_top_words, write_model, write_top_words};
use crate::topics::{
    apply_topic_labels, fit_lda, label_template as make_template, robustness_check,
    select_topic_count, CoherenceSweep, RobustnessReport, TopicLabels,
};

pub(crate) const CORPUS: &str = "corpus.jsonl";
pub(crate) const VOCABULARY: &str = "vocabulary.csv";
pub(crate) const INGEST: &str = "ingest.json";
pub(crate) const AGREEMENT: &str = "agreement.csv";
pub(crate) const SENTIMENT: &str = "sentiment.csv";
pub(crate) const SENTIMENT_JSON: &str = "sentiment.json";
pub(crate) const SWEEP_CSV: &str = "coherence_sweep.csv";
pub(crate) const SWEEP_JSON: &str = "coherence_sweep.json";
pub(crate) const MODEL: &str = "model";
pub(crate) const TOP_WORDS: &str = "top_words.csv";
pub(crate) const ROBUSTNESS: &str = "robustness.json";
pub(crate) const LABEL_TEMPLATE: &str = "topic_labels_template.csv";
pub(crate) const COMPARISON: &str = "comparison.csv";
pub(crate) const COMPARISON_LONG: &str = "comparison_long.csv";
pub(crate) const COMPARISON_JSON: &str = "comparison.json";
pub(crate) const TREND_JSON: &str = "trend.json";
pub(crate) const TOP_TOPICS: &str = "top_topics.csv";
pub(crate) const MANIFEST: &str = "manifest.json";

const LABEL_WORDS: usize = 3;

fn out(cfg: &PipelineConfig, name: &str) -> PathBuf {
    cfg.out_dir.join(name)
}

fn ensure_out(cfg: &PipelineConfig) -> Result<(), PipelineError> {
    std::fs::create_dir_all(&cfg.out_dir).map_err(|e| PipelineError::io(&cfg.out_dir, e))
}

fn create(path: &Path) -> Result<BufWriter<File>, PipelineError> {
    Ok(BufWriter::new(
        File::create(path).map_err(|e| PipelineError::io(path, e))?,
    ))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), PipelineError> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n").map_err(|e| PipelineError::io(path, e))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, PipelineError> {
    let text = std::fs::read_to_string(path).map_err(|e| PipelineError::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

fn write_rows(
    path: &Path,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<(), PipelineError> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| PipelineError::io(path, e))
}

fn stopwords(cfg: &PipelineConfig) -> Result<StopWords, PipelineError> {
    Ok(match &cfg.stopwords {
        Some(p) => StopWords::load(p)?,
        None => StopWords::english(),
    })
}

fn load_corpus(cfg: &PipelineConfig) -> Result<Vec<CleanDoc>, PipelineError> {
    Ok(read_corpus(&out(cfg, CORPUS))?)
}

/// Corpus with stop words removed, as seen by the topic model.
fn topic_corpus(cfg: &PipelineConfig) -> Result<(Vec<CleanDoc>, Vocabulary), PipelineError> {
    let sw = stopwords(cfg)?;
    let docs: Vec<CleanDoc> = load_corpus(cfg)?
        .into_iter()
        .map(|mut d| {
            d.tokens.retain(|t| !sw.contains(t));
            d
        })
        .collect();
    let vocab = build_vocabulary(&docs)?;
    Ok((docs, vocab))
}

fn engines(cfg: &PipelineConfig) -> Result<Vec<Box<dyn SentimentEngine>>, PipelineError> {
    let valence = match &cfg.lexicon.valence {
        Some(p) => load_valence_lexicon(p, &cfg.compound)?,
        None => sample_valence_lexicon(&cfg.compound),
    };
    let polarity = match (&cfg.lexicon.positive, &cfg.lexicon.negative) {
        (Some(p), Some(n)) => load_polarity_lexicon(p, n)?,
        _ => sample_polarity_lexicon(),
    };
    Ok(vec![
        Box::new(CompoundEngine {
            lexicon: valence,
            params: cfg.compound,
        }),
        Box::new(DifferenceEngine { lexicon: polarity }),
    ])
}

fn classify_all(
    engine: &dyn SentimentEngine,
    docs: &[CleanDoc],
) -> Result<Vec<Prediction>, PipelineError> {
    Ok(docs
        .par_iter()
        .map(|d| {
            engine
                .classify(d)
                .map(|c| Prediction::new(&d.id, engine.name(), c))
        })
        .collect::<Result<Vec<_>, _>>()?)
}

fn staged<T>(
    stage: &'static str,
    f: impl FnOnce() -> Result<T, PipelineError>,
) -> Result<T, PipelineError> {
    f().map_err(|e| e.in_stage(stage))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct IngestRecord {
    input: PathBuf,
    input_sha256: String,
    counts: IngestCounts,
    vocabulary_size: usize,
}

/// Reads, cleans and filters the input posts. Writes `corpus.jsonl`
/// (cleaned tokens, stop words kept), `vocabulary.csv` (topic-model
/// vocabulary, stop words removed) and `ingest.json`.
pub fn ingest(cfg: &PipelineConfig) -> Result<IngestCounts, PipelineError> {
    staged("ingest", || {
        ensure_out(cfg)?;
        let sw = stopwords(cfg)?;
        let posts = read_posts(&cfg.input)?;
        let opts = CleanOptions {
            keep_apostrophes: cfg.keep_apostrophes,
        };
        let (docs, counts) = prepare_corpus(&posts, &opts, &sw);
        log::info!(
            "ingest: {} posts, {} after filtering, {} retained",
            counts.raw_posts,
            counts.after_filter,
            counts.retained
        );
        write_corpus(&out(cfg, CORPUS), &docs)?;
        let (_, vocab) = topic_corpus(cfg)?;
        vocab.write_csv(create(&out(cfg, VOCABULARY))?)?;
        write_json(
            &out(cfg, INGEST),
            &IngestRecord {
                input: cfg.input.clone(),
                input_sha256: file_sha256(&cfg.input)?,
                counts: counts.clone(),
                vocabulary_size: vocab.len(),
            },
        )?;
        Ok(counts)
    })
}

/// Scores every built-in engine against the gold labels and writes
/// `agreement.csv`.
pub fn agree(cfg: &PipelineConfig) -> Result<Vec<AgreementReport>, PipelineError> {
    staged("agree", || {
        let gold_path = cfg
            .gold_labels
            .as_ref()
            .ok_or_else(|| PipelineError::Config("agreement needs gold_labels".into()))?;
        let gold = load_gold(gold_path)?;
        let docs = load_corpus(cfg)?;
        let mut reports = Vec::new();
        for engine in engines(cfg)? {
            let preds = classify_all(engine.as_ref(), &docs)?;
            let report = evaluate_agreement(engine.name(), &label_map(&preds), &gold)?;
            log::info!("agreement: {} {}%", report.engine, fixed2(report.agreement));
            reports.push(report);
        }
        write_rows(
            &out(cfg, AGREEMENT),
            &["engine", "n_gold_used", "n_matches", "agreement"],
            reports.iter().map(|r| {
                vec![
                    r.engine.clone(),
                    r.n_gold_used.to_string(),
                    r.n_matches.to_string(),
                    fixed2(r.agreement),
                ]
            }),
        )?;
        Ok(reports)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentimentSummary {
    pub engine: String,
    pub agreement: Vec<AgreementReport>,
    pub n_labeled: usize,
    pub n_negative: usize,
}

/// Labels every document with the configured engine. With gold labels the
/// agreement table is produced first; in `auto` mode it decides the engine.
pub fn sentiment(cfg: &PipelineConfig) -> Result<SentimentSummary, PipelineError> {
    let agreement = match cfg.gold_labels {
        Some(_) => agree(cfg)?,
        None => Vec::new(),
    };
    staged("sentiment", || {
        let name = match cfg.engine {
            EngineChoice::Compound => "compound".to_string(),
            EngineChoice::Difference => "difference".to_string(),
            EngineChoice::Auto => select_engine(&agreement)?.to_string(),
        };
        let engine = engines(cfg)?
            .into_iter()
            .find(|e| e.name() == name)
            .expect("built-in engine");
        let docs = load_corpus(cfg)?;
        let preds = classify_all(engine.as_ref(), &docs)?;
        write_predictions(create(&out(cfg, SENTIMENT))?, &preds)?;
        let summary = SentimentSummary {
            engine: name,
            agreement,
            n_labeled: preds.len(),
            n_negative: preds.iter().filter(|p| p.label.is_negative()).count(),
        };
        write_json(&out(cfg, SENTIMENT_JSON), &summary)?;
        log::info!(
            "sentiment: {} labeled by {}, {} negative",
            summary.n_labeled,
            summary.engine,
            summary.n_negative
        );
        Ok(summary)
    })
}

/// Chooses the topic count by C_V coherence over the configured range.
pub fn sweep(cfg: &PipelineConfig) -> Result<CoherenceSweep, PipelineError> {
    staged("sweep", || {
        let (docs, vocab) = topic_corpus(cfg)?;
        let params = cfg.sweep_params();
        let template = cfg.lda_config(params.min_topics.max(1));
        let result = select_topic_count(&docs, &vocab, &template, &params)?;
        if let Some((t, c)) = result.scores.iter().find(|(_, c)| !c.is_finite()) {
            return Err(PipelineError::Numerical(format!(
                "coherence for T={t} is {c}"
            )));
        }
        write_rows(
            &out(cfg, SWEEP_CSV),
            &["topics", "coherence"],
            result
                .scores
                .iter()
                .map(|(t, c)| vec![t.to_string(), sig6(*c)]),
        )?;
        write_json(&out(cfg, SWEEP_JSON), &result)?;
        log::info!("sweep: selected T={}", result.selected);
        Ok(result)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub topics: usize,
    pub final_log_likelihood: f64,
    pub robustness: Option<RobustnessReport>,
}

fn topic_count(cfg: &PipelineConfig) -> Result<usize, PipelineError> {
    if cfg.sweep.enabled {
        let path = out(cfg, SWEEP_JSON);
        if !path.is_file() {
            return Err(PipelineError::Data(format!(
                "{} is missing; run the sweep stage first",
                path.display()
            )));
        }
        let sweep: CoherenceSweep = read_json(&path)?;
        return Ok(sweep.selected);
    }
    cfg.lda.topics.ok_or_else(|| {
        PipelineError::Config("no topic count: set lda.topics or enable the sweep".into())
    })
}

/// Fits the final topic model and writes `model/` and `top_words.csv`,
/// plus `robustness.json` when the multi-seed check is enabled.
pub fn fit(cfg: &PipelineConfig) -> Result<FitSummary, PipelineError> {
    staged("fit", || {
        let (docs, vocab) = topic_corpus(cfg)?;
        let lda = cfg.lda_config(topic_count(cfg)?);
        let model = fit_lda(&docs, &vocab, &lda)?;
        let ll = model.final_log_likelihood();
        if !ll.is_finite() {
            return Err(PipelineError::Numerical(format!(
                "final log-likelihood is {ll}"
            )));
        }
        write_model(&out(cfg, MODEL), &model, &vocab, &lda)?;
        write_top_words(
            create(&out(cfg, TOP_WORDS))?,
            &model,
            &vocab,
            cfg.lda.top_words,
        )?;
        let robustness = if cfg.robustness.enabled {
            let r = robustness_check(
                &docs,
                &vocab,
                &lda,
                cfg.robustness.runs,
                cfg.robustness.threshold,
            )?;
            if !r.pass {
                log::warn!("robustness: CV {} exceeds {}", sig6(r.cv), r.threshold);
            }
            write_json(&out(cfg, ROBUSTNESS), &r)?;
            Some(r)
        } else {
            None
        };
        log::info!(
            "fit: T={} final log-likelihood {}",
            lda.topic_count,
            sig6(ll)
        );
        Ok(FitSummary {
            topics: lda.topic_count,
            final_log_likelihood: ll,
            robustness,
        })
    })
}

/// Writes a label file pre-filled with each topic's leading words and both
/// screening answers set to true, for hand editing.
pub fn label_template(cfg: &PipelineConfig) -> Result<PathBuf, PipelineError> {
    staged("label-template", || {
        let terms = read_top_words(&out(cfg, TOP_WORDS))?;
        let path = out(cfg, LABEL_TEMPLATE);
        make_template(&terms, LABEL_WORDS).write(create(&path)?)?;
        Ok(path)
    })
}

/// Configured topic labels, or the template (every topic retained) when no
/// label file is set.
fn topic_labels(cfg: &PipelineConfig, topic_count: usize) -> Result<TopicLabels, PipelineError> {
    match &cfg.topic_labels {
        Some(p) => Ok(TopicLabels::read(
            File::open(p).map_err(|e| PipelineError::io(p, e))?,
        )?),
        None => {
            log::warn!("no topic label file; all {topic_count} topics are retained");
            let terms = read_top_words(&out(cfg, TOP_WORDS))?;
            Ok(make_template(&terms, LABEL_WORDS))
        }
    }
}

/// θ with the sentiment label of each row, checked against the corpus.
struct Aligned {
    docs: Vec<CleanDoc>,
    theta: Matrix,
    labels: Vec<SentimentLabel>,
    label_map: HashMap<String, SentimentLabel>,
    topic_labels: TopicLabels,
    retained: Vec<usize>,
    conservation: Conservation,
}

fn align(cfg: &PipelineConfig) -> Result<Aligned, PipelineError> {
    let docs = load_corpus(cfg)?;
    let preds = read_predictions(
        File::open(out(cfg, SENTIMENT)).map_err(|e| PipelineError::io(&out(cfg, SENTIMENT), e))?,
    )?;
    let (ids, theta) = read_theta(&out(cfg, MODEL).join("theta.csv"))?;
    let conservation = Conservation {
        surviving_filter: docs.len(),
        labeled: preds.len(),
        in_statistics: theta.rows(),
    };
    if !conservation.holds() {
        return Err(PipelineError::Data(format!(
            "document counts disagree: {} after filtering, {} labeled, {} in the model",
            conservation.surviving_filter, conservation.labeled, conservation.in_statistics
        )));
    }
    let label_map = label_map(&preds);
    let mut labels = Vec::with_capacity(ids.len());
    for (doc, id) in docs.iter().zip(&ids) {
        if doc.id != *id {
            return Err(PipelineError::Data(format!(
                "model row {id} does not match corpus document {}",
                doc.id
            )));
        }
        let label = label_map
            .get(id)
            .ok_or_else(|| PipelineError::UnlabeledDocument { id: id.clone() })?;
        labels.push(*label);
    }
    let topic_count = read_meta(&out(cfg, MODEL).join("meta.json"))?.topic_count;
    let topic_labels = topic_labels(cfg, topic_count)?;
    let retained = apply_topic_labels(topic_count, &topic_labels)?;
    Ok(Aligned {
        docs,
        theta,
        labels,
        label_map,
        topic_labels,
        retained,
        conservation,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareSummary {
    pub alpha: f64,
    pub retained: Vec<usize>,
    pub conservation: Conservation,
    pub rows: Vec<TopicComparison>,
}

fn opt(x: Option<f64>, f: fn(f64) -> String) -> String {
    x.map(f).unwrap_or_default()
}

/// Per-topic tests between negative and non-negative documents. Writes the
/// short table `comparison.csv`, the full `comparison_long.csv` and the
/// full-precision `comparison.json`.
pub fn compare(cfg: &PipelineConfig) -> Result<CompareSummary, PipelineError> {
    staged("compare", || {
        let a = align(cfg)?;
        let opts = CompareOptions {
            n_docs: a.theta.rows(),
            round_alpha: cfg.stats.round_alpha,
            kind: cfg.stats.test,
            sizes: cfg.stats.sizes.clone(),
            repeats: cfg.stats.repeats,
            seed: cfg.seed,
        };
        let rows = compare_all_topics(&a.theta, &a.labels, &a.retained, &opts)?;
        if let Some(r) = rows.iter().find(|r| r.test.p.is_nan() || r.test.t.is_nan()) {
            return Err(PipelineError::Numerical(format!(
                "topic {}: t-test produced NaN",
                r.test.topic
            )));
        }
        let label = |k: usize| a.topic_labels.label(k).to_string();
        write_rows(
            &out(cfg, COMPARISON),
            &["topic", "label", "result", "d_mean", "effect_class"],
            rows.iter().map(|r| {
                vec![
                    r.test.topic.to_string(),
                    label(r.test.topic),
                    r.test.direction.as_str().to_string(),
                    opt(r.effect.as_ref().map(|e| e.d_mean), fixed2),
                    r.effect
                        .as_ref()
                        .map(|e| e.class.to_string())
                        .unwrap_or_default(),
                ]
            }),
        )?;
        let mut header: Vec<String> = [
            "topic",
            "label",
            "n_neg",
            "n_nonneg",
            "mean_neg",
            "mean_nonneg",
            "t",
            "df",
            "p",
            "p_adj",
            "alpha",
            "result",
            "full_d",
            "d_mean",
            "effect_class",
        ]
        .map(String::from)
        .to_vec();
        header.extend(cfg.stats.sizes.iter().map(|s| format!("d_{s}")));
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        write_rows(
            &out(cfg, COMPARISON_LONG),
            &header,
            rows.iter().map(|r| {
                let t = &r.test;
                let mut row = vec![
                    t.topic.to_string(),
                    label(t.topic),
                    t.n_neg.to_string(),
                    t.n_nonneg.to_string(),
                    sig6(t.mean_neg),
                    sig6(t.mean_nonneg),
                    sig6(t.t),
                    sig6(t.df),
                    sig6(t.p),
                    sig6(t.p_adj),
                    sig6(t.alpha_used),
                    t.direction.as_str().to_string(),
                    opt(r.full_d, sig6),
                    opt(r.effect.as_ref().map(|e| e.d_mean), sig6),
                    r.effect
                        .as_ref()
                        .map(|e| e.class.to_string())
                        .unwrap_or_default(),
                ];
                row.extend(cfg.stats.sizes.iter().map(|s| {
                    opt(
                        r.effect.as_ref().and_then(|e| e.d_by_size.get(s).copied()),
                        sig6,
                    )
                }));
                row
            }),
        )?;
        let summary = CompareSummary {
            alpha: opts.alpha(),
            retained: a.retained,
            conservation: a.conservation,
            rows,
        };
        write_json(&out(cfg, COMPARISON_JSON), &summary)?;
        let significant = summary
            .rows
            .iter()
            .filter(|r| r.test.direction != Direction::NS)
            .count();
        log::info!(
            "compare: {significant} of {} retained topics significant at {}",
            summary.retained.len(),
            sig6(summary.alpha)
        );
        Ok(summary)
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub trend: TrendReport,
    pub topic_weights: Vec<(usize, f64)>,
    pub top_topics: TopTopics,
}

/// Monthly sentiment trend, average topic weights, top topics per group
/// and both charts.
pub fn report(cfg: &PipelineConfig) -> Result<ReportSummary, PipelineError> {
    staged("report", || {
        let a = align(cfg)?;
        let trend = monthly_sentiment_rates(&a.docs, &a.label_map)?;
        let weights = average_topic_weight(&a.theta, &a.retained);
        let top = top_k_topics_by_group(&a.theta, &a.labels, &a.retained, cfg.report.top_k)?;
        write_json(&out(cfg, TREND_JSON), &trend)?;
        let cell = |e: Option<&(usize, f64)>| match e {
            Some(&(k, w)) => (format!("{k}: {}", a.topic_labels.label(k)), w.to_string()),
            None => (String::new(), String::new()),
        };
        let n = top.negative.len().max(top.nonnegative.len());
        write_rows(
            &out(cfg, TOP_TOPICS),
            &[
                "rank",
                "negative",
                "negative_weight",
                "nonnegative",
                "nonnegative_weight",
            ],
            (0..n).map(|i| {
                let (neg, neg_w) = cell(top.negative.get(i));
                let (non, non_w) = cell(top.nonnegative.get(i));
                vec![(i + 1).to_string(), neg, neg_w, non, non_w]
            }),
        )?;
        emit_charts(&trend, &weights, &a.topic_labels, &cfg.out_dir)?;
        Ok(ReportSummary {
            trend,
            topic_weights: weights,
            top_topics: top,
        })
    })
}

/// Runs every stage in order, writing `manifest.json` after each one. On
/// failure the manifest is left marked partial with the failing stage.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<RunManifest, PipelineError> {
    cfg.validate()?;
    ensure_out(cfg)?;
    let manifest_path = out(cfg, MANIFEST);
    let mut m = RunManifest::new(cfg);
    m.input_sha256 = Some(file_sha256(&cfg.input)?);
    m.write(&manifest_path)?;

    let result = (|| -> Result<(), PipelineError> {
        let done = |m: &mut RunManifest, stage: &str| {
            m.stages_completed.push(stage.to_string());
            m.write(&manifest_path)
        };
        m.counts = Some(ingest(cfg)?);
        done(&mut m, "ingest")?;
        let s = sentiment(cfg)?;
        m.engine = Some(s.engine);
        m.agreement = s.agreement;
        done(&mut m, "sentiment")?;
        if cfg.sweep.enabled {
            sweep(cfg)?;
            done(&mut m, "sweep")?;
        }
        let f = fit(cfg)?;
        m.selected_topics = Some(f.topics);
        m.robustness = f.robustness;
        done(&mut m, "fit")?;
        label_template(cfg)?;
        done(&mut m, "label-template")?;
        let c = compare(cfg)?;
        m.retained_topics = c.retained;
        m.conservation = Some(c.conservation);
        done(&mut m, "compare")?;
        report(cfg)?;
        done(&mut m, "report")
    })();

    m.finished_at = Some(now());
    match result {
        Ok(()) => {
            m.collect_artifacts(&cfg.out_dir)?;
            m.status = RunStatus::Complete;
            m.write(&manifest_path)?;
            Ok(m)
        }
        Err(e) => {
            m.failed_stage = e.stage().map(str::to_string);
            m.error = Some(e.to_string());
            m.collect_artifacts(&cfg.out_dir)?;
            m.write(&manifest_path)?;
            Err(e)
        }
    }
}
