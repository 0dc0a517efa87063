//! Acceptance checks. Prints one PASS/FAIL line per check and exits
//! non-zero if any fails.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::approx_constant)]

mod common;

use std::collections::{HashMap, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use chrono::{Duration, TimeZone, Utc};
use common::{dominant_accuracy, fixture, golden_dir, planted2, recount};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sentopic::corpus::{build_vocabulary, CleanDoc};
use sentopic::matrix::Matrix;
use sentopic::pipeline::{average_topic_weight, monthly_sentiment_rates, RunManifest};
use sentopic::sentiment::io::{sample_polarity_lexicon, sample_valence_lexicon};
use sentopic::sentiment::{
    compound_label, compound_score, evaluate_agreement, score_difference, CompoundParams,
    GoldRecord, SentimentLabel, ValenceLexicon,
};
use sentopic::stats::{
    alpha_threshold, classify_effect, cohens_d, fdr_adjust, welch_t_test, CompareOptions,
    EffectClass,
};
use sentopic::synthetic::{planted_corpus, GOLDEN_TOPICS};
use sentopic::topics::io::read_top_words;
use sentopic::topics::{
    coherence_cv, fit_lda, robustness_check, select_topic_count, CoherenceParams, LdaConfig,
    SweepParams,
};

type Check = fn() -> Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn alpha_formula() -> Result<String, String> {
    let a = alpha_threshold(185_953);
    ensure!(
        (0.001159..=0.001160).contains(&a),
        "alpha {a} outside [0.001159, 0.001160]"
    );
    let exact = 0.05 / (185_953f64 / 100.0).sqrt();
    ensure!((a - exact).abs() <= 1e-9, "alpha {a} vs {exact}");
    let rounded = CompareOptions {
        n_docs: 185_953,
        round_alpha: true,
        ..Default::default()
    }
    .alpha();
    ensure!(rounded == 0.001, "rounded alpha {rounded}");
    Ok(format!("alpha = {a:.9}, rounded {rounded}"))
}

fn agreement_arithmetic() -> Result<String, String> {
    use SentimentLabel::*;
    let mut gold = Vec::new();
    let mut preds = HashMap::new();
    for i in 0..1000 {
        let id = format!("r{i}");
        let a = if i % 3 == 0 { Negative } else { NonNegative };
        let (b, pred) = if i < 719 {
            (
                a,
                if i < 543 {
                    a
                } else if a == Negative {
                    NonNegative
                } else {
                    Negative
                },
            )
        } else {
            (if a == Negative { NonNegative } else { Negative }, a)
        };
        preds.insert(id.clone(), pred);
        gold.push(GoldRecord {
            id,
            coder_a: a,
            coder_b: b,
        });
    }
    let r = evaluate_agreement("compound", &preds, &gold).map_err(|e| e.to_string())?;
    ensure!(r.n_gold_used == 719, "n_gold_used {}", r.n_gold_used);
    ensure!(r.n_matches == 543, "matches {}", r.n_matches);
    ensure!(r.agreement == 75.52, "agreement {}", r.agreement);
    Ok(format!(
        "{} unanimous, {} matches, {:.2}%",
        r.n_gold_used, r.n_matches, r.agreement
    ))
}

#[derive(serde::Deserialize)]
struct WelchCase {
    x: Vec<f64>,
    y: Vec<f64>,
    t: f64,
    p: f64,
}

#[derive(serde::Deserialize)]
struct WelchReference {
    cases: Vec<WelchCase>,
}

fn statistical_oracles() -> Result<String, String> {
    let start = Instant::now();
    let text =
        std::fs::read_to_string(fixture("welch_reference.json")).map_err(|e| e.to_string())?;
    let reference: WelchReference = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    ensure!(
        reference.cases.len() == 20,
        "{} reference pairs",
        reference.cases.len()
    );
    let (mut worst_t, mut worst_p) = (0f64, 0f64);
    for (i, c) in reference.cases.iter().enumerate() {
        let r = welch_t_test(&c.x, &c.y).map_err(|e| format!("pair {i}: {e}"))?;
        worst_t = worst_t.max((r.t - c.t).abs());
        worst_p = worst_p.max((r.p - c.p).abs());
    }
    ensure!(worst_t <= 1e-9, "max |dt| = {worst_t:e}");
    ensure!(worst_p <= 1e-6, "max |dp| = {worst_p:e}");
    let fdr: [(&[f64], &[f64]); 5] = [
        (&[0.01, 0.04, 0.03], &[0.03, 0.04, 0.04]),
        (&[0.01, 0.02, 0.03, 0.04], &[0.04, 0.04, 0.04, 0.04]),
        (&[0.5], &[0.5]),
        (
            &[0.001, 0.5, 0.9, 0.2],
            &[0.004, 0.6666666666666666, 0.9, 0.4],
        ),
        (&[0.8, 0.6], &[0.8, 0.8]),
    ];
    for (p, want) in fdr {
        let got = fdr_adjust(p).map_err(|e| e.to_string())?;
        ensure!(got == want, "fdr {p:?} -> {got:?}, expected {want:?}");
    }
    let d = cohens_d(&[2.0, 4.0], &[1.0, 3.0]).map_err(|e| e.to_string())?;
    ensure!((d - 0.7071).abs() <= 1e-4, "cohens_d {d}");
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 1.0, "took {secs:.2}s");
    Ok(format!(
        "max |dt| {worst_t:.1e}, max |dp| {worst_p:.1e}, 5 fdr fixtures, d = {d:.4}"
    ))
}

fn effect_classes() -> Result<String, String> {
    use EffectClass::*;
    let cases = [
        (0.01, VerySmall),
        (0.2, Small),
        (0.5, Medium),
        (0.8, Large),
        (1.2, VeryLarge),
        (2.0, Huge),
    ];
    for (d, want) in cases {
        ensure!(
            classify_effect(d) == want,
            "{d} -> {:?}",
            classify_effect(d)
        );
    }
    Ok("0.01 0.2 0.5 0.8 1.2 2.0 -> Very Small .. Huge".into())
}

fn lda_recovery() -> Result<String, String> {
    let start = Instant::now();
    let (docs, vocab, truth) = planted2();
    ensure!(docs.len() == 200, "{} documents", docs.len());
    let mut worst_acc = 1f64;
    let mut worst_mass = 1f64;
    for seed in 0..5 {
        let model =
            fit_lda(&docs, &vocab, &LdaConfig::new(2, 500, seed)).map_err(|e| e.to_string())?;
        let (acc, map) = dominant_accuracy(&model, &truth, 2);
        ensure!(map[0] != map[1], "seed {seed}: topics not separated");
        worst_acc = worst_acc.min(acc);
        for (k, &p) in map.iter().enumerate() {
            let half: HashSet<&str> = docs
                .iter()
                .zip(&truth)
                .filter(|(_, &t)| t == p)
                .flat_map(|(d, _)| d.tokens.iter().map(String::as_str))
                .collect();
            let mass: f64 = (0..vocab.len())
                .filter(|&w| half.contains(vocab.term(w)))
                .map(|w| model.phi().get(k, w))
                .sum();
            worst_mass = worst_mass.min(mass);
        }
    }
    ensure!(worst_acc >= 0.95, "dominant-topic accuracy {worst_acc}");
    ensure!(worst_mass >= 0.9, "phi mass on own half {worst_mass}");
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 30.0, "took {secs:.1}s");
    Ok(format!(
        "min accuracy {worst_acc:.3}, min phi mass {worst_mass:.4}, {secs:.1}s"
    ))
}

fn lda_bookkeeping() -> Result<String, String> {
    let (docs, vocab, _) = planted2();
    let (mixed, _) = planted_corpus(60, 3, 15, 25, 4);
    let mixed_vocab = build_vocabulary(&mixed).map_err(|e| e.to_string())?;
    let mut fits = 0;
    for (d, v) in [(&docs, &vocab), (&mixed, &mixed_vocab)] {
        for t in [1, 2, 5] {
            let cfg = LdaConfig::new(t, 40, 17);
            let model = fit_lda(d, v, &cfg).map_err(|e| e.to_string())?;
            let (n_dk, n_kw, n_k) = recount(&model);
            let (s_dk, s_kw, s_k) = model.counts();
            ensure!(
                s_dk == n_dk && s_kw == n_kw && s_k == n_k,
                "T={t}: stored counts differ from recount"
            );
            for row in model.phi().iter_rows().chain(model.theta().iter_rows()) {
                let s: f64 = row.iter().sum();
                ensure!((s - 1.0).abs() <= 1e-9, "T={t}: row sums to {s}");
            }
            let again = fit_lda(d, v, &cfg).map_err(|e| e.to_string())?;
            ensure!(
                again.assignments() == model.assignments(),
                "T={t}: same seed gave new assignments"
            );
            fits += 1;
        }
    }
    Ok(format!("{fits} fits: counts, row sums and reruns exact"))
}

fn coherence_selection() -> Result<String, String> {
    let start = Instant::now();
    let mut picks = Vec::new();
    for rep in 0..10u64 {
        let (docs, _) = planted_corpus(200, 4, 12, 40, 1000 + rep);
        let vocab = build_vocabulary(&docs).map_err(|e| e.to_string())?;
        let params = SweepParams {
            min_topics: 2,
            max_topics: 10,
            iterations: 500,
            ..Default::default()
        };
        let sweep = select_topic_count(&docs, &vocab, &LdaConfig::new(4, 500, rep), &params)
            .map_err(|e| e.to_string())?;
        picks.push(sweep.selected);
    }
    let hits = picks.iter().filter(|t| (3..=5).contains(*t)).count();
    ensure!(hits >= 8, "selected {picks:?}: {hits}/10 in [3, 5]");

    let doc = |id: &str, a: &str, b: &str| CleanDoc {
        id: id.into(),
        timestamp: Utc.timestamp_opt(0, 0).unwrap(),
        author_id: "a".into(),
        tokens: vec![a.into(), b.into()],
    };
    let reference = [doc("1", "a", "b"), doc("2", "a", "c"), doc("3", "b", "c")];
    let got = coherence_cv(
        &[vec!["a".to_string(), "b".to_string()]],
        &reference,
        &CoherenceParams {
            window: 2,
            epsilon: 1e-12,
        },
    )
    .map_err(|e| e.to_string())?
    .per_topic[0];
    let x = (0.75f64).ln() / 3f64.ln();
    let hand = (1.0 + x) / (2f64.sqrt() * (1.0 + x * x).sqrt());
    ensure!((got - hand).abs() <= 1e-10, "hand fixture {got} vs {hand}");
    Ok(format!(
        "selected {picks:?} ({hits}/10 in [3, 5]), hand fixture |diff| {:.1e}, {:.0}s",
        (got - hand).abs(),
        start.elapsed().as_secs_f64()
    ))
}

fn robustness() -> Result<String, String> {
    let (docs, vocab, _) = planted2();
    let r = robustness_check(&docs, &vocab, &LdaConfig::new(2, 500, 0), 5, 0.01)
        .map_err(|e| e.to_string())?;
    ensure!(r.seeds.len() == 5, "{} runs", r.seeds.len());
    ensure!(r.cv <= 0.01 && r.pass, "cv {}", r.cv);
    Ok(format!("5 seeds, cv {:.2e}", r.cv))
}

fn sentiment_engines() -> Result<String, String> {
    let params = CompoundParams::default();
    let lex = sample_valence_lexicon(&params);
    let text = std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("data/valence_sample.csv"),
    )
    .map_err(|e| e.to_string())?;
    let mut terms: Vec<String> = text
        .lines()
        .filter(|l| {
            !l.is_empty() && !l.starts_with('[') && !l.starts_with('#') && !l.starts_with("term")
        })
        .map(|l| l.split(',').next().unwrap().to_string())
        .collect();
    terms.extend(["vaccine", "the", "today", "dose"].map(String::from));
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut max_abs = 0f64;
    for i in 0..10_000 {
        let len = rng.gen_range(1..=if i % 10 == 0 { 400 } else { 40 });
        let tokens = (0..len)
            .map(|_| terms.choose(&mut rng).unwrap().clone())
            .collect();
        let doc = CleanDoc {
            id: format!("r{i}"),
            timestamp: Utc.timestamp_opt(0, 0).unwrap(),
            author_id: "a".into(),
            tokens,
        };
        let c = compound_score(&doc, &lex, &params).map_err(|e| e.to_string())?;
        ensure!(c.score.abs() < 1.0, "doc {i}: cs = {}", c.score);
        max_abs = max_abs.max(c.score.abs());
    }

    let lone = ValenceLexicon::new(
        [("fine".to_string(), 2.0)].into(),
        HashMap::new(),
        HashSet::new(),
    )
    .map_err(|e| e.to_string())?;
    let doc = CleanDoc {
        id: "x".into(),
        timestamp: Utc.timestamp_opt(0, 0).unwrap(),
        author_id: "a".into(),
        tokens: vec!["fine".into()],
    };
    let cs = compound_score(&doc, &lone, &params)
        .map_err(|e| e.to_string())?
        .score;
    ensure!(
        (cs - 2.0 / 19f64.sqrt()).abs() <= 1e-9,
        "lone token cs {cs}"
    );

    ensure!(
        compound_label(-0.05, &params) == SentimentLabel::Negative,
        "-0.05 not negative"
    );
    ensure!(
        compound_label((-0.05f64).next_up(), &params) == SentimentLabel::NonNegative,
        "value just above -0.05 is negative"
    );
    ensure!(
        compound_label((-0.05f64).next_down(), &params) == SentimentLabel::Negative,
        "value just below -0.05 is non-negative"
    );

    let pol = sample_polarity_lexicon();
    let zero = CleanDoc {
        tokens: vec!["vaccine".into(), "today".into(), "dose".into()],
        ..doc.clone()
    };
    let balanced = CleanDoc {
        tokens: vec!["great".into(), "terrible".into(), "vaccine".into()],
        ..doc
    };
    for d in [zero, balanced] {
        let c = score_difference(&d, &pol).map_err(|e| e.to_string())?;
        ensure!(
            c.score == 0.0 && c.label == SentimentLabel::NonNegative,
            "{:?} -> {:?}",
            d.tokens,
            c
        );
    }
    Ok(format!(
        "max |cs| over 10000 docs {max_abs:.6}, lone token {cs:.12}"
    ))
}

fn csv_outputs(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let m = RunManifest::read(&dir.join("manifest.json")).map_err(|e| e.to_string())?;
    m.artifacts
        .keys()
        .map(|k| {
            std::fs::read(dir.join(k))
                .map(|b| (k.clone(), b))
                .map_err(|e| e.to_string())
        })
        .collect()
}

fn end_to_end() -> Result<String, String> {
    let start = Instant::now();
    let bin = env!("CARGO_BIN_EXE_sentopic");
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = golden_dir().join("config.toml");
    let mut outputs = Vec::new();
    for run in ["a", "b"] {
        let out = tmp.path().join(run);
        let status = Command::new(bin)
            .env("RUST_LOG", "error")
            .args([
                "--config",
                config.to_str().unwrap(),
                "--out-dir",
                out.to_str().unwrap(),
                "run",
            ])
            .status()
            .map_err(|e| e.to_string())?;
        ensure!(status.success(), "run {run} exited with {status}");
        outputs.push(csv_outputs(&out)?);
    }
    ensure!(
        outputs[0].len() >= 12,
        "only {} CSV outputs",
        outputs[0].len()
    );
    ensure!(outputs[0] == outputs[1], "CSV outputs differ between runs");

    let out = tmp.path().join("a");
    let top = read_top_words(&out.join("top_words.csv")).map_err(|e| e.to_string())?;
    let planted: Vec<usize> = top
        .iter()
        .map(|words| {
            (0..GOLDEN_TOPICS.len())
                .max_by_key(|&i| {
                    words
                        .iter()
                        .filter(|w| GOLDEN_TOPICS[i].contains(&w.as_str()))
                        .count()
                })
                .unwrap()
        })
        .collect();
    let mut r = csv::Reader::from_path(out.join("comparison.csv")).map_err(|e| e.to_string())?;
    let rows: Vec<(usize, String, String, String, String)> = r
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure!(rows.len() == 4, "{} topics compared", rows.len());
    let mut shift_found = false;
    for (topic, label, result, _, _) in &rows {
        ensure!(
            planted[*topic] != 4,
            "the excluded topic {topic} ({label}) was compared"
        );
        if planted[*topic] == 0 {
            ensure!(
                result == "NEG > NONNEG",
                "shifted topic {topic} reported {result}"
            );
            shift_found = true;
        } else {
            ensure!(
                result == "NS",
                "unshifted topic {topic} ({label}) reported {result}"
            );
        }
    }
    ensure!(shift_found, "shifted topic missing from the comparison");
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 120.0, "took {secs:.0}s");
    Ok(format!(
        "{} identical CSVs, shift detected, 3 topics NS, {secs:.1}s",
        outputs[0].len()
    ))
}

fn aggregates() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let start = Utc.with_ymd_and_hms(2020, 6, 1, 0, 0, 0).unwrap();
    let mut worst = 0f64;
    for fixture in 0..50 {
        let n = rng.gen_range(1..400);
        let p_neg = rng.gen::<f64>();
        let mut labels = HashMap::new();
        let docs: Vec<CleanDoc> = (0..n)
            .map(|i| {
                let id = format!("f{fixture}d{i}");
                let label = if rng.gen_bool(p_neg) {
                    SentimentLabel::Negative
                } else {
                    SentimentLabel::NonNegative
                };
                labels.insert(id.clone(), label);
                CleanDoc {
                    id,
                    timestamp: start + Duration::seconds(rng.gen_range(0..200 * 86_400)),
                    author_id: "a".into(),
                    tokens: vec!["w".into()],
                }
            })
            .collect();
        let trend = monthly_sentiment_rates(&docs, &labels).map_err(|e| e.to_string())?;
        let total: usize = trend.months.iter().map(|m| m.n_docs).sum();
        ensure!(
            total == n && trend.overall.n_docs == n,
            "counts sum to {total}, not {n}"
        );
        for m in trend.months.iter().chain([&trend.overall]) {
            let in_month: Vec<&CleanDoc> = docs
                .iter()
                .filter(|d| {
                    m.month == "overall" || d.timestamp.format("%Y-%m").to_string() == m.month
                })
                .collect();
            let neg = in_month
                .iter()
                .filter(|d| labels[&d.id] == SentimentLabel::Negative)
                .count();
            let want = 100.0 * neg as f64 / in_month.len() as f64;
            worst = worst
                .max((m.neg_rate - want).abs())
                .max((m.nonneg_rate - (100.0 - want)).abs());
            let hundredths = (m.neg_rate_2dp * 100.0).round() as i64
                + (m.nonneg_rate_2dp * 100.0).round() as i64;
            ensure!(
                hundredths == 10_000,
                "{}: rates sum to {}",
                m.month,
                hundredths as f64 / 100.0
            );
            ensure!(
                (m.neg_rate_2dp - want).abs() <= 0.01 + 1e-9,
                "{}: rounded {} vs {want}",
                m.month,
                m.neg_rate_2dp
            );
        }

        let (rows, cols) = (rng.gen_range(1..60), rng.gen_range(1..12));
        let theta = Matrix::from_rows(
            (0..rows)
                .map(|_| {
                    let raw: Vec<f64> = (0..cols).map(|_| rng.gen::<f64>()).collect();
                    let s: f64 = raw.iter().sum();
                    raw.into_iter().map(|x| x / s).collect()
                })
                .collect(),
        );
        let retained: Vec<usize> = (0..cols).filter(|_| rng.gen_bool(0.7)).collect();
        for (k, mean) in average_topic_weight(&theta, &retained) {
            let mut sum = 0.0;
            for d in 0..rows {
                sum += theta.get(d, k);
            }
            worst = worst.max((mean - sum / rows as f64).abs());
        }
    }
    ensure!(worst <= 1e-12, "max deviation from recount {worst:e}");
    Ok(format!(
        "50 fixtures, max deviation {worst:.1e}, monthly pairs sum to 100.00"
    ))
}

fn main() {
    let checks: [(&str, Check); 11] = [
        ("alpha formula", alpha_formula),
        ("agreement arithmetic", agreement_arithmetic),
        ("statistical oracles", statistical_oracles),
        ("effect-class boundaries", effect_classes),
        ("LDA planted recovery", lda_recovery),
        ("LDA bookkeeping", lda_bookkeeping),
        ("coherence selection", coherence_selection),
        ("robustness check", robustness),
        ("sentiment engines", sentiment_engines),
        ("end-to-end determinism", end_to_end),
        ("aggregates", aggregates),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("[{:>2}] PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[{:>2}] FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        checks.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
