//! Seeded generators for planted-structure corpora. They back the test
//! suites and the bundled demo corpus.

use chrono::{DateTime, Duration, TimeZone, Utc};
use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{AuthorClass, CleanDoc, RawPost};
use crate::sentiment::{GoldRecord, SentimentLabel};

/// Term `j` of planted topic `k`. Letters only, so cleaning leaves it intact.
pub fn planted_term(k: usize, j: usize) -> String {
    const SYL: [&str; 12] = [
        "ka", "lo", "mi", "ne", "pu", "ra", "so", "ti", "vu", "xe", "yo", "zi",
    ];
    format!(
        "{}{}{}",
        SYL[k % 12],
        SYL[(k / 12 + j) % 12],
        SYL[j / 12 % 12]
    ) + &"q".repeat(j / 144)
}

/// A corpus where every document is drawn from a single planted topic with
/// its own disjoint vocabulary. Within a topic, term `j` has weight
/// `1 / (j + 1)`. Returns the documents and each document's topic.
pub fn planted_corpus(
    docs: usize,
    topics: usize,
    words_per_topic: usize,
    doc_len: usize,
    seed: u64,
) -> (Vec<CleanDoc>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = (0..words_per_topic).map(|j| 1.0 / (j + 1) as f64).collect();
    let word_dist = WeightedIndex::new(&weights).expect("positive weights");
    let epoch = Utc.with_ymd_and_hms(2020, 11, 1, 0, 0, 0).unwrap();
    let mut out = Vec::with_capacity(docs);
    let mut truth = Vec::with_capacity(docs);
    for d in 0..docs {
        let k = d % topics;
        let tokens = (0..doc_len)
            .map(|_| planted_term(k, word_dist.sample(&mut rng)))
            .collect();
        out.push(CleanDoc {
            id: format!("p{d:04}"),
            timestamp: epoch + Duration::minutes(d as i64),
            author_id: format!("a{d}"),
            tokens,
        });
        truth.push(k);
    }
    (out, truth)
}

const SHIFT_TOPIC: [&str; 12] = [
    "appointment",
    "pharmacy",
    "clinic",
    "booked",
    "slot",
    "waiting",
    "dose",
    "schedule",
    "registration",
    "drive",
    "portal",
    "county",
];
const ELECTION_TOPIC: [&str; 12] = [
    "trump",
    "biden",
    "election",
    "president",
    "administration",
    "vote",
    "campaign",
    "white",
    "house",
    "congress",
    "policy",
    "speech",
];
const SCIENCE_TOPIC: [&str; 12] = [
    "trial",
    "pfizer",
    "moderna",
    "data",
    "efficacy",
    "approval",
    "fda",
    "study",
    "mrna",
    "phase",
    "results",
    "emergency",
];
const FAMILY_TOPIC: [&str; 12] = [
    "mom", "dad", "grandma", "family", "friend", "nurse", "today", "arm", "sore", "shot", "photo",
    "story",
];
const SINK_TOPIC: [&str; 12] = [
    "mask",
    "distancing",
    "lockdown",
    "travel",
    "school",
    "holiday",
    "christmas",
    "stores",
    "restaurant",
    "gym",
    "weekend",
    "flights",
];

/// Topic vocabularies of the golden corpus, in generation order. Topic 0
/// carries the planted weight shift toward negative posts; topic 4 absorbs
/// the matching loss in negative posts.
pub const GOLDEN_TOPICS: [&[&str]; 5] = [
    &SHIFT_TOPIC,
    &ELECTION_TOPIC,
    &SCIENCE_TOPIC,
    &FAMILY_TOPIC,
    &SINK_TOPIC,
];

const NEGATIVE_WORDS: [&str; 8] = [
    "terrible",
    "awful",
    "scared",
    "worried",
    "dangerous",
    "horrible",
    "angry",
    "fear",
];
const POSITIVE_WORDS: [&str; 6] = [
    "grateful", "happy", "hope", "thankful", "relieved", "excited",
];
const FILLER: [&str; 10] = ["the", "a", "is", "we", "to", "and", "of", "it", "in", "my"];

/// Topic mixture for non-negative and negative golden posts.
pub const GOLDEN_MIX_NONNEG: [f64; 5] = [0.10, 0.20, 0.20, 0.20, 0.30];
pub const GOLDEN_MIX_NEG: [f64; 5] = [0.40, 0.20, 0.20, 0.20, 0.00];

/// Raw posts and gold labels of the bundled demo corpus.
pub struct GoldenCorpus {
    pub posts: Vec<RawPost>,
    pub gold: Vec<GoldRecord>,
    /// Planted label of every post that survives filtering.
    pub planted: Vec<(String, SentimentLabel)>,
}

fn month_start(i: u32) -> DateTime<Utc> {
    let (y, m) = if i < 2 { (2020, 11 + i) } else { (2021, i - 1) };
    Utc.with_ymd_and_hms(y, m, 1, 0, 0, 0).unwrap()
}

fn decorate(rng: &mut ChaCha8Rng, word: &str) -> String {
    match rng.gen_range(0..20) {
        0 => format!("#{word}"),
        1 => word.to_uppercase(),
        2 => format!("{word}!"),
        3 => format!("{word},"),
        _ => word.to_string(),
    }
}

/// Builds the demo corpus: 495 unique posts over November 2020 to February
/// 2021, 5 copies posted by other authors (kept), 15 same-author repeats and
/// 20 short posts (both removed by filtering), 500 posts after filtering.
///
/// Each post has a main topic drawn from its group's mixture that supplies
/// about 80% of its topic words; the rest follow the mixture directly.
/// Negative posts carry two negative words and follow [`GOLDEN_MIX_NEG`];
/// the rest carry at most one positive word and follow
/// [`GOLDEN_MIX_NONNEG`]. The negative share falls from 40% in the first
/// month to 25% in the last.
pub fn golden_corpus(seed: u64) -> GoldenCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut posts = Vec::new();
    let mut planted = Vec::new();
    let neg_rate = [0.40, 0.35, 0.30, 0.25];
    let mix_nonneg = WeightedIndex::new(GOLDEN_MIX_NONNEG).unwrap();
    let mix_neg = WeightedIndex::new(
        GOLDEN_MIX_NEG
            .iter()
            .map(|&w| if w == 0.0 { 1e-12 } else { w })
            .collect::<Vec<_>>(),
    )
    .unwrap();
    let zipf: Vec<f64> = (0..12).map(|j| 1.0 / (j + 1) as f64).collect();
    let word_dist = WeightedIndex::new(&zipf).unwrap();

    for i in 0..495 {
        let month = (i % 4) as u32;
        let start = month_start(month);
        let span = (month_start(month + 1) - start).num_seconds();
        let timestamp = start + Duration::seconds(rng.gen_range(0..span));
        let negative = rng.gen_bool(neg_rate[month as usize]);
        let mix = if negative { &mix_neg } else { &mix_nonneg };
        let mut words: Vec<String> = Vec::new();
        let primary = mix.sample(&mut rng);
        for _ in 0..24 {
            let k = if rng.gen_bool(0.8) {
                primary
            } else {
                mix.sample(&mut rng)
            };
            words.push(GOLDEN_TOPICS[k][word_dist.sample(&mut rng)].to_string());
        }
        if negative {
            for _ in 0..2 {
                words.push(NEGATIVE_WORDS.choose(&mut rng).unwrap().to_string());
            }
        } else if rng.gen_bool(0.5) {
            words.push(POSITIVE_WORDS.choose(&mut rng).unwrap().to_string());
        }
        for _ in 0..6 {
            words.push(FILLER.choose(&mut rng).unwrap().to_string());
        }
        words.shuffle(&mut rng);
        let mut text: Vec<String> = words.iter().map(|w| decorate(&mut rng, w)).collect();
        if rng.gen_bool(0.2) {
            text.insert(0, format!("@user{}", rng.gen_range(0..99)));
        }
        if rng.gen_bool(0.2) {
            text.push(format!("https://t.co/{}", rng.gen_range(1000..9999)));
        }
        let id = format!("g{i:04}");
        posts.push(RawPost {
            id: id.clone(),
            text: text.join(" "),
            timestamp,
            author_id: format!("u{i:04}"),
            author_class: AuthorClass::Individual,
        });
        planted.push((
            id,
            if negative {
                SentimentLabel::Negative
            } else {
                SentimentLabel::NonNegative
            },
        ));
    }

    let base = posts.clone();
    for j in 0..5 {
        let src = &base[j * 7];
        posts.push(RawPost {
            id: format!("x{j:04}"),
            author_id: format!("v{j:04}"),
            ..src.clone()
        });
        planted.push((format!("x{j:04}"), planted[j * 7].1));
    }
    for j in 0..15 {
        let src = &base[j * 11 + 3];
        posts.push(RawPost {
            id: format!("r{j:04}"),
            timestamp: src.timestamp + Duration::hours(1),
            ..src.clone()
        });
    }
    for j in 0..20 {
        posts.push(RawPost {
            id: format!("s{j:04}"),
            text: format!("{} vaccine #today", FILLER[j % FILLER.len()]),
            timestamp: month_start((j % 4) as u32) + Duration::days(3),
            author_id: format!("w{j:04}"),
            author_class: AuthorClass::Individual,
        });
    }
    posts.shuffle(&mut rng);

    let mut gold = Vec::new();
    for (id, label) in planted.iter().step_by(4).take(120) {
        let flip = |l: SentimentLabel| match l {
            SentimentLabel::Negative => SentimentLabel::NonNegative,
            SentimentLabel::NonNegative => SentimentLabel::Negative,
        };
        let a = if rng.gen_bool(0.05) {
            flip(*label)
        } else {
            *label
        };
        let b = if rng.gen_bool(0.15) { flip(a) } else { a };
        gold.push(GoldRecord {
            id: id.clone(),
            coder_a: a,
            coder_b: b,
        });
    }
    GoldenCorpus {
        posts,
        gold,
        planted,
    }
}

/// Serializes posts as the JSON Lines input format.
pub fn posts_to_jsonl(posts: &[RawPost]) -> String {
    let mut out = String::new();
    for p in posts {
        let obj = serde_json::json!({
            "id": p.id,
            "text": p.text,
            "created_at": p.timestamp.to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            "author_id": p.author_id,
            "author_class": p.author_class,
        });
        out.push_str(&obj.to_string());
        out.push('\n');
    }
    out
}
