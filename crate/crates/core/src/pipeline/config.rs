use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::sentiment::CompoundParams;
use crate::stats::{TTestKind, DEFAULT_STRATA};
use crate::topics::{CoherenceParams, LdaConfig, SweepParams};

/// Which sentiment engine labels the corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineChoice {
    /// Pick the engine with the best gold-label agreement; needs gold labels.
    Auto,
    #[default]
    Compound,
    Difference,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LexiconPaths {
    /// Sectioned valence CSV for the compound engine.
    pub valence: Option<PathBuf>,
    /// Positive word list for the difference engine.
    pub positive: Option<PathBuf>,
    /// Negative word list for the difference engine.
    pub negative: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LdaSection {
    /// Fixed topic count; when absent the coherence sweep must run.
    pub topics: Option<usize>,
    pub iterations: usize,
    pub alpha: Option<f64>,
    pub beta: f64,
    pub top_words: usize,
}

impl Default for LdaSection {
    fn default() -> Self {
        LdaSection {
            topics: None,
            iterations: 4000,
            alpha: None,
            beta: 0.01,
            top_words: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub enabled: bool,
    pub min_topics: usize,
    pub max_topics: usize,
    pub iterations: usize,
    pub top_n: usize,
    pub window: usize,
    pub epsilon: f64,
}

impl Default for SweepSection {
    fn default() -> Self {
        let p = SweepParams::default();
        SweepSection {
            enabled: false,
            min_topics: p.min_topics,
            max_topics: p.max_topics,
            iterations: p.iterations,
            top_n: p.top_n,
            window: p.coherence.window,
            epsilon: p.coherence.epsilon,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RobustnessSection {
    pub enabled: bool,
    pub runs: usize,
    pub threshold: f64,
}

impl Default for RobustnessSection {
    fn default() -> Self {
        RobustnessSection {
            enabled: false,
            runs: 5,
            threshold: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StatsSection {
    pub round_alpha: bool,
    pub test: TTestKind,
    pub sizes: Vec<usize>,
    pub repeats: usize,
}

impl Default for StatsSection {
    fn default() -> Self {
        StatsSection {
            round_alpha: false,
            test: TTestKind::Welch,
            sizes: DEFAULT_STRATA.to_vec(),
            repeats: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReportSection {
    pub top_k: usize,
}

impl Default for ReportSection {
    fn default() -> Self {
        ReportSection { top_k: 5 }
    }
}

/// Full run configuration, read from a TOML file. Relative paths are
/// resolved against the file's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub input: PathBuf,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub threads: usize,
    pub stopwords: Option<PathBuf>,
    pub keep_apostrophes: bool,
    pub engine: EngineChoice,
    pub gold_labels: Option<PathBuf>,
    pub topic_labels: Option<PathBuf>,
    pub lexicon: LexiconPaths,
    pub compound: CompoundParams,
    pub lda: LdaSection,
    pub sweep: SweepSection,
    pub robustness: RobustnessSection,
    pub stats: StatsSection,
    pub report: ReportSection,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            input: PathBuf::new(),
            out_dir: PathBuf::from("out"),
            seed: 0,
            threads: 0,
            stopwords: None,
            keep_apostrophes: true,
            engine: EngineChoice::default(),
            gold_labels: None,
            topic_labels: None,
            lexicon: LexiconPaths::default(),
            compound: CompoundParams::default(),
            lda: LdaSection::default(),
            sweep: SweepSection::default(),
            robustness: RobustnessSection::default(),
            stats: StatsSection::default(),
            report: ReportSection::default(),
        }
    }
}

fn resolve(base: &Path, p: &mut PathBuf) {
    if p.is_relative() && !p.as_os_str().is_empty() {
        *p = base.join(&*p);
    }
}

impl PipelineConfig {
    pub fn from_toml(text: &str, base_dir: &Path) -> Result<Self, PipelineError> {
        let mut cfg: PipelineConfig =
            toml::from_str(text).map_err(|e| PipelineError::Config(e.to_string()))?;
        cfg.resolve_paths(base_dir);
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PipelineError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text, path.parent().unwrap_or(Path::new(".")))
    }

    fn resolve_paths(&mut self, base: &Path) {
        resolve(base, &mut self.input);
        resolve(base, &mut self.out_dir);
        for p in [
            &mut self.stopwords,
            &mut self.gold_labels,
            &mut self.topic_labels,
            &mut self.lexicon.valence,
            &mut self.lexicon.positive,
            &mut self.lexicon.negative,
        ]
        .into_iter()
        .flatten()
        {
            resolve(base, p);
        }
    }

    /// Checks that referenced files exist and settings are coherent.
    pub fn validate(&self) -> Result<(), PipelineError> {
        let err = |m: String| Err(PipelineError::Config(m));
        if self.input.as_os_str().is_empty() {
            return err("`input` is required".into());
        }
        let files = [
            ("input", Some(&self.input)),
            ("stopwords", self.stopwords.as_ref()),
            ("gold_labels", self.gold_labels.as_ref()),
            ("topic_labels", self.topic_labels.as_ref()),
            ("lexicon.valence", self.lexicon.valence.as_ref()),
            ("lexicon.positive", self.lexicon.positive.as_ref()),
            ("lexicon.negative", self.lexicon.negative.as_ref()),
        ];
        for (name, path) in files {
            if let Some(p) = path {
                if !p.is_file() {
                    return err(format!("{name}: file not found: {}", p.display()));
                }
            }
        }
        if self.lexicon.positive.is_some() != self.lexicon.negative.is_some() {
            return err("lexicon.positive and lexicon.negative must be given together".into());
        }
        if self.engine == EngineChoice::Auto && self.gold_labels.is_none() {
            return err("engine = \"auto\" requires gold_labels".into());
        }
        if self.lda.topics.is_none() && !self.sweep.enabled {
            return err("set lda.topics or enable the coherence sweep".into());
        }
        if self.lda.topics == Some(0) || self.lda.iterations == 0 {
            return err("lda.topics and lda.iterations must be positive".into());
        }
        if self.sweep.enabled
            && (self.sweep.min_topics == 0 || self.sweep.min_topics > self.sweep.max_topics)
        {
            return err("sweep range must satisfy 1 <= min_topics <= max_topics".into());
        }
        if self.robustness.enabled && self.robustness.runs < 2 {
            return err("robustness.runs must be at least 2".into());
        }
        if self.report.top_k == 0 {
            return err("report.top_k must be positive".into());
        }
        Ok(())
    }

    pub fn lda_config(&self, topics: usize) -> LdaConfig {
        LdaConfig {
            topic_count: topics,
            alpha: self.lda.alpha,
            beta: self.lda.beta,
            iterations: self.lda.iterations,
            seed: self.seed,
        }
    }

    pub fn sweep_params(&self) -> SweepParams {
        SweepParams {
            min_topics: self.sweep.min_topics,
            max_topics: self.sweep.max_topics,
            iterations: self.sweep.iterations,
            top_n: self.sweep.top_n,
            coherence: CoherenceParams {
                window: self.sweep.window,
                epsilon: self.sweep.epsilon,
            },
        }
    }
}
