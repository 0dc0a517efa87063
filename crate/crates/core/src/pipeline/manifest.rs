use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{PipelineConfig, PipelineError};
use crate::corpus::IngestCounts;
use crate::sentiment::AgreementReport;
use crate::topics::RobustnessReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Partial,
    Complete,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Seeds {
    pub base: u64,
    pub lda: u64,
    pub sweep: u64,
    pub compare: u64,
    pub robustness: Vec<u64>,
}

impl Seeds {
    pub fn from_config(cfg: &PipelineConfig) -> Self {
        let robustness = if cfg.robustness.enabled {
            (0..cfg.robustness.runs as u64)
                .map(|i| cfg.seed.wrapping_add(i))
                .collect()
        } else {
            Vec::new()
        };
        Seeds {
            base: cfg.seed,
            lda: cfg.seed,
            sweep: cfg.seed,
            compare: cfg.seed,
            robustness,
        }
    }
}

/// Document counts at each hand-off; all three must agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conservation {
    pub surviving_filter: usize,
    pub labeled: usize,
    pub in_statistics: usize,
}

impl Conservation {
    pub fn holds(&self) -> bool {
        self.surviving_filter == self.labeled && self.labeled == self.in_statistics
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub status: RunStatus,
    pub failed_stage: Option<String>,
    pub error: Option<String>,
    pub started_at: String,
    pub finished_at: Option<String>,
    pub config: PipelineConfig,
    pub seeds: Seeds,
    pub input_sha256: Option<String>,
    pub counts: Option<IngestCounts>,
    /// What the sentiment engines read.
    pub sentiment_input: String,
    pub engine: Option<String>,
    pub agreement: Vec<AgreementReport>,
    pub selected_topics: Option<usize>,
    pub retained_topics: Vec<usize>,
    pub robustness: Option<RobustnessReport>,
    pub conservation: Option<Conservation>,
    pub stages_completed: Vec<String>,
    /// SHA-256 of every CSV output, keyed by path relative to the output
    /// directory.
    pub artifacts: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(cfg: &PipelineConfig) -> Self {
        RunManifest {
            version: env!("CARGO_PKG_VERSION").to_string(),
            status: RunStatus::Partial,
            failed_stage: None,
            error: None,
            started_at: now(),
            finished_at: None,
            config: cfg.clone(),
            seeds: Seeds::from_config(cfg),
            input_sha256: None,
            counts: None,
            sentiment_input: "cleaned tokens".into(),
            engine: None,
            agreement: Vec::new(),
            selected_topics: None,
            retained_topics: Vec::new(),
            robustness: None,
            conservation: None,
            stages_completed: Vec::new(),
            artifacts: BTreeMap::new(),
        }
    }

    pub fn write(&self, path: &Path) -> Result<(), PipelineError> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text + "\n").map_err(|e| PipelineError::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self, PipelineError> {
        let text = std::fs::read_to_string(path).map_err(|e| PipelineError::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Records digests of all CSV files under `dir`.
    pub fn collect_artifacts(&mut self, dir: &Path) -> Result<(), PipelineError> {
        self.artifacts.clear();
        let mut stack = vec![dir.to_path_buf()];
        while let Some(d) = stack.pop() {
            for entry in std::fs::read_dir(&d).map_err(|e| PipelineError::io(&d, e))? {
                let path = entry.map_err(|e| PipelineError::io(&d, e))?.path();
                if path.is_dir() {
                    stack.push(path);
                } else if path.extension().is_some_and(|e| e == "csv") {
                    let rel = path.strip_prefix(dir).unwrap_or(&path);
                    let key = rel
                        .components()
                        .map(|c| c.as_os_str().to_string_lossy())
                        .collect::<Vec<_>>()
                        .join("/");
                    self.artifacts.insert(key, file_sha256(&path)?);
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

/// Lowercase hex SHA-256 of a file's bytes.
pub fn file_sha256(path: &Path) -> Result<String, PipelineError> {
    let mut f = std::fs::File::open(path).map_err(|e| PipelineError::io(path, e))?;
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 64 * 1024];
    loop {
        let n = f.read(&mut buf).map_err(|e| PipelineError::io(path, e))?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect())
}
