//! The 19 rule-based flaw detectors.
//!
//! Each detector is a pure function from a valid [`Question`] (plus shared
//! text services and optional pluggable scorers) to a flag and supporting
//! [`Evidence`]. [`run_all`] assembles a [`FlawReport`].

mod heuristics;
mod rules;

pub use heuristics::HeuristicScorer;
pub use rules::detect;

use std::collections::BTreeSet;

use crate::model::{
    CriterionId, Evidence, FlawReport, FlawSet, Question, DEFAULT_VERDICT_THRESHOLD,
};

/// What a question-answering scorer believes the correct option is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnswerJudgment {
    Index(usize),
    Multiple,
    Unknown,
}

/// Pluggable model-backed scoring interface.
///
/// The default implementation ([`HeuristicScorer`]) is deterministic and
/// offline; LLM-backed implementations may be substituted. Implementations
/// must declare whether they are deterministic.
pub trait PluggableScorer {
    /// Linguistic acceptability of a stem, in [0, 1].
    fn acceptability(&self, text: &str) -> f64;
    /// Plausibility of the option at `option_index` as a distractor, in [0, 1].
    fn plausibility(&self, q: &Question, option_index: usize) -> f64;
    /// Which option the scorer would answer, if it can.
    fn answer(&self, q: &Question) -> AnswerJudgment;
    /// Whether equal inputs always produce equal outputs.
    fn deterministic(&self) -> bool;
}

/// Detector thresholds and the enabled-criteria set.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorConfig {
    pub enabled: BTreeSet<CriterionId>,
    /// Character edit budget for fuzzy phrase matching.
    pub fuzzy_edits: usize,
    /// Minimum stem-similarity margin of the keyed option over the best
    /// distractor before logical cues flag.
    pub cue_margin: f64,
    /// Acceptability score below which a stem counts as ambiguous.
    pub ambiguity_threshold: f64,
    /// Plausibility score below which a distractor counts as implausible.
    pub plausibility_threshold: f64,
    /// Stem token count beyond which the default scorer applies a length
    /// penalty.
    pub stem_token_limit: usize,
    /// Flaw count at which the verdict becomes unacceptable.
    pub verdict_threshold: u32,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            enabled: CriterionId::ALL.iter().copied().collect(),
            fuzzy_edits: 2,
            cue_margin: 0.34,
            ambiguity_threshold: 0.5,
            plausibility_threshold: 0.25,
            stem_token_limit: 60,
            verdict_threshold: DEFAULT_VERDICT_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected 'key = value', got {text:?}")]
    Malformed { line: usize, text: String },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: invalid value for {key}: {value:?}")]
    InvalidValue { line: usize, key: String, value: String },
    #[error("{key} out of range: {value}")]
    OutOfRange { key: String, value: f64 },
}

impl DetectorConfig {
    /// Parse a plain key-value config file (`key = value`, `#` comments).
    ///
    /// Recognized keys: `fuzzy_edits`, `cue_margin`, `ambiguity_threshold`,
    /// `plausibility_threshold`, `stem_token_limit`, `threshold`, and `rules`
    /// (comma-separated criterion names).
    pub fn from_kv_str(text: &str) -> Result<DetectorConfig, ConfigError> {
        let mut cfg = DetectorConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Malformed {
                line: line_no,
                text: raw.to_string(),
            })?;
            let key = key.trim();
            let value = value.trim();
            let invalid = || ConfigError::InvalidValue {
                line: line_no,
                key: key.to_string(),
                value: value.to_string(),
            };
            match key {
                "fuzzy_edits" => cfg.fuzzy_edits = value.parse().map_err(|_| invalid())?,
                "cue_margin" => cfg.cue_margin = value.parse().map_err(|_| invalid())?,
                "ambiguity_threshold" => {
                    cfg.ambiguity_threshold = value.parse().map_err(|_| invalid())?
                }
                "plausibility_threshold" => {
                    cfg.plausibility_threshold = value.parse().map_err(|_| invalid())?
                }
                "stem_token_limit" => {
                    cfg.stem_token_limit = value.parse().map_err(|_| invalid())?
                }
                "threshold" => cfg.verdict_threshold = value.parse().map_err(|_| invalid())?,
                "rules" => {
                    let mut enabled = BTreeSet::new();
                    for name in value.split(',') {
                        let name = name.trim();
                        if name.is_empty() {
                            continue;
                        }
                        enabled.insert(name.parse::<CriterionId>().map_err(|_| invalid())?);
                    }
                    cfg.enabled = enabled;
                }
                _ => {
                    return Err(ConfigError::UnknownKey { line: line_no, key: key.to_string() })
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let unit = |key: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(ConfigError::OutOfRange { key: key.to_string(), value: v })
            }
        };
        unit("cue_margin", self.cue_margin)?;
        unit("ambiguity_threshold", self.ambiguity_threshold)?;
        unit("plausibility_threshold", self.plausibility_threshold)?;
        if self.fuzzy_edits > 10 {
            return Err(ConfigError::OutOfRange {
                key: "fuzzy_edits".into(),
                value: self.fuzzy_edits as f64,
            });
        }
        Ok(())
    }
}

/// Run every enabled detector and assemble a [`FlawReport`].
///
/// Disabled criteria report `false` with a "disabled" evidence note.
pub fn run_all(q: &Question, cfg: &DetectorConfig, scorer: &dyn PluggableScorer) -> FlawReport {
    let mut flaws = FlawSet::new();
    let mut evidence = Vec::new();
    for criterion in CriterionId::ALL {
        if !cfg.enabled.contains(&criterion) {
            evidence.push(Evidence::new(criterion, "disabled"));
            continue;
        }
        let ev = detect(criterion, q, cfg, scorer);
        if !ev.is_empty() {
            flaws.set(criterion, true);
            evidence.extend(ev);
        }
    }
    FlawReport::new(q.id.clone(), flaws, evidence, cfg.verdict_threshold)
}
