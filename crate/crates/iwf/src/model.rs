//! Shared domain types: questions, the 19-criterion rubric, flaw sets and
//! reports, and label matrices.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Default flaw count at which a question becomes unacceptable.
pub const DEFAULT_VERDICT_THRESHOLD: u32 = 2;

/// Number of rubric criteria.
pub const CRITERION_COUNT: usize = 19;

/// The 19 item-writing flaw criteria, in canonical rubric order.
///
/// The discriminant order is the stable label-vector order used everywhere:
/// file columns, prompt tables, and metric reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionId {
    AmbiguousInformation,
    ImplausibleDistractors,
    NoneOfTheAbove,
    LongestOptionCorrect,
    GratuitousInformation,
    TrueFalseQuestion,
    ConvergenceCues,
    LogicalCues,
    AllOfTheAbove,
    FillInBlank,
    AbsoluteTerms,
    WordRepeats,
    UnfocusedStem,
    ComplexKType,
    GrammaticalCues,
    LostSequence,
    VagueTerms,
    MoreThanOneCorrect,
    NegativeWorded,
}

impl CriterionId {
    /// All criteria in canonical order.
    pub const ALL: [CriterionId; CRITERION_COUNT] = [
        CriterionId::AmbiguousInformation,
        CriterionId::ImplausibleDistractors,
        CriterionId::NoneOfTheAbove,
        CriterionId::LongestOptionCorrect,
        CriterionId::GratuitousInformation,
        CriterionId::TrueFalseQuestion,
        CriterionId::ConvergenceCues,
        CriterionId::LogicalCues,
        CriterionId::AllOfTheAbove,
        CriterionId::FillInBlank,
        CriterionId::AbsoluteTerms,
        CriterionId::WordRepeats,
        CriterionId::UnfocusedStem,
        CriterionId::ComplexKType,
        CriterionId::GrammaticalCues,
        CriterionId::LostSequence,
        CriterionId::VagueTerms,
        CriterionId::MoreThanOneCorrect,
        CriterionId::NegativeWorded,
    ];

    /// Position in the canonical label-vector order.
    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&c| c == self).expect("criterion in ALL")
    }

    /// Criterion at a canonical label-vector position.
    pub fn from_index(i: usize) -> Option<CriterionId> {
        Self::ALL.get(i).copied()
    }

    /// Stable snake_case identifier.
    pub fn as_str(self) -> &'static str {
        match self {
            CriterionId::AmbiguousInformation => "ambiguous_information",
            CriterionId::ImplausibleDistractors => "implausible_distractors",
            CriterionId::NoneOfTheAbove => "none_of_the_above",
            CriterionId::LongestOptionCorrect => "longest_option_correct",
            CriterionId::GratuitousInformation => "gratuitous_information",
            CriterionId::TrueFalseQuestion => "true_false_question",
            CriterionId::ConvergenceCues => "convergence_cues",
            CriterionId::LogicalCues => "logical_cues",
            CriterionId::AllOfTheAbove => "all_of_the_above",
            CriterionId::FillInBlank => "fill_in_blank",
            CriterionId::AbsoluteTerms => "absolute_terms",
            CriterionId::WordRepeats => "word_repeats",
            CriterionId::UnfocusedStem => "unfocused_stem",
            CriterionId::ComplexKType => "complex_k_type",
            CriterionId::GrammaticalCues => "grammatical_cues",
            CriterionId::LostSequence => "lost_sequence",
            CriterionId::VagueTerms => "vague_terms",
            CriterionId::MoreThanOneCorrect => "more_than_one_correct",
            CriterionId::NegativeWorded => "negative_worded",
        }
    }
}

impl fmt::Display for CriterionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown criterion name: {0}")]
pub struct UnknownCriterion(pub String);

impl FromStr for CriterionId {
    type Err = UnknownCriterion;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CriterionId::ALL
            .iter()
            .copied()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| UnknownCriterion(s.to_string()))
    }
}

/// One multiple-choice question.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Question {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<String>,
    pub stem: String,
    pub options: Vec<String>,
    pub answer_index: usize,
}

/// A single invariant violation found while validating a question.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuestionError {
    #[error("empty id")]
    EmptyId,
    #[error("empty stem")]
    EmptyStem,
    #[error("empty option at index {0}")]
    EmptyOption(usize),
    #[error("fewer than 2 options (got {0})")]
    TooFewOptions(usize),
    #[error("answer_index {answer_index} out of range for {option_count} options")]
    AnswerIndexOutOfRange { answer_index: usize, option_count: usize },
}

impl Question {
    /// Validate raw fields into a `Question`, collecting every violation.
    pub fn validate(
        id: impl Into<String>,
        domain: Option<String>,
        stem: impl Into<String>,
        options: Vec<String>,
        answer_index: usize,
    ) -> Result<Question, Vec<QuestionError>> {
        let id = id.into();
        let stem = stem.into();
        let mut errors = Vec::new();
        if id.trim().is_empty() {
            errors.push(QuestionError::EmptyId);
        }
        if stem.trim().is_empty() {
            errors.push(QuestionError::EmptyStem);
        }
        if options.len() < 2 {
            errors.push(QuestionError::TooFewOptions(options.len()));
        }
        for (i, opt) in options.iter().enumerate() {
            if opt.trim().is_empty() {
                errors.push(QuestionError::EmptyOption(i));
            }
        }
        if answer_index >= options.len() {
            errors.push(QuestionError::AnswerIndexOutOfRange {
                answer_index,
                option_count: options.len(),
            });
        }
        if errors.is_empty() {
            Ok(Question { id, domain, stem, options, answer_index })
        } else {
            Err(errors)
        }
    }

    /// The keyed correct option text.
    pub fn correct_option(&self) -> &str {
        &self.options[self.answer_index]
    }

    /// Indices of the distractors (every option except the keyed one).
    pub fn distractor_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.options.len()).filter(move |&i| i != self.answer_index)
    }
}

/// 19-bit label vector: `true` means the criterion is violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FlawSet([bool; CRITERION_COUNT]);

impl FlawSet {
    pub fn new() -> FlawSet {
        FlawSet::default()
    }

    pub fn from_bits(bits: [bool; CRITERION_COUNT]) -> FlawSet {
        FlawSet(bits)
    }

    pub fn get(&self, c: CriterionId) -> bool {
        self.0[c.index()]
    }

    pub fn set(&mut self, c: CriterionId, flagged: bool) {
        self.0[c.index()] = flagged;
    }

    /// Number of violated criteria.
    pub fn count(&self) -> u32 {
        self.0.iter().filter(|&&b| b).count() as u32
    }

    /// Bits in canonical criterion order.
    pub fn bits(&self) -> &[bool; CRITERION_COUNT] {
        &self.0
    }

    /// Violated criteria in canonical order.
    pub fn flagged(&self) -> impl Iterator<Item = CriterionId> + '_ {
        CriterionId::ALL.iter().copied().filter(move |c| self.get(*c))
    }
}

/// Where a piece of evidence points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "index")]
pub enum Location {
    Stem,
    Option(usize),
}

/// Character range within a stem or option.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub location: Location,
    pub start: usize,
    pub end: usize,
}

/// Why a detector flagged (or annotated) a criterion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub criterion: CriterionId,
    pub message: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub spans: Vec<Span>,
}

impl Evidence {
    pub fn new(criterion: CriterionId, message: impl Into<String>) -> Evidence {
        Evidence { criterion, message: message.into(), spans: Vec::new() }
    }

    pub fn with_span(mut self, location: Location, start: usize, end: usize) -> Evidence {
        self.spans.push(Span { location, start, end });
        self
    }
}

/// Acceptability verdict for a question.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Acceptable,
    Unacceptable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Acceptable => f.write_str("acceptable"),
            Verdict::Unacceptable => f.write_str("unacceptable"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("flaw count {0} out of range 0..=19")]
pub struct FlawCountOutOfRange(pub u32);

/// Verdict at the default threshold: 0 or 1 flaws is acceptable, 2+ is not.
pub fn verdict_of(flaw_count: u32) -> Result<Verdict, FlawCountOutOfRange> {
    verdict_with_threshold(flaw_count, DEFAULT_VERDICT_THRESHOLD)
}

/// Verdict with a caller-supplied unacceptability threshold.
pub fn verdict_with_threshold(
    flaw_count: u32,
    threshold: u32,
) -> Result<Verdict, FlawCountOutOfRange> {
    if flaw_count > CRITERION_COUNT as u32 {
        return Err(FlawCountOutOfRange(flaw_count));
    }
    Ok(if flaw_count < threshold { Verdict::Acceptable } else { Verdict::Unacceptable })
}

/// Per-question linting result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlawReport {
    pub question_id: String,
    pub flaws: FlawSet,
    pub evidence: Vec<Evidence>,
    pub flaw_count: u32,
    pub verdict: Verdict,
}

impl FlawReport {
    /// Assemble a report; `flaw_count` and `verdict` are derived, never stored
    /// inconsistently.
    pub fn new(
        question_id: impl Into<String>,
        flaws: FlawSet,
        evidence: Vec<Evidence>,
        threshold: u32,
    ) -> FlawReport {
        let flaw_count = flaws.count();
        let verdict = verdict_with_threshold(flaw_count, threshold)
            .expect("popcount of a 19-bit set is in range");
        FlawReport { question_id: question_id.into(), flaws, evidence, flaw_count, verdict }
    }
}

/// Which method produced a label matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelSource {
    Human,
    Rules,
    Llm,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LabelMatrixError {
    #[error("duplicate question id: {0}")]
    DuplicateId(String),
}

/// Corpus-by-criterion binary label matrix from any labeling source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMatrix {
    ids: Vec<String>,
    rows: Vec<FlawSet>,
    source: LabelSource,
}

impl LabelMatrix {
    pub fn new(source: LabelSource) -> LabelMatrix {
        LabelMatrix { ids: Vec::new(), rows: Vec::new(), source }
    }

    pub fn from_rows(
        source: LabelSource,
        rows: impl IntoIterator<Item = (String, FlawSet)>,
    ) -> Result<LabelMatrix, LabelMatrixError> {
        let mut m = LabelMatrix::new(source);
        for (id, row) in rows {
            m.push(id, row)?;
        }
        Ok(m)
    }

    pub fn push(&mut self, id: String, row: FlawSet) -> Result<(), LabelMatrixError> {
        if self.ids.contains(&id) {
            return Err(LabelMatrixError::DuplicateId(id));
        }
        self.ids.push(id);
        self.rows.push(row);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn rows(&self) -> &[FlawSet] {
        &self.rows
    }

    pub fn source(&self) -> LabelSource {
        self.source
    }

    pub fn row_for(&self, id: &str) -> Option<&FlawSet> {
        self.ids.iter().position(|x| x == id).map(|i| &self.rows[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &FlawSet)> {
        self.ids.iter().map(|s| s.as_str()).zip(self.rows.iter())
    }
}
