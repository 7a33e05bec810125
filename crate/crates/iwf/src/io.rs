//! JSONL corpus and label loading plus stable report emission.
//!
//! Question record: `{"id", "domain"?, "stem", "options", "answer_index"}`.
//! Label record: `{"id", "flaws": [criterion names]}` with a missing list
//! meaning all-false. All output is UTF-8 with LF line endings.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::model::{
    CriterionId, Evidence, FlawReport, LabelMatrix, LabelSource, Question, QuestionError,
    Verdict, CRITERION_COUNT,
};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: malformed JSON: {source}")]
    Json {
        path: PathBuf,
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}:{line}: invalid question: {}", format_question_errors(.errors))]
    InvalidQuestion {
        path: PathBuf,
        line: usize,
        errors: Vec<QuestionError>,
    },
    #[error("{path}: duplicate id {id:?} on lines {first_line} and {second_line}")]
    DuplicateId {
        path: PathBuf,
        id: String,
        first_line: usize,
        second_line: usize,
    },
    #[error("{path}:{line}: unknown criterion name: {name:?}")]
    UnknownCriterion {
        path: PathBuf,
        line: usize,
        name: String,
    },
}

fn format_question_errors(errors: &[QuestionError]) -> String {
    errors.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; ")
}

fn numbered_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty())
}

/// Load a JSONL question corpus, validating every record. Errors carry the
/// 1-based line number; duplicate ids name both lines.
pub fn load_corpus(path: &Path) -> Result<Vec<Question>, IoError> {
    let text = fs::read_to_string(path)
        .map_err(|source| IoError::Read { path: path.to_path_buf(), source })?;
    let mut questions = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (line, raw) in numbered_lines(&text) {
        let parsed: Question = serde_json::from_str(raw)
            .map_err(|source| IoError::Json { path: path.to_path_buf(), line, source })?;
        let q = Question::validate(
            parsed.id,
            parsed.domain,
            parsed.stem,
            parsed.options,
            parsed.answer_index,
        )
        .map_err(|errors| IoError::InvalidQuestion { path: path.to_path_buf(), line, errors })?;
        if let Some(&first_line) = seen.get(&q.id) {
            return Err(IoError::DuplicateId {
                path: path.to_path_buf(),
                id: q.id,
                first_line,
                second_line: line,
            });
        }
        seen.insert(q.id.clone(), line);
        questions.push(q);
    }
    Ok(questions)
}

#[derive(Debug, Serialize, Deserialize)]
struct LabelRecord {
    id: String,
    #[serde(default)]
    flaws: Vec<String>,
}

/// Load a JSONL label file into a matrix tagged with `source`.
pub fn load_labels(path: &Path, source: LabelSource) -> Result<LabelMatrix, IoError> {
    let text = fs::read_to_string(path)
        .map_err(|source| IoError::Read { path: path.to_path_buf(), source })?;
    let mut matrix = LabelMatrix::new(source);
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (line, raw) in numbered_lines(&text) {
        let record: LabelRecord = serde_json::from_str(raw)
            .map_err(|source| IoError::Json { path: path.to_path_buf(), line, source })?;
        let mut flaws = crate::model::FlawSet::new();
        for name in &record.flaws {
            let criterion: CriterionId = name.parse().map_err(|_| IoError::UnknownCriterion {
                path: path.to_path_buf(),
                line,
                name: name.clone(),
            })?;
            flaws.set(criterion, true);
        }
        if let Some(&first_line) = seen.get(&record.id) {
            return Err(IoError::DuplicateId {
                path: path.to_path_buf(),
                id: record.id,
                first_line,
                second_line: line,
            });
        }
        seen.insert(record.id.clone(), line);
        matrix.push(record.id, flaws).expect("duplicates caught above");
    }
    Ok(matrix)
}

/// Serialize a label matrix back to JSONL; load_labels of the output is the
/// identity.
pub fn emit_labels(matrix: &LabelMatrix) -> String {
    let mut out = String::new();
    for (id, flaws) in matrix.iter() {
        let record = LabelRecord {
            id: id.to_string(),
            flaws: flaws.flagged().map(|c| c.as_str().to_string()).collect(),
        };
        out.push_str(&serde_json::to_string(&record).expect("serializable record"));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Tsv,
    Table,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "tsv" => Ok(ReportFormat::Tsv),
            "table" => Ok(ReportFormat::Table),
            other => Err(format!("unknown format {other:?} (expected json, tsv, or table)")),
        }
    }
}

#[derive(Serialize)]
struct ReportRecord<'a> {
    id: &'a str,
    flaws: &'a [Evidence],
    flaw_count: u32,
    verdict: Verdict,
}

/// Render flaw reports. Output bytes are a pure function of the input:
/// stable key order, criterion columns in canonical order.
pub fn emit_report(reports: &[FlawReport], format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let records: Vec<ReportRecord> = reports
                .iter()
                .map(|r| ReportRecord {
                    id: &r.question_id,
                    flaws: &r.evidence,
                    flaw_count: r.flaw_count,
                    verdict: r.verdict,
                })
                .collect();
            let mut out = serde_json::to_string_pretty(&records).expect("serializable reports");
            out.push('\n');
            out
        }
        ReportFormat::Tsv => {
            let mut out = String::from("id");
            for c in CriterionId::ALL {
                out.push('\t');
                out.push_str(c.as_str());
            }
            out.push_str("\tflaw_count\tverdict\n");
            for r in reports {
                out.push_str(&r.question_id);
                for bit in r.flaws.bits() {
                    out.push('\t');
                    out.push(if *bit { '1' } else { '0' });
                }
                let _ = write!(out, "\t{}\t{}\n", r.flaw_count, r.verdict);
            }
            out
        }
        ReportFormat::Table => {
            let mut out = String::new();
            for r in reports {
                let _ = writeln!(
                    out,
                    "{}: {} ({} flaw{})",
                    r.question_id,
                    r.verdict,
                    r.flaw_count,
                    if r.flaw_count == 1 { "" } else { "s" }
                );
                for c in r.flaws.flagged() {
                    let _ = writeln!(out, "  [{c}]");
                    for e in r.evidence.iter().filter(|e| e.criterion == c) {
                        let _ = writeln!(out, "    {}", e.message);
                    }
                }
            }
            out
        }
    }
}

/// Aggregate line block for lint output: per-criterion totals, flaw-count
/// histogram, verdict totals.
pub fn lint_summary(reports: &[FlawReport]) -> String {
    let mut per_criterion = [0usize; CRITERION_COUNT];
    let mut histogram = [0usize; CRITERION_COUNT + 1];
    let mut acceptable = 0usize;
    for r in reports {
        for c in r.flaws.flagged() {
            per_criterion[c.index()] += 1;
        }
        histogram[r.flaw_count as usize] += 1;
        if r.verdict == Verdict::Acceptable {
            acceptable += 1;
        }
    }
    let mut out = format!("questions: {}\n", reports.len());
    let _ = writeln!(
        out,
        "verdicts: {} acceptable, {} unacceptable",
        acceptable,
        reports.len() - acceptable
    );
    let hist: Vec<String> = histogram
        .iter()
        .enumerate()
        .filter(|(_, &n)| n > 0)
        .map(|(count, n)| format!("{count}:{n}"))
        .collect();
    let _ = writeln!(out, "flaw-count histogram: {}", hist.join(" "));
    for (i, &n) in per_criterion.iter().enumerate() {
        if n > 0 {
            let _ = writeln!(out, "  {}: {}", CriterionId::ALL[i], n);
        }
    }
    out
}

/// Write a file, creating parent directories first.
pub fn write_output(path: &Path, contents: &str) -> Result<(), IoError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|source| IoError::Write { path: parent.to_path_buf(), source })?;
        }
    }
    fs::write(path, contents)
        .map_err(|source| IoError::Write { path: path.to_path_buf(), source })
}
