//! Per-criterion LLM judging: prompt construction, yes/no response coding,
//! retry/cache plumbing, and corpus-level assembly.

mod backend;
mod cache;

pub use backend::{BackendError, HttpBackend, JudgeBackend, MockBackend, MockMode};
pub use cache::{hex_sha256, CacheError, ResponseCache};

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Mutex, OnceLock};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::model::{CriterionId, FlawSet, LabelMatrix, LabelSource, Question};

/// Frozen display name and definition for one criterion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionPromptSpec {
    pub criterion: CriterionId,
    pub name: String,
    pub definition: String,
}

/// The 19 prompt specs in canonical criterion order, from the versioned
/// resource file.
pub fn prompt_specs() -> &'static [CriterionPromptSpec] {
    static SPECS: OnceLock<Vec<CriterionPromptSpec>> = OnceLock::new();
    SPECS.get_or_init(|| {
        let specs: Vec<CriterionPromptSpec> =
            serde_json::from_str(include_str!("../../resources/criterion_prompts.json"))
                .expect("valid embedded prompt table");
        assert_eq!(specs.len(), crate::model::CRITERION_COUNT);
        for (i, spec) in specs.iter().enumerate() {
            assert_eq!(spec.criterion, CriterionId::ALL[i], "prompt table out of order");
        }
        specs
    })
}

pub fn prompt_spec(criterion: CriterionId) -> &'static CriterionPromptSpec {
    &prompt_specs()[criterion.index()]
}

/// Render the question block: stem, then lettered options, keyed option
/// annotated "(correct)".
fn render_question(q: &Question) -> String {
    let mut out = q.stem.clone();
    for (i, opt) in q.options.iter().enumerate() {
        let letter = option_letter(i);
        out.push('\n');
        out.push_str(&letter);
        out.push_str(". ");
        out.push_str(opt);
        if i == q.answer_index {
            out.push_str(" (correct)");
        }
    }
    out
}

fn option_letter(i: usize) -> String {
    if i < 26 {
        char::from(b'A' + i as u8).to_string()
    } else {
        (i + 1).to_string()
    }
}

/// Byte-exact prompt for one (question, criterion) pair.
pub fn build_prompt(q: &Question, spec: &CriterionPromptSpec) -> String {
    format!(
        "Begin your response with yes or no, does this multiple-choice question satisfy \
the criteria relating to {}: {}? Explain why. {}",
        spec.name,
        spec.definition,
        render_question(q)
    )
}

/// How the judge's leading yes/no was coded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParsedAnswer {
    Satisfied,
    Violated,
    Indeterminate,
}

/// A coded judge response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JudgeResponse {
    pub raw: String,
    pub parsed: ParsedAnswer,
    pub explanation: String,
}

/// Code a raw response: satisfied iff it begins with "yes" (case-insensitive,
/// after whitespace), violated iff "no", otherwise indeterminate.
pub fn parse_response(raw: &str) -> JudgeResponse {
    let trimmed = raw.trim_start();
    let lower = trimmed.to_lowercase();
    let leading = |word: &str| -> Option<usize> {
        if !lower.starts_with(word) {
            return None;
        }
        match lower[word.len()..].chars().next() {
            Some(c) if c.is_alphanumeric() => None,
            _ => Some(word.len()),
        }
    };
    let (parsed, cut) = if let Some(n) = leading("yes") {
        (ParsedAnswer::Satisfied, n)
    } else if let Some(n) = leading("no") {
        (ParsedAnswer::Violated, n)
    } else {
        (ParsedAnswer::Indeterminate, 0)
    };
    let explanation = trimmed[cut..]
        .trim_start_matches([',', '.', ':', ';', '!', '\u{2014}', '-', ' ', '\t', '\n'])
        .to_string();
    JudgeResponse { raw: raw.to_string(), parsed, explanation }
}

/// What to record when a response stays indeterminate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndeterminatePolicy {
    /// Code as a flaw.
    Flaw,
    /// Code as no flaw.
    NoFlaw,
    /// Ask once more; if still unclear, record no flaw with an audit mark.
    RetryOnceThenNoFlag,
}

#[derive(Debug, Clone)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    pub backoff_base: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy { max_attempts: 3, backoff_base: Duration::from_millis(250) }
    }
}

#[derive(Debug, Clone)]
pub struct JudgeConfig {
    pub retry: RetryPolicy,
    pub concurrency: usize,
    pub cache: Option<ResponseCache>,
    pub policy: IndeterminatePolicy,
    pub criteria: Vec<CriterionId>,
}

impl Default for JudgeConfig {
    fn default() -> Self {
        JudgeConfig {
            retry: RetryPolicy::default(),
            concurrency: 1,
            cache: None,
            policy: IndeterminatePolicy::RetryOnceThenNoFlag,
            criteria: CriterionId::ALL.to_vec(),
        }
    }
}

/// Audit record for one (question, criterion) judgment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionAudit {
    pub question_id: String,
    pub criterion: CriterionId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub response: Option<JudgeResponse>,
    pub attempts: u32,
    pub from_cache: bool,
    /// The response stayed indeterminate after the retry; flaw recorded false.
    pub indeterminate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Judgment of one question across the requested criteria.
#[derive(Debug, Clone)]
pub struct QuestionJudgment {
    pub question_id: String,
    pub flaws: FlawSet,
    pub audits: Vec<CriterionAudit>,
    pub complete: bool,
}

fn judge_one_criterion(
    q: &Question,
    criterion: CriterionId,
    backend: &dyn JudgeBackend,
    cfg: &JudgeConfig,
) -> (Option<bool>, CriterionAudit) {
    let prompt = build_prompt(q, prompt_spec(criterion));
    let mut audit = CriterionAudit {
        question_id: q.id.clone(),
        criterion,
        response: None,
        attempts: 0,
        from_cache: false,
        indeterminate: false,
        error: None,
    };

    let cached = cfg
        .cache
        .as_ref()
        .and_then(|c| c.get(&prompt, backend.model()).ok())
        .flatten();
    let raw = if let Some(raw) = cached {
        audit.from_cache = true;
        raw
    } else {
        match call_with_retries(backend, &prompt, &cfg.retry, &mut audit.attempts) {
            Ok(raw) => raw,
            Err(e) => {
                audit.error = Some(e.to_string());
                return (None, audit);
            }
        }
    };

    let mut response = parse_response(&raw);
    if response.parsed == ParsedAnswer::Indeterminate
        && cfg.policy == IndeterminatePolicy::RetryOnceThenNoFlag
    {
        // one fresh attempt, bypassing the cache
        audit.attempts += 1;
        match backend.complete(&prompt) {
            Ok(retry_raw) => response = parse_response(&retry_raw),
            Err(e) => {
                audit.error = Some(e.to_string());
                return (None, audit);
            }
        }
    }

    if let Some(cache) = &cfg.cache {
        if !audit.from_cache {
            if let Err(e) = cache.put(&prompt, backend.model(), &response.raw) {
                audit.error = Some(e.to_string());
            }
        }
    }

    let flaw = match response.parsed {
        ParsedAnswer::Satisfied => Some(false),
        ParsedAnswer::Violated => Some(true),
        ParsedAnswer::Indeterminate => {
            audit.indeterminate = true;
            match cfg.policy {
                IndeterminatePolicy::Flaw => Some(true),
                // never silently coerced: the audit carries the mark
                IndeterminatePolicy::NoFlaw | IndeterminatePolicy::RetryOnceThenNoFlag => {
                    Some(false)
                }
            }
        }
    };
    audit.response = Some(response);
    (flaw, audit)
}

fn call_with_retries(
    backend: &dyn JudgeBackend,
    prompt: &str,
    retry: &RetryPolicy,
    attempts: &mut u32,
) -> Result<String, BackendError> {
    let mut last_err = None;
    for attempt in 0..retry.max_attempts.max(1) {
        if attempt > 0 && !retry.backoff_base.is_zero() {
            std::thread::sleep(retry.backoff_base * 2u32.pow(attempt - 1));
        }
        *attempts += 1;
        match backend.complete(prompt) {
            Ok(raw) => return Ok(raw),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

/// Judge one question across the configured criteria.
pub fn judge_question(
    q: &Question,
    backend: &dyn JudgeBackend,
    cfg: &JudgeConfig,
) -> QuestionJudgment {
    let mut flaws = FlawSet::new();
    let mut audits = Vec::new();
    let mut complete = true;
    for &criterion in &cfg.criteria {
        let (flaw, audit) = judge_one_criterion(q, criterion, backend, cfg);
        match flaw {
            Some(flagged) => flaws.set(criterion, flagged),
            None => complete = false,
        }
        audits.push(audit);
    }
    QuestionJudgment { question_id: q.id.clone(), flaws, audits, complete }
}

/// Corpus-level judgment: label matrix plus audit log.
#[derive(Debug)]
pub struct CorpusJudgment {
    pub matrix: LabelMatrix,
    pub audits: Vec<CriterionAudit>,
    /// Ids of questions with at least one failed criterion.
    pub incomplete: Vec<String>,
}

/// Judge every question, fanning out up to `cfg.concurrency` workers.
/// Output rows follow corpus order regardless of completion order.
pub fn judge_corpus(
    corpus: &[Question],
    backend: &dyn JudgeBackend,
    cfg: &JudgeConfig,
) -> CorpusJudgment {
    let results: Mutex<Vec<Option<QuestionJudgment>>> =
        Mutex::new((0..corpus.len()).map(|_| None).collect());
    let next = AtomicUsize::new(0);
    let workers = cfg.concurrency.max(1).min(corpus.len().max(1));

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= corpus.len() {
                    break;
                }
                let judgment = judge_question(&corpus[i], backend, cfg);
                results.lock().unwrap()[i] = Some(judgment);
            });
        }
    });

    let mut matrix = LabelMatrix::new(LabelSource::Llm);
    let mut audits = Vec::new();
    let mut incomplete = Vec::new();
    for judgment in results.into_inner().unwrap().into_iter().flatten() {
        matrix
            .push(judgment.question_id.clone(), judgment.flaws)
            .expect("corpus ids unique");
        if !judgment.complete {
            incomplete.push(judgment.question_id.clone());
        }
        audits.extend(judgment.audits);
    }
    // audit log in (question, criterion) order, independent of completion order
    audits.sort_by(|a, b| {
        let qa = matrix.ids().iter().position(|id| *id == a.question_id);
        let qb = matrix.ids().iter().position(|id| *id == b.question_id);
        qa.cmp(&qb).then(a.criterion.index().cmp(&b.criterion.index()))
    });
    CorpusJudgment { matrix, audits, incomplete }
}
