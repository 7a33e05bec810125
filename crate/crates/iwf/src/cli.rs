//! The `iwf` command-line surface: `lint`, `judge`, `eval`, and `compare`.
//!
//! Exit codes: 0 success, 1 usage or IO error, 2 validation error in inputs,
//! 3 judge run incomplete. No command writes partial primary output on a
//! nonzero exit (exit 3 writes complete output with incomplete rows flagged).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand};

use crate::detect::{run_all, DetectorConfig, HeuristicScorer};
use crate::io::{
    emit_labels, emit_report, lint_summary, load_corpus, load_labels, write_output, IoError,
    ReportFormat,
};
use crate::judge::{
    judge_corpus, HttpBackend, JudgeBackend, JudgeConfig, MockBackend, ResponseCache,
};
use crate::metrics::{self, MetricsError};
use crate::model::{CriterionId, LabelMatrix, LabelSource, DEFAULT_VERDICT_THRESHOLD};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE_IO: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_JUDGE_INCOMPLETE: i32 = 3;

#[derive(Debug)]
enum CliError {
    UsageOrIo(String),
    Validation(String),
    JudgeIncomplete(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::UsageOrIo(_) => EXIT_USAGE_IO,
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::JudgeIncomplete(_) => EXIT_JUDGE_INCOMPLETE,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::UsageOrIo(m) | CliError::Validation(m) | CliError::JudgeIncomplete(m) => m,
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> CliError {
        match e {
            IoError::Read { .. } | IoError::Write { .. } => CliError::UsageOrIo(e.to_string()),
            IoError::Json { .. }
            | IoError::InvalidQuestion { .. }
            | IoError::DuplicateId { .. }
            | IoError::UnknownCriterion { .. } => CliError::Validation(e.to_string()),
        }
    }
}

impl From<MetricsError> for CliError {
    fn from(e: MetricsError) -> CliError {
        CliError::Validation(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "iwf",
    version,
    about = "Lint multiple-choice questions for the 19 item-writing flaws",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the rule-based detectors over a JSONL corpus.
    Lint {
        corpus: PathBuf,
        /// Comma-separated criterion names to enable (default: all 19).
        #[arg(long)]
        rules: Option<String>,
        /// Flaw count at which a question becomes unacceptable.
        #[arg(long)]
        threshold: Option<u32>,
        /// Detector config file (key = value lines).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Report format: json, tsv, or table.
        #[arg(long, default_value = "table")]
        format: String,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the flags as a JSONL label file usable by eval/compare.
        #[arg(long)]
        labels_out: Option<PathBuf>,
    },
    /// Ask an LLM judge each criterion for each question.
    Judge {
        corpus: PathBuf,
        /// Chat-completion endpoint URL, or mock://satisfied,
        /// mock://violated, mock://indeterminate, mock://fail-if=MARKER.
        #[arg(long)]
        endpoint: String,
        #[arg(long, default_value = "gpt-4")]
        model: String,
        #[arg(long, default_value_t = 4)]
        concurrency: usize,
        /// Response cache directory.
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Comma-separated criterion subset (default: all 19).
        #[arg(long)]
        criteria: Option<String>,
        /// Output label file (JSONL).
        #[arg(long)]
        out: PathBuf,
        /// Audit log path (default: <out>.audit.json).
        #[arg(long)]
        audit_out: Option<PathBuf>,
    },
    /// Score a predicted label file against gold labels.
    Eval {
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        gold: PathBuf,
        /// Corpus file supplying the optional domain field for per-domain
        /// micro-F1 columns.
        #[arg(long)]
        by_domain: Option<PathBuf>,
        /// Output format: json or table.
        #[arg(long, default_value = "table")]
        format: String,
        #[arg(long, default_value_t = DEFAULT_VERDICT_THRESHOLD)]
        threshold: u32,
    },
    /// Compare two labeling methods against the same gold labels.
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        gold: PathBuf,
        #[arg(long, default_value_t = DEFAULT_VERDICT_THRESHOLD)]
        threshold: u32,
    },
}

/// Parse `args` (including argv[0]) and run; returns the process exit code.
pub fn run(args: impl IntoIterator<Item = String>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // help and version are success paths, not usage errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE_IO,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("iwf: {}", e.message());
            e.code()
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Lint { corpus, rules, threshold, config, format, out, labels_out } => {
            cmd_lint(&corpus, rules, threshold, config, &format, out, labels_out)
        }
        Command::Judge { corpus, endpoint, model, concurrency, cache, criteria, out, audit_out } => {
            cmd_judge(&corpus, &endpoint, &model, concurrency, cache, criteria, &out, audit_out)
        }
        Command::Eval { pred, gold, by_domain, format, threshold } => {
            cmd_eval(&pred, &gold, by_domain, &format, threshold)
        }
        Command::Compare { a, b, gold, threshold } => cmd_compare(&a, &b, &gold, threshold),
    }
}

fn parse_criteria(spec: &str) -> Result<Vec<CriterionId>, CliError> {
    let mut out = Vec::new();
    for name in spec.split(',') {
        let name = name.trim();
        if name.is_empty() {
            continue;
        }
        let c: CriterionId = name
            .parse()
            .map_err(|_| CliError::Validation(format!("unknown criterion name: {name:?}")))?;
        if !out.contains(&c) {
            out.push(c);
        }
    }
    if out.is_empty() {
        return Err(CliError::Validation("empty criteria list".to_string()));
    }
    Ok(out)
}

fn emit(out: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match out {
        Some(path) => Ok(write_output(path, contents)?),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn cmd_lint(
    corpus_path: &Path,
    rules: Option<String>,
    threshold: Option<u32>,
    config: Option<PathBuf>,
    format: &str,
    out: Option<PathBuf>,
    labels_out: Option<PathBuf>,
) -> Result<(), CliError> {
    let format: ReportFormat = format.parse().map_err(CliError::UsageOrIo)?;
    let mut cfg = match &config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| {
                CliError::from(IoError::Read { path: path.clone(), source })
            })?;
            DetectorConfig::from_kv_str(&text).map_err(|e| {
                CliError::Validation(format!("{}: {e}", path.display()))
            })?
        }
        None => DetectorConfig::default(),
    };
    if let Some(spec) = &rules {
        cfg.enabled = parse_criteria(spec)?.into_iter().collect();
    }
    if let Some(t) = threshold {
        cfg.verdict_threshold = t;
    }
    cfg.validate().map_err(|e| CliError::Validation(e.to_string()))?;

    let corpus = load_corpus(corpus_path)?;
    let scorer = HeuristicScorer::new(cfg.stem_token_limit, cfg.fuzzy_edits);
    let reports: Vec<_> = corpus.iter().map(|q| run_all(q, &cfg, &scorer)).collect();

    // all output rendered before anything is written
    let rendered = emit_report(&reports, format);
    let labels = labels_out.as_ref().map(|_| {
        let mut m = LabelMatrix::new(LabelSource::Rules);
        for r in &reports {
            m.push(r.question_id.clone(), r.flaws).expect("corpus ids unique");
        }
        emit_labels(&m)
    });
    let summary = lint_summary(&reports);

    emit(out.as_deref(), &rendered)?;
    if let (Some(path), Some(text)) = (&labels_out, &labels) {
        write_output(path, text)?;
    }
    eprint!("{summary}");
    Ok(())
}

fn cmd_judge(
    corpus_path: &Path,
    endpoint: &str,
    model: &str,
    concurrency: usize,
    cache: Option<PathBuf>,
    criteria: Option<String>,
    out: &Path,
    audit_out: Option<PathBuf>,
) -> Result<(), CliError> {
    let corpus = load_corpus(corpus_path)?;

    let backend: Box<dyn JudgeBackend> = if endpoint.starts_with("mock://") {
        Box::new(MockBackend::from_endpoint(endpoint, model).ok_or_else(|| {
            CliError::UsageOrIo(format!("unrecognized mock endpoint: {endpoint}"))
        })?)
    } else {
        // key check happens before any request goes out
        let api_key = std::env::var("IWF_API_KEY")
            .map_err(|_| CliError::UsageOrIo("IWF_API_KEY is not set".to_string()))?;
        Box::new(
            HttpBackend::new(endpoint, model, api_key, Duration::from_secs(120))
                .map_err(|e| CliError::UsageOrIo(e.to_string()))?,
        )
    };

    let mut cfg = JudgeConfig::default();
    cfg.concurrency = concurrency.max(1);
    cfg.cache = cache.map(ResponseCache::new);
    if let Some(spec) = &criteria {
        cfg.criteria = parse_criteria(spec)?;
    }

    let result = judge_corpus(&corpus, backend.as_ref(), &cfg);
    write_output(out, &emit_labels(&result.matrix))?;
    let audit_path = audit_out.unwrap_or_else(|| {
        let mut s = out.as_os_str().to_os_string();
        s.push(".audit.json");
        PathBuf::from(s)
    });
    let mut audit_json =
        serde_json::to_string_pretty(&result.audits).expect("serializable audit log");
    audit_json.push('\n');
    write_output(&audit_path, &audit_json)?;

    eprintln!(
        "judged {} questions, {} backend calls, {} incomplete",
        corpus.len(),
        backend.calls(),
        result.incomplete.len()
    );
    if !result.incomplete.is_empty() {
        return Err(CliError::JudgeIncomplete(format!(
            "incomplete judgments for: {}",
            result.incomplete.join(", ")
        )));
    }
    Ok(())
}

fn domain_groups(corpus_path: &Path) -> Result<BTreeMap<String, Vec<String>>, CliError> {
    let corpus = load_corpus(corpus_path)?;
    let mut groups: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for q in corpus {
        if let Some(domain) = q.domain {
            groups.entry(domain).or_default().push(q.id);
        }
    }
    Ok(groups)
}

fn cmd_eval(
    pred_path: &Path,
    gold_path: &Path,
    by_domain: Option<PathBuf>,
    format: &str,
    threshold: u32,
) -> Result<(), CliError> {
    if format != "json" && format != "table" {
        return Err(CliError::UsageOrIo(format!(
            "unknown format {format:?} (expected json or table)"
        )));
    }
    let pred = load_labels(pred_path, LabelSource::Rules)?;
    let gold = load_labels(gold_path, LabelSource::Human)?;
    let mut summary = metrics::evaluate(&pred, &gold, threshold)?;
    if let Some(corpus_path) = by_domain {
        let groups = domain_groups(&corpus_path)?;
        metrics::evaluate_by_domain(&mut summary, &pred, &gold, &groups)?;
    }
    if format == "json" {
        let mut text = serde_json::to_string_pretty(&summary).expect("serializable summary");
        text.push('\n');
        print!("{text}");
    } else {
        print!("{}", summary.render_text());
    }
    Ok(())
}

fn per_criterion_flaw_counts(m: &LabelMatrix) -> Vec<f64> {
    CriterionId::ALL
        .iter()
        .map(|&c| m.rows().iter().filter(|r| r.get(c)).count() as f64)
        .collect()
}

fn per_question_flaw_counts(m: &LabelMatrix) -> Vec<f64> {
    m.rows().iter().map(|r| r.count() as f64).collect()
}

fn fmt_stat(result: Result<metrics::StatTestResult, MetricsError>, label: &str) -> String {
    match result {
        Ok(r) => format!(
            "{label}: statistic = {:.4}, df = {}, p = {:.6}",
            r.statistic, r.df, r.p_value
        ),
        Err(e) => format!("{label}: NA ({e})"),
    }
}

fn cmd_compare(
    a_path: &Path,
    b_path: &Path,
    gold_path: &Path,
    threshold: u32,
) -> Result<(), CliError> {
    let a = load_labels(a_path, LabelSource::Rules)?;
    let b = load_labels(b_path, LabelSource::Llm)?;
    let gold = load_labels(gold_path, LabelSource::Human)?;

    let summary_a = metrics::evaluate(&a, &gold, threshold)?;
    let summary_b = metrics::evaluate(&b, &gold, threshold)?;
    let ab_match = metrics::match_percent(&a, &b)?;

    let mut out = String::new();
    out.push_str("=== method A vs gold ===\n");
    out.push_str(&summary_a.render_text());
    out.push_str("\n=== method B vs gold ===\n");
    out.push_str(&summary_b.render_text());
    out.push_str(&format!("\n=== method A vs method B ===\n  match percent      {ab_match:.4}\n"));

    out.push_str("\n=== per-criterion flaw-count correlation with gold ===\n");
    let gold_counts = per_criterion_flaw_counts(&gold);
    for (label, m) in [("A", &a), ("B", &b)] {
        let r = metrics::pearson_r(&per_criterion_flaw_counts(m), &gold_counts);
        out.push_str(&format!("  {}\n", fmt_stat(r, &format!("pearson r ({label} vs gold)"))));
    }

    out.push_str("\n=== paired t-test on per-question flaw counts ===\n");
    let gold_q = per_question_flaw_counts(&gold);
    for (label, m) in [("A", &a), ("B", &b)] {
        let aligned = metrics::align(m, &gold)?;
        let xs: Vec<f64> = aligned.pairs.iter().map(|(x, _)| x.count() as f64).collect();
        let ys: Vec<f64> = aligned.pairs.iter().map(|(_, y)| y.count() as f64).collect();
        debug_assert_eq!(ys.len(), gold_q.len());
        let t = metrics::paired_t(&xs, &ys);
        out.push_str(&format!("  {}\n", fmt_stat(t, &format!("t ({label} vs gold)"))));
    }

    print!("{out}");
    Ok(())
}
