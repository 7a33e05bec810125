//! Agreement and evaluation statistics for label matrices: match percent,
//! exact-match ratio, Hamming loss, per-criterion and micro F1, Cohen's
//! kappa, flaw-count histograms, verdict confusion, and the hypothesis tests.

pub mod dist;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::model::{
    verdict_with_threshold, CriterionId, FlawSet, LabelMatrix, LabelSource, Verdict,
    CRITERION_COUNT,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("id sets differ; only in first: {only_in_a:?}; only in second: {only_in_b:?}")]
    IdMismatch { only_in_a: Vec<String>, only_in_b: Vec<String> },
    #[error("empty input")]
    Empty,
    #[error("input lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("zero variance in input")]
    ZeroVariance,
    #[error("empty criteria or id subset")]
    EmptySubset,
    #[error("subset id not present in matrices: {0}")]
    UnknownId(String),
    #[error("contingency table must be at least 2x2 with equal row lengths")]
    BadTable,
    #[error("expected count is zero for cell ({0}, {1})")]
    ZeroExpected(usize, usize),
}

/// Two matrices aligned by question id, in the first matrix's row order.
#[derive(Debug, Clone)]
pub struct Aligned {
    pub ids: Vec<String>,
    pub pairs: Vec<(FlawSet, FlawSet)>,
}

/// Align by id. Order may differ between the inputs; mismatched id sets are
/// a hard error naming the symmetric difference.
pub fn align(a: &LabelMatrix, b: &LabelMatrix) -> Result<Aligned, MetricsError> {
    let only_in_a: Vec<String> = a
        .ids()
        .iter()
        .filter(|id| b.row_for(id).is_none())
        .cloned()
        .collect();
    let only_in_b: Vec<String> = b
        .ids()
        .iter()
        .filter(|id| a.row_for(id).is_none())
        .cloned()
        .collect();
    if !only_in_a.is_empty() || !only_in_b.is_empty() {
        return Err(MetricsError::IdMismatch { only_in_a, only_in_b });
    }
    let pairs = a
        .iter()
        .map(|(id, row)| (*row, *b.row_for(id).expect("checked above")))
        .collect();
    Ok(Aligned { ids: a.ids().to_vec(), pairs })
}

fn nonempty(aligned: &Aligned) -> Result<(), MetricsError> {
    if aligned.pairs.is_empty() {
        Err(MetricsError::Empty)
    } else {
        Ok(())
    }
}

/// Agreeing cells over all N x 19 cells.
pub fn match_percent(a: &LabelMatrix, b: &LabelMatrix) -> Result<f64, MetricsError> {
    let aligned = align(a, b)?;
    nonempty(&aligned)?;
    let agree: usize = aligned
        .pairs
        .iter()
        .map(|(x, y)| x.bits().iter().zip(y.bits()).filter(|(p, q)| p == q).count())
        .sum();
    Ok(agree as f64 / (aligned.pairs.len() * CRITERION_COUNT) as f64)
}

/// Fraction of questions whose full 19-bit vectors are equal.
pub fn exact_match_ratio(a: &LabelMatrix, b: &LabelMatrix) -> Result<f64, MetricsError> {
    let aligned = align(a, b)?;
    nonempty(&aligned)?;
    let exact = aligned.pairs.iter().filter(|(x, y)| x == y).count();
    Ok(exact as f64 / aligned.pairs.len() as f64)
}

/// Disagreeing cells over all N x 19 cells; equals 1 - match_percent.
pub fn hamming_loss(a: &LabelMatrix, b: &LabelMatrix) -> Result<f64, MetricsError> {
    Ok(1.0 - match_percent(a, b)?)
}

/// Per-criterion confusion counts and F1, flaw as the positive class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionMetrics {
    pub criterion: CriterionId,
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
    /// Gold positives.
    pub support: usize,
    /// None when the flaw appears in neither gold nor predictions; rendered
    /// as a dash.
    pub f1: Option<f64>,
}

pub fn criterion_f1(
    pred: &LabelMatrix,
    gold: &LabelMatrix,
    criterion: CriterionId,
) -> Result<CriterionMetrics, MetricsError> {
    let aligned = align(pred, gold)?;
    nonempty(&aligned)?;
    let (mut tp, mut fp, mut fn_, mut tn) = (0usize, 0usize, 0usize, 0usize);
    for (p, g) in &aligned.pairs {
        match (p.get(criterion), g.get(criterion)) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => tn += 1,
        }
    }
    let denom = 2 * tp + fp + fn_;
    let f1 = if denom == 0 { None } else { Some(2.0 * tp as f64 / denom as f64) };
    Ok(CriterionMetrics { criterion, tp, fp, fn_, tn, support: tp + fn_, f1 })
}

/// Pooled F1 across a criteria subset and an optional id subset. None when
/// the pooled positives are empty on both sides.
pub fn micro_f1(
    pred: &LabelMatrix,
    gold: &LabelMatrix,
    criteria: &[CriterionId],
    ids: Option<&[String]>,
) -> Result<Option<f64>, MetricsError> {
    if criteria.is_empty() {
        return Err(MetricsError::EmptySubset);
    }
    let aligned = align(pred, gold)?;
    let included: Vec<usize> = match ids {
        None => (0..aligned.ids.len()).collect(),
        Some(subset) => {
            if subset.is_empty() {
                return Err(MetricsError::EmptySubset);
            }
            subset
                .iter()
                .map(|id| {
                    aligned
                        .ids
                        .iter()
                        .position(|x| x == id)
                        .ok_or_else(|| MetricsError::UnknownId(id.clone()))
                })
                .collect::<Result<_, _>>()?
        }
    };
    if included.is_empty() {
        return Err(MetricsError::EmptySubset);
    }
    let (mut tp, mut fp, mut fn_) = (0usize, 0usize, 0usize);
    for &i in &included {
        let (p, g) = aligned.pairs[i];
        for &c in criteria {
            match (p.get(c), g.get(c)) {
                (true, true) => tp += 1,
                (true, false) => fp += 1,
                (false, true) => fn_ += 1,
                (false, false) => {}
            }
        }
    }
    let denom = 2 * tp + fp + fn_;
    Ok(if denom == 0 { None } else { Some(2.0 * tp as f64 / denom as f64) })
}

/// Cohen's kappa with its observed percent agreement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KappaResult {
    pub kappa: f64,
    pub percent_agreement: f64,
}

/// Chance-corrected agreement between two binary columns. When both raters
/// are constant and identical the chance term is 1; kappa is defined as 1.
pub fn cohen_kappa(a: &[bool], b: &[bool]) -> Result<KappaResult, MetricsError> {
    if a.len() != b.len() {
        return Err(MetricsError::LengthMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Err(MetricsError::Empty);
    }
    let n = a.len() as f64;
    let agree = a.iter().zip(b).filter(|(x, y)| x == y).count() as f64;
    let a1 = a.iter().filter(|&&x| x).count() as f64;
    let b1 = b.iter().filter(|&&x| x).count() as f64;
    let po = agree / n;
    let pe = (a1 * b1 + (n - a1) * (n - b1)) / (n * n);
    let kappa = if (1.0 - pe).abs() < 1e-12 { 1.0 } else { (po - pe) / (1.0 - pe) };
    Ok(KappaResult { kappa, percent_agreement: po })
}

/// Kappa between the same criterion column of two matrices.
pub fn criterion_kappa(
    a: &LabelMatrix,
    b: &LabelMatrix,
    criterion: CriterionId,
) -> Result<KappaResult, MetricsError> {
    let aligned = align(a, b)?;
    let xs: Vec<bool> = aligned.pairs.iter().map(|(x, _)| x.get(criterion)).collect();
    let ys: Vec<bool> = aligned.pairs.iter().map(|(_, y)| y.get(criterion)).collect();
    cohen_kappa(&xs, &ys)
}

/// Bin i holds the number of questions with exactly i flaws.
pub fn flaw_count_histogram(m: &LabelMatrix) -> [usize; CRITERION_COUNT + 1] {
    let mut bins = [0usize; CRITERION_COUNT + 1];
    for row in m.rows() {
        bins[row.count() as usize] += 1;
    }
    bins
}

/// 2x2 verdict confusion; counts[gold][pred] with index 0 acceptable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerdictConfusion {
    pub counts: [[usize; 2]; 2],
    pub threshold: u32,
}

impl VerdictConfusion {
    pub fn n(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    /// Agreeing questions (the matrix trace).
    pub fn trace(&self) -> usize {
        self.counts[0][0] + self.counts[1][1]
    }

    pub fn agreement_rate(&self) -> f64 {
        self.trace() as f64 / self.n() as f64
    }
}

fn verdict_bin(flaws: &FlawSet, threshold: u32) -> usize {
    match verdict_with_threshold(flaws.count(), threshold).expect("popcount in range") {
        Verdict::Acceptable => 0,
        Verdict::Unacceptable => 1,
    }
}

pub fn verdict_confusion(
    pred: &LabelMatrix,
    gold: &LabelMatrix,
    threshold: u32,
) -> Result<VerdictConfusion, MetricsError> {
    let aligned = align(pred, gold)?;
    nonempty(&aligned)?;
    let mut counts = [[0usize; 2]; 2];
    for (p, g) in &aligned.pairs {
        counts[verdict_bin(g, threshold)][verdict_bin(p, threshold)] += 1;
    }
    Ok(VerdictConfusion { counts, threshold })
}

/// Result of one hypothesis test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StatTestResult {
    pub statistic: f64,
    pub df: f64,
    pub p_value: f64,
    pub n: usize,
    /// Mean of the paired differences (t test only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean: Option<f64>,
    /// SD of the paired differences (t test only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sd: Option<f64>,
}

fn mean_of(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Product-moment correlation with df = n - 2 and a two-tailed p from the
/// t transform. Constant input is an error, not a NaN.
pub fn pearson_r(x: &[f64], y: &[f64]) -> Result<StatTestResult, MetricsError> {
    if x.len() != y.len() {
        return Err(MetricsError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 3 {
        return Err(MetricsError::TooFewSamples { need: 3, got: x.len() });
    }
    let (mx, my) = (mean_of(x), mean_of(y));
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        sxy += (xi - mx) * (yi - my);
        sxx += (xi - mx) * (xi - mx);
        syy += (yi - my) * (yi - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(MetricsError::ZeroVariance);
    }
    let r = (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0);
    let df = (x.len() - 2) as f64;
    let p = if (r.abs() - 1.0).abs() < 1e-15 {
        0.0
    } else {
        dist::t_two_tailed_p(r * (df / (1.0 - r * r)).sqrt(), df)
    };
    Ok(StatTestResult { statistic: r, df, p_value: p, n: x.len(), mean: None, sd: None })
}

/// Paired t test on x - y with df = n - 1. Identical vectors give t = 0;
/// constant nonzero differences have no finite t and are an error.
pub fn paired_t(x: &[f64], y: &[f64]) -> Result<StatTestResult, MetricsError> {
    if x.len() != y.len() {
        return Err(MetricsError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(MetricsError::TooFewSamples { need: 2, got: x.len() });
    }
    let d: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let md = mean_of(&d);
    let var = d.iter().map(|v| (v - md) * (v - md)).sum::<f64>() / (d.len() - 1) as f64;
    let sd = var.sqrt();
    let df = (d.len() - 1) as f64;
    if sd == 0.0 {
        if md == 0.0 {
            return Ok(StatTestResult {
                statistic: 0.0,
                df,
                p_value: 1.0,
                n: x.len(),
                mean: Some(0.0),
                sd: Some(0.0),
            });
        }
        return Err(MetricsError::ZeroVariance);
    }
    let t = md / (sd / (d.len() as f64).sqrt());
    Ok(StatTestResult {
        statistic: t,
        df,
        p_value: dist::t_two_tailed_p(t, df),
        n: x.len(),
        mean: Some(md),
        sd: Some(sd),
    })
}

/// Pearson chi-square on an observed-count table, df = (rows-1)(cols-1).
pub fn chi_square(table: &[Vec<f64>]) -> Result<StatTestResult, MetricsError> {
    let rows = table.len();
    if rows < 2 || table[0].len() < 2 || table.iter().any(|r| r.len() != table[0].len()) {
        return Err(MetricsError::BadTable);
    }
    let cols = table[0].len();
    let total: f64 = table.iter().flatten().sum();
    let row_sums: Vec<f64> = table.iter().map(|r| r.iter().sum()).collect();
    let col_sums: Vec<f64> = (0..cols).map(|j| table.iter().map(|r| r[j]).sum()).collect();
    let mut stat = 0.0;
    for (i, row) in table.iter().enumerate() {
        for (j, &obs) in row.iter().enumerate() {
            let expected = row_sums[i] * col_sums[j] / total;
            if expected <= 0.0 {
                return Err(MetricsError::ZeroExpected(i, j));
            }
            stat += (obs - expected) * (obs - expected) / expected;
        }
    }
    let df = ((rows - 1) * (cols - 1)) as f64;
    Ok(StatTestResult {
        statistic: stat,
        df,
        p_value: dist::chi_square_p(stat, df),
        n: total.round() as usize,
        mean: None,
        sd: None,
    })
}

/// Everything `eval` reports for one predicted-vs-gold comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalSummary {
    pub pred_source: LabelSource,
    pub gold_source: LabelSource,
    pub n: usize,
    pub match_percent: f64,
    pub exact_match_ratio: f64,
    pub hamming_loss: f64,
    pub per_criterion: Vec<CriterionMetrics>,
    pub micro_f1: Option<f64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub micro_f1_by_domain: BTreeMap<String, Option<f64>>,
    pub histogram_pred: [usize; CRITERION_COUNT + 1],
    pub histogram_gold: [usize; CRITERION_COUNT + 1],
    pub confusion: VerdictConfusion,
}

pub fn evaluate(
    pred: &LabelMatrix,
    gold: &LabelMatrix,
    threshold: u32,
) -> Result<EvalSummary, MetricsError> {
    let per_criterion = CriterionId::ALL
        .iter()
        .map(|&c| criterion_f1(pred, gold, c))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EvalSummary {
        pred_source: pred.source(),
        gold_source: gold.source(),
        n: gold.len(),
        match_percent: match_percent(pred, gold)?,
        exact_match_ratio: exact_match_ratio(pred, gold)?,
        hamming_loss: hamming_loss(pred, gold)?,
        per_criterion,
        micro_f1: micro_f1(pred, gold, &CriterionId::ALL, None)?,
        micro_f1_by_domain: BTreeMap::new(),
        histogram_pred: flaw_count_histogram(pred),
        histogram_gold: flaw_count_histogram(gold),
        confusion: verdict_confusion(pred, gold, threshold)?,
    })
}

/// Add per-domain micro-F1 columns; `domains` maps domain name to its ids.
pub fn evaluate_by_domain(
    summary: &mut EvalSummary,
    pred: &LabelMatrix,
    gold: &LabelMatrix,
    domains: &BTreeMap<String, Vec<String>>,
) -> Result<(), MetricsError> {
    for (domain, ids) in domains {
        let f1 = micro_f1(pred, gold, &CriterionId::ALL, Some(ids))?;
        summary.micro_f1_by_domain.insert(domain.clone(), f1);
    }
    Ok(())
}

fn fmt_opt_f1(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x:.3}"),
        None => "-".to_string(),
    }
}

fn source_tag(s: LabelSource) -> &'static str {
    match s {
        LabelSource::Human => "human",
        LabelSource::Rules => "rules",
        LabelSource::Llm => "llm",
        LabelSource::Other => "other",
    }
}

impl EvalSummary {
    /// Aligned plain-text report: agreement block, flaw-count histogram,
    /// per-criterion F1 table, verdict confusion matrix.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let pred = source_tag(self.pred_source);
        let gold = source_tag(self.gold_source);
        out.push_str(&format!("Evaluation: {pred} vs {gold} (N = {})\n\n", self.n));
        out.push_str(&format!("  match percent      {:.4}\n", self.match_percent));
        out.push_str(&format!("  exact match ratio  {:.4}\n", self.exact_match_ratio));
        out.push_str(&format!("  hamming loss       {:.4}\n", self.hamming_loss));
        out.push_str(&format!("  micro F1           {}\n", fmt_opt_f1(self.micro_f1)));
        for (domain, f1) in &self.micro_f1_by_domain {
            out.push_str(&format!("  micro F1 [{domain}]  {}\n", fmt_opt_f1(*f1)));
        }

        let max_bin = (0..=CRITERION_COUNT)
            .rev()
            .find(|&i| self.histogram_pred[i] + self.histogram_gold[i] > 0)
            .unwrap_or(0);
        out.push_str("\nFlaws per question\n");
        out.push_str("  count ");
        for i in 0..=max_bin {
            out.push_str(&format!("{i:>6}"));
        }
        out.push('\n');
        for (tag, hist) in [(gold, &self.histogram_gold), (pred, &self.histogram_pred)] {
            out.push_str(&format!("  {tag:<6}"));
            for v in hist.iter().take(max_bin + 1) {
                out.push_str(&format!("{v:>6}"));
            }
            out.push('\n');
        }

        out.push_str("\nPer-criterion F1 (flaw = positive)\n");
        out.push_str(&format!("  {:<24} {:>4} {:>7}\n", "criterion", "N", "F1"));
        for m in &self.per_criterion {
            out.push_str(&format!(
                "  {:<24} {:>4} {:>7}\n",
                m.criterion.as_str(),
                m.support,
                fmt_opt_f1(m.f1)
            ));
        }

        let c = &self.confusion.counts;
        out.push_str(&format!(
            "\nVerdict confusion (rows = {gold}, cols = {pred}, threshold = {})\n",
            self.confusion.threshold
        ));
        out.push_str(&format!("  {:<14}{:>12}{:>14}\n", "", "acceptable", "unacceptable"));
        out.push_str(&format!("  {:<14}{:>12}{:>14}\n", "acceptable", c[0][0], c[0][1]));
        out.push_str(&format!("  {:<14}{:>12}{:>14}\n", "unacceptable", c[1][0], c[1][1]));
        out.push_str(&format!(
            "  verdict agreement: {}/{} ({:.1}%)\n",
            self.confusion.trace(),
            self.confusion.n(),
            100.0 * self.confusion.agreement_rate()
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(source: LabelSource, rows: &[(&str, &[CriterionId])]) -> LabelMatrix {
        let mut m = LabelMatrix::new(source);
        for (id, flagged) in rows {
            let mut set = FlawSet::new();
            for &c in *flagged {
                set.set(c, true);
            }
            m.push(id.to_string(), set).unwrap();
        }
        m
    }

    use CriterionId::*;

    #[test]
    fn match_percent_identical_and_complement() {
        let a = matrix(LabelSource::Human, &[("q1", &[NoneOfTheAbove]), ("q2", &[])]);
        assert_eq!(match_percent(&a, &a).unwrap(), 1.0);
        let all: Vec<CriterionId> = CriterionId::ALL.to_vec();
        let b = matrix(LabelSource::Rules, &[("q1", &all[..]), ("q2", &all[..])]);
        let inv_a = matrix(LabelSource::Human, &[("q1", &[NoneOfTheAbove]), ("q2", &[])]);
        // complement of inv_a relative to b: q1 disagrees on 18 cells, q2 on 19
        let mp = match_percent(&inv_a, &b).unwrap();
        assert!((mp - 1.0 / 38.0).abs() < 1e-12);
    }

    #[test]
    fn match_percent_half() {
        // N=2, differ in 19 of 38 cells: q1 identical, q2 fully complementary
        let a = matrix(LabelSource::Human, &[("q1", &[VagueTerms]), ("q2", &[])]);
        let all: Vec<CriterionId> = CriterionId::ALL.to_vec();
        let b = matrix(LabelSource::Rules, &[("q1", &[VagueTerms]), ("q2", &all[..])]);
        assert!((match_percent(&a, &b).unwrap() - 0.5).abs() < 1e-12);
        assert!((hamming_loss(&a, &b).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn exact_match_quarter() {
        let a = matrix(
            LabelSource::Human,
            &[("q1", &[]), ("q2", &[VagueTerms]), ("q3", &[]), ("q4", &[])],
        );
        let b = matrix(
            LabelSource::Rules,
            &[("q1", &[]), ("q2", &[]), ("q3", &[AbsoluteTerms]), ("q4", &[LogicalCues])],
        );
        assert!((exact_match_ratio(&a, &b).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn alignment_reorders_and_rejects_mismatches() {
        let a = matrix(LabelSource::Human, &[("q1", &[VagueTerms]), ("q2", &[])]);
        let b = matrix(LabelSource::Rules, &[("q2", &[]), ("q1", &[VagueTerms])]);
        assert_eq!(match_percent(&a, &b).unwrap(), 1.0);
        let c = matrix(LabelSource::Rules, &[("q1", &[]), ("q9", &[])]);
        match align(&a, &c).unwrap_err() {
            MetricsError::IdMismatch { only_in_a, only_in_b } => {
                assert_eq!(only_in_a, vec!["q2"]);
                assert_eq!(only_in_b, vec!["q9"]);
            }
            other => panic!("unexpected error: {other:?}"),
        }
    }

    #[test]
    fn criterion_f1_examples() {
        let gold = matrix(LabelSource::Human, &[("q1", &[VagueTerms]), ("q2", &[])]);
        let m = criterion_f1(&gold, &gold, VagueTerms).unwrap();
        assert_eq!(m.f1, Some(1.0));
        assert_eq!(m.support, 1);

        // TP=1, FP=1, FN=1, TN=0 over three questions
        let g = matrix(
            LabelSource::Human,
            &[("q1", &[VagueTerms]), ("q2", &[VagueTerms]), ("q3", &[])],
        );
        let p = matrix(
            LabelSource::Rules,
            &[("q1", &[VagueTerms]), ("q2", &[]), ("q3", &[VagueTerms])],
        );
        let m = criterion_f1(&p, &g, VagueTerms).unwrap();
        assert_eq!((m.tp, m.fp, m.fn_, m.tn), (1, 1, 1, 0));
        assert_eq!(m.f1, Some(0.5));

        // both columns all-negative: dash
        let m = criterion_f1(&p, &g, LostSequence).unwrap();
        assert_eq!(m.f1, None);
        assert_eq!(m.tn, 3);
    }

    #[test]
    fn micro_f1_pooled_and_reduction() {
        // pooled TP=3, FP=1, FN=2 -> 6/9
        let g = matrix(
            LabelSource::Human,
            &[
                ("q1", &[VagueTerms, AbsoluteTerms]),
                ("q2", &[VagueTerms, LogicalCues]),
                ("q3", &[NegativeWorded]),
            ],
        );
        let p = matrix(
            LabelSource::Rules,
            &[
                ("q1", &[VagueTerms, AbsoluteTerms]),
                ("q2", &[VagueTerms, FillInBlank]),
                ("q3", &[]),
            ],
        );
        let f1 = micro_f1(&p, &g, &CriterionId::ALL, None).unwrap().unwrap();
        assert!((f1 - 6.0 / 9.0).abs() < 1e-12);

        let single = micro_f1(&p, &g, &[VagueTerms], None).unwrap().unwrap();
        let per = criterion_f1(&p, &g, VagueTerms).unwrap().f1.unwrap();
        assert!((single - per).abs() < 1e-12);

        assert_eq!(micro_f1(&p, &g, &[], None).unwrap_err(), MetricsError::EmptySubset);
        assert!(matches!(
            micro_f1(&p, &g, &[VagueTerms], Some(&["zz".to_string()])),
            Err(MetricsError::UnknownId(_))
        ));
    }

    #[test]
    fn kappa_identities() {
        let a = [true, false, true, false, true];
        let r = cohen_kappa(&a, &a).unwrap();
        assert_eq!(r.kappa, 1.0);
        assert_eq!(r.percent_agreement, 1.0);

        // both constant and equal: pe = 1, defined as kappa = 1
        let c = [false; 4];
        assert_eq!(cohen_kappa(&c, &c).unwrap().kappa, 1.0);

        // independence: a splits b evenly within each level, so po = pe
        let x = [true, true, false, false];
        let y = [true, false, true, false];
        let r = cohen_kappa(&x, &y).unwrap();
        assert!(r.kappa.abs() < 1e-12);

        // symmetry
        let u = [true, false, false, true, true, false];
        let v = [true, true, false, false, true, true];
        let r1 = cohen_kappa(&u, &v).unwrap();
        let r2 = cohen_kappa(&v, &u).unwrap();
        assert!((r1.kappa - r2.kappa).abs() < 1e-12);
    }

    #[test]
    fn kappa_hand_computed_contingency() {
        // 50 pairs: 40 both-no, 6 both-yes, 2 yes/no, 2 no/yes
        let mut a = Vec::new();
        let mut b = Vec::new();
        for _ in 0..40 {
            a.push(false);
            b.push(false);
        }
        for _ in 0..6 {
            a.push(true);
            b.push(true);
        }
        for _ in 0..2 {
            a.push(true);
            b.push(false);
        }
        for _ in 0..2 {
            a.push(false);
            b.push(true);
        }
        let r = cohen_kappa(&a, &b).unwrap();
        // po = 46/50, pe = (8*8 + 42*42)/2500 = 1828/2500
        let po: f64 = 46.0 / 50.0;
        let pe: f64 = 1828.0 / 2500.0;
        assert!((r.percent_agreement - po).abs() < 1e-12);
        assert!((r.kappa - (po - pe) / (1.0 - pe)).abs() < 1e-12);
    }

    #[test]
    fn histogram_popcount_tally() {
        let m = matrix(
            LabelSource::Human,
            &[
                ("q1", &[]),
                ("q2", &[VagueTerms]),
                ("q3", &[AbsoluteTerms]),
                ("q4", &[VagueTerms, AbsoluteTerms, LogicalCues]),
            ],
        );
        let h = flaw_count_histogram(&m);
        assert_eq!(h[0], 1);
        assert_eq!(h[1], 2);
        assert_eq!(h[2], 0);
        assert_eq!(h[3], 1);
        assert_eq!(h.iter().sum::<usize>(), 4);
    }

    #[test]
    fn verdict_confusion_threshold_application() {
        // gold counts {1,3}, pred counts {2,3}
        let gold = matrix(
            LabelSource::Human,
            &[("q1", &[VagueTerms]), ("q2", &[VagueTerms, AbsoluteTerms, LogicalCues])],
        );
        let pred = matrix(
            LabelSource::Rules,
            &[
                ("q1", &[VagueTerms, NegativeWorded]),
                ("q2", &[VagueTerms, AbsoluteTerms, LogicalCues]),
            ],
        );
        let c = verdict_confusion(&pred, &gold, 2).unwrap();
        assert_eq!(c.counts, [[0, 1], [0, 1]]);
        assert_eq!(c.trace(), 1);
        assert!((c.agreement_rate() - 0.5).abs() < 1e-12);

        let same = verdict_confusion(&gold, &gold, 2).unwrap();
        assert_eq!(same.counts[0][1] + same.counts[1][0], 0);
    }

    #[test]
    fn pearson_linear_and_errors() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let r = pearson_r(&x, &x).unwrap();
        assert_eq!(r.statistic, 1.0);
        assert_eq!(r.p_value, 0.0);
        assert_eq!(r.df, 2.0);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert_eq!(pearson_r(&x, &neg).unwrap().statistic, -1.0);
        let flat = [2.0, 2.0, 2.0, 2.0];
        assert_eq!(pearson_r(&x, &flat).unwrap_err(), MetricsError::ZeroVariance);
        assert!(matches!(
            pearson_r(&[1.0, 2.0], &[1.0, 2.0]),
            Err(MetricsError::TooFewSamples { .. })
        ));
    }

    #[test]
    fn pearson_fixture_matches_direct_formula() {
        let x = [2.0, 4.0, 5.0, 4.0, 7.0, 8.0, 1.0];
        let y = [1.0, 3.0, 6.0, 5.0, 6.0, 9.0, 2.0];
        let r = pearson_r(&x, &y).unwrap();
        let n = x.len() as f64;
        let sx: f64 = x.iter().sum();
        let sy: f64 = y.iter().sum();
        let sxy: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let sxx: f64 = x.iter().map(|a| a * a).sum();
        let syy: f64 = y.iter().map(|a| a * a).sum();
        let direct = (n * sxy - sx * sy)
            / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt());
        assert!((r.statistic - direct).abs() < 1e-12);
    }

    #[test]
    fn paired_t_examples() {
        let x = [1.0, 2.0, 3.0];
        let r = paired_t(&x, &x).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);

        // d = {1,1,1,-1}: mean 0.5, sd 1, t = 0.5/(1/2) = 1
        let a = [2.0, 3.0, 4.0, 1.0];
        let b = [1.0, 2.0, 3.0, 2.0];
        let r = paired_t(&a, &b).unwrap();
        assert!((r.statistic - 1.0).abs() < 1e-12);
        assert_eq!(r.df, 3.0);
        let flipped = paired_t(&b, &a).unwrap();
        assert!((flipped.statistic + r.statistic).abs() < 1e-12);
        assert!((flipped.p_value - r.p_value).abs() < 1e-12);

        // constant nonzero differences have no finite t
        let c = [2.0, 3.0, 4.0];
        let d = [1.0, 2.0, 3.0];
        assert_eq!(paired_t(&c, &d).unwrap_err(), MetricsError::ZeroVariance);
    }

    #[test]
    fn chi_square_examples() {
        // table proportional to its margins: statistic 0, p = 1
        let t = vec![vec![10.0, 20.0], vec![20.0, 40.0]];
        let r = chi_square(&t).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
        assert_eq!(r.df, 1.0);

        // 2x3 fixture against the direct sum
        let t = vec![vec![12.0, 7.0, 9.0], vec![8.0, 13.0, 11.0]];
        let r = chi_square(&t).unwrap();
        assert_eq!(r.df, 2.0);
        let total = 60.0;
        let rows = [28.0, 32.0];
        let cols = [20.0, 20.0, 20.0];
        let mut direct = 0.0;
        for (i, row) in t.iter().enumerate() {
            for (j, &obs) in row.iter().enumerate() {
                let e = rows[i] * cols[j] / total;
                direct += (obs - e) * (obs - e) / e;
            }
        }
        assert!((r.statistic - direct).abs() < 1e-12);

        assert_eq!(chi_square(&[vec![1.0, 2.0]]).unwrap_err(), MetricsError::BadTable);
        assert!(matches!(
            chi_square(&[vec![0.0, 0.0], vec![1.0, 2.0]]),
            Err(MetricsError::ZeroExpected(..))
        ));
    }

    #[test]
    fn evaluate_assembles_consistent_summary() {
        let gold = matrix(
            LabelSource::Human,
            &[("q1", &[VagueTerms]), ("q2", &[VagueTerms, AbsoluteTerms]), ("q3", &[])],
        );
        let pred = matrix(
            LabelSource::Rules,
            &[("q1", &[VagueTerms]), ("q2", &[VagueTerms]), ("q3", &[])],
        );
        let s = evaluate(&pred, &gold, 2).unwrap();
        assert_eq!(s.n, 3);
        assert!((s.match_percent + s.hamming_loss - 1.0).abs() < 1e-12);
        assert!(s.exact_match_ratio <= s.match_percent);
        assert_eq!(s.histogram_gold.iter().sum::<usize>(), 3);
        assert_eq!(s.per_criterion.len(), 19);
        let text = s.render_text();
        assert!(text.contains("hamming loss"));
        assert!(text.contains("vague_terms"));
        assert!(text.contains("-"), "dash for absent criteria");
        serde_json::to_string(&s).unwrap();
    }
}
