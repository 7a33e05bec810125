//! Rule logic for each of the 19 criteria.
//!
//! Every detector returns the supporting evidence; an empty list means the
//! criterion is not violated. Detectors never fail on a valid question.

use std::collections::BTreeSet;

use super::{AnswerJudgment, DetectorConfig, PluggableScorer};
use crate::model::{CriterionId, Evidence, Location, Question};
use crate::textkit::{
    content_words, fuzzy_contains, jaccard, lexicons, parse_numeric, split_sentences, tokenize,
    Token, TokenClass,
};

/// Run one detector.
pub fn detect(
    criterion: CriterionId,
    q: &Question,
    cfg: &DetectorConfig,
    scorer: &dyn PluggableScorer,
) -> Vec<Evidence> {
    match criterion {
        CriterionId::AmbiguousInformation => ambiguous_information(q, cfg, scorer),
        CriterionId::ImplausibleDistractors => implausible_distractors(q, cfg, scorer),
        CriterionId::NoneOfTheAbove => none_of_the_above(q, cfg),
        CriterionId::LongestOptionCorrect => longest_option_correct(q),
        CriterionId::GratuitousInformation => gratuitous_information(q),
        CriterionId::TrueFalseQuestion => true_false_question(q),
        CriterionId::ConvergenceCues => convergence_cues(q),
        CriterionId::LogicalCues => logical_cues(q, cfg),
        CriterionId::AllOfTheAbove => all_of_the_above(q, cfg),
        CriterionId::FillInBlank => fill_in_blank(q),
        CriterionId::AbsoluteTerms => absolute_terms(q, cfg),
        CriterionId::WordRepeats => word_repeats(q),
        CriterionId::UnfocusedStem => unfocused_stem(q),
        CriterionId::ComplexKType => complex_k_type(q),
        CriterionId::GrammaticalCues => grammatical_cues(q),
        CriterionId::LostSequence => lost_sequence(q),
        CriterionId::VagueTerms => vague_terms(q, cfg),
        CriterionId::MoreThanOneCorrect => more_than_one_correct(q, scorer),
        CriterionId::NegativeWorded => negative_worded(q, cfg),
    }
}

/// Byte spans in `text` matched by any of the meta-option phrases.
fn phrase_spans<'a>(
    text: &str,
    phrases: impl Iterator<Item = &'a str>,
    max_edits: usize,
) -> Vec<(usize, usize)> {
    phrases.filter_map(|p| fuzzy_contains(text, p, max_edits)).collect()
}

fn inside_any(span: (usize, usize), spans: &[(usize, usize)]) -> bool {
    spans.iter().any(|&(s, e)| span.0 >= s && span.1 <= e)
}

fn none_of_the_above(q: &Question, cfg: &DetectorConfig) -> Vec<Evidence> {
    phrase_lexicon_hits(q, &lexicons().none_phrases.entries().collect::<Vec<_>>(), cfg.fuzzy_edits)
        .into_iter()
        .map(|(i, s, e)| {
            Evidence::new(CriterionId::NoneOfTheAbove, "option is a none-of-the-above variant")
                .with_span(Location::Option(i), s, e)
        })
        .collect()
}

fn all_of_the_above(q: &Question, cfg: &DetectorConfig) -> Vec<Evidence> {
    phrase_lexicon_hits(q, &lexicons().all_phrases.entries().collect::<Vec<_>>(), cfg.fuzzy_edits)
        .into_iter()
        .map(|(i, s, e)| {
            Evidence::new(CriterionId::AllOfTheAbove, "option is an all-of-the-above variant")
                .with_span(Location::Option(i), s, e)
        })
        .collect()
}

fn phrase_lexicon_hits(
    q: &Question,
    phrases: &[&str],
    max_edits: usize,
) -> Vec<(usize, usize, usize)> {
    let mut hits = Vec::new();
    for (i, opt) in q.options.iter().enumerate() {
        for phrase in phrases {
            if let Some((s, e)) = fuzzy_contains(opt, phrase, max_edits) {
                hits.push((i, s, e));
                break;
            }
        }
    }
    hits
}

fn longest_option_correct(q: &Question) -> Vec<Evidence> {
    let char_len = |s: &str| s.trim().chars().count();
    let word_len = |s: &str| tokenize(s).iter().filter(|t| t.is_word()).count();
    let key = q.answer_index;
    let key_chars = char_len(&q.options[key]);
    let key_words = word_len(&q.options[key]);
    let strictly_longest_chars =
        q.distractor_indices().all(|i| char_len(&q.options[i]) < key_chars);
    let longest_or_tied_words = q.distractor_indices().all(|i| word_len(&q.options[i]) <= key_words);
    if strictly_longest_chars && longest_or_tied_words {
        vec![Evidence::new(
            CriterionId::LongestOptionCorrect,
            format!("keyed option is strictly longest ({key_chars} chars)"),
        )]
    } else {
        Vec::new()
    }
}

const TF_WORDS: &[&str] = &["true", "false", "yes", "no", "t", "f"];
const NEGATION_WORDS: &[&str] = &["not", "no", "never"];

fn normalized_option(s: &str) -> String {
    s.trim().trim_end_matches(['.', '!', '?', ',', ';']).trim().to_lowercase()
}

fn has_negation(tokens: &[Token]) -> bool {
    tokens.iter().any(|t| {
        t.is_word() && (NEGATION_WORDS.contains(&t.normal.as_str()) || t.normal.ends_with("n't"))
    })
}

fn true_false_question(q: &Question) -> Vec<Evidence> {
    // (a) every option is a bare true/false style answer
    if q.options.iter().all(|o| TF_WORDS.contains(&normalized_option(o).as_str())) {
        return vec![Evidence::new(
            CriterionId::TrueFalseQuestion,
            "options are a true/false answer set",
        )];
    }
    // (b) a statement paired with its own negation
    let data: Vec<(BTreeSet<String>, bool)> = q
        .options
        .iter()
        .map(|o| {
            let mut words = content_words(o);
            words.remove("never");
            (words, has_negation(&tokenize(o)))
        })
        .collect();
    for i in 0..q.options.len() {
        for j in (i + 1)..q.options.len() {
            let (wi, ni) = &data[i];
            let (wj, nj) = &data[j];
            if !wi.is_empty() && wi == wj && (ni ^ nj) {
                return vec![Evidence::new(
                    CriterionId::TrueFalseQuestion,
                    format!("options {i} and {j} are a statement and its negation"),
                )
                .with_span(Location::Option(i), 0, q.options[i].len())
                .with_span(Location::Option(j), 0, q.options[j].len())];
            }
        }
    }
    Vec::new()
}

/// Word-boundary lexicon hits in the options, skipping tokens inside
/// meta-option phrase matches so one surface string is not counted twice.
fn option_lexicon_hits(
    q: &Question,
    criterion: CriterionId,
    lexicon: &crate::textkit::Lexicon,
    fuzzy_edits: usize,
) -> Vec<Evidence> {
    let lex = lexicons();
    let mut evidence = Vec::new();
    for (i, opt) in q.options.iter().enumerate() {
        let excluded = phrase_spans(
            opt,
            lex.none_phrases.entries().chain(lex.all_phrases.entries()),
            fuzzy_edits,
        );
        for t in tokenize(opt) {
            if t.is_word()
                && lexicon.contains(&t.normal)
                && !inside_any((t.start, t.end), &excluded)
            {
                evidence.push(
                    Evidence::new(criterion, format!("option contains {:?}", t.normal))
                        .with_span(Location::Option(i), t.start, t.end),
                );
            }
        }
    }
    evidence
}

fn absolute_terms(q: &Question, cfg: &DetectorConfig) -> Vec<Evidence> {
    option_lexicon_hits(q, CriterionId::AbsoluteTerms, &lexicons().absolute_terms, cfg.fuzzy_edits)
}

fn vague_terms(q: &Question, cfg: &DetectorConfig) -> Vec<Evidence> {
    option_lexicon_hits(q, CriterionId::VagueTerms, &lexicons().vague_terms, cfg.fuzzy_edits)
}

fn negative_worded(q: &Question, cfg: &DetectorConfig) -> Vec<Evidence> {
    let lex = lexicons();
    let excluded = phrase_spans(&q.stem, lex.none_phrases.entries(), cfg.fuzzy_edits);
    tokenize(&q.stem)
        .into_iter()
        .filter(|t| {
            t.is_word()
                && lex.negative_stem.contains(&t.normal)
                && !inside_any((t.start, t.end), &excluded)
        })
        .map(|t| {
            Evidence::new(CriterionId::NegativeWorded, format!("stem contains {:?}", t.normal))
                .with_span(Location::Stem, t.start, t.end)
        })
        .collect()
}

fn blank_regex() -> &'static regex::Regex {
    static RE: std::sync::OnceLock<regex::Regex> = std::sync::OnceLock::new();
    RE.get_or_init(|| regex::Regex::new(r"_{3,}|(?i)\[blank\]|\.{3}|\u{2026}").unwrap())
}

fn fill_in_blank(q: &Question) -> Vec<Evidence> {
    let mut evidence = Vec::new();
    for m in blank_regex().find_iter(&q.stem) {
        let tail = &q.stem[m.end()..];
        let has_following_words = tokenize(tail).iter().any(|t| t.is_word());
        if has_following_words {
            evidence.push(
                Evidence::new(CriterionId::FillInBlank, "blank in the middle of the stem")
                    .with_span(Location::Stem, m.start(), m.end()),
            );
        }
    }
    evidence
}

const K_CONNECTORS: &[&str] =
    &["and", "or", "nor", "both", "only", "either", "neither", "except", "all", "of", "the", "above"];
const ROMAN_LABELS: &[&str] = &["i", "ii", "iii", "iv", "v"];

fn is_label_token(t: &Token, option_count: usize) -> bool {
    let n = &t.normal;
    if n.chars().count() == 1 {
        if let Some(c) = n.chars().next() {
            if c.is_ascii_lowercase() {
                return (c as usize - 'a' as usize) < option_count;
            }
            if let Some(d) = c.to_digit(10) {
                return d >= 1 && d as usize <= option_count;
            }
        }
    }
    if let Some(pos) = ROMAN_LABELS.iter().position(|&r| r == n) {
        return pos < option_count;
    }
    false
}

fn complex_k_type(q: &Question) -> Vec<Evidence> {
    let k = q.options.len();
    let mut evidence = Vec::new();
    for (i, opt) in q.options.iter().enumerate() {
        let words: Vec<Token> = tokenize(opt).into_iter().filter(|t| t.is_word()).collect();
        let labels = words.iter().filter(|t| is_label_token(t, k)).count();
        let others = words
            .iter()
            .filter(|t| !is_label_token(t, k) && !K_CONNECTORS.contains(&t.normal.as_str()))
            .count();
        // "Both A and C", "1 and 3 only": nothing but labels and connectors.
        let pure_combination = labels >= 2 && others == 0;
        // "all except B", "all of the above except A"
        let all_except = words.iter().any(|t| t.normal == "all")
            && words.windows(2).any(|w| {
                w[0].normal == "except" && is_label_token(&w[1], k)
            });
        if pure_combination || all_except {
            evidence.push(
                Evidence::new(CriterionId::ComplexKType, "option combines other options by label")
                    .with_span(Location::Option(i), 0, opt.len()),
            );
        }
    }
    evidence
}

fn lost_sequence(q: &Question) -> Vec<Evidence> {
    let parsed: Vec<_> = q.options.iter().map(|o| parse_numeric(o)).collect();
    if parsed.iter().any(|p| p.is_none()) {
        return Vec::new();
    }
    let values: Vec<_> = parsed.into_iter().flatten().collect();
    let all_dates = values.iter().all(|v| v.is_date());
    let all_numbers = values.iter().all(|v| !v.is_date());
    if !(all_dates || all_numbers) {
        return Vec::new();
    }
    let nums: Vec<f64> = values.iter().map(|v| v.value()).collect();
    let ascending = nums.windows(2).all(|w| w[0] <= w[1]);
    let descending = nums.windows(2).all(|w| w[0] >= w[1]);
    if ascending || descending {
        Vec::new()
    } else {
        vec![Evidence::new(
            CriterionId::LostSequence,
            "numeric options are not in sorted order",
        )]
    }
}

/// Stemmed content words shared by the stem and the keyed option but absent
/// from every distractor. Shared with `logical_cues` so the two criteria stay
/// disjoint.
fn repeat_words(q: &Question) -> BTreeSet<String> {
    let stem_words = content_words(&q.stem);
    let correct_words = content_words(q.correct_option());
    let distractor_words: Vec<BTreeSet<String>> =
        q.distractor_indices().map(|i| content_words(&q.options[i])).collect();
    stem_words
        .intersection(&correct_words)
        .filter(|w| !distractor_words.iter().any(|d| d.contains(*w)))
        .cloned()
        .collect()
}

fn word_repeats(q: &Question) -> Vec<Evidence> {
    repeat_words(q)
        .into_iter()
        .map(|w| {
            Evidence::new(
                CriterionId::WordRepeats,
                format!("{w:?} appears in the stem and only the keyed option"),
            )
        })
        .collect()
}

fn convergence_cues(q: &Question) -> Vec<Evidence> {
    let sets: Vec<BTreeSet<String>> = q.options.iter().map(|o| content_words(o)).collect();
    let occurrences = |w: &String| sets.iter().filter(|s| s.contains(w)).count();
    let score = |i: usize| -> usize {
        sets[i].iter().map(|w| occurrences(w) - 1).sum()
    };
    let key = q.answer_index;
    let key_score = score(key);
    let strict_max = q.distractor_indices().all(|i| score(i) < key_score);
    let repeated_components = sets[key].iter().filter(|w| occurrences(w) >= 2).count();
    if strict_max && repeated_components >= 2 {
        vec![Evidence::new(
            CriterionId::ConvergenceCues,
            format!("keyed option combines the most repeated components (score {key_score})"),
        )]
    } else {
        Vec::new()
    }
}

fn starts_with_vowel_sound(opt: &str) -> Option<bool> {
    opt.trim().chars().find(|c| c.is_alphabetic()).map(|c| {
        matches!(c.to_ascii_lowercase(), 'a' | 'e' | 'i' | 'o' | 'u')
    })
}

fn head_is_plural(opt: &str) -> bool {
    tokenize(opt)
        .iter()
        .rev()
        .find(|t| matches!(t.class, TokenClass::Word))
        .map(|t| t.normal.ends_with('s') && !t.normal.ends_with("ss") && t.stem != t.normal)
        .unwrap_or(false)
}

fn option_signature(opt: &str) -> (Option<char>, bool) {
    let trimmed = opt.trim();
    let terminal = trimmed.chars().last().filter(|c| !c.is_alphanumeric());
    let capitalized = trimmed.chars().next().map(|c| c.is_uppercase()).unwrap_or(false);
    (terminal, capitalized)
}

fn grammatical_cues(q: &Question) -> Vec<Evidence> {
    let key = q.answer_index;
    let stem_words: Vec<Token> =
        tokenize(&q.stem).into_iter().filter(|t| t.is_word()).collect();

    // (a) article agreement: stem ends with "a"/"an"
    if let Some(last) = stem_words.last() {
        if last.normal == "a" || last.normal == "an" {
            let expects_vowel = last.normal == "an";
            let matches = |i: usize| starts_with_vowel_sound(&q.options[i]) == Some(expects_vowel);
            if matches(key) && q.distractor_indices().all(|i| !matches(i)) {
                return vec![Evidence::new(
                    CriterionId::GrammaticalCues,
                    "only the keyed option agrees with the stem's article",
                )];
            }
        }
    }

    // (b) verb-number agreement with the stem's final is/are/was/were
    let stem_number = stem_words.iter().rev().find_map(|t| match t.normal.as_str() {
        "is" | "was" => Some(false),
        "are" | "were" => Some(true),
        _ => None,
    });
    if let Some(plural) = stem_number {
        let matches = |i: usize| head_is_plural(&q.options[i]) == plural;
        if matches(key) && q.distractor_indices().all(|i| !matches(i)) {
            return vec![Evidence::new(
                CriterionId::GrammaticalCues,
                "only the keyed option agrees with the stem's verb number",
            )];
        }
    }

    // (c) parallelism: a uniform distractor style isolates the keyed option
    let signatures: Vec<_> = q.options.iter().map(|o| option_signature(o)).collect();
    let mut distractor_sigs = q.distractor_indices().map(|i| signatures[i]);
    if let Some(first) = distractor_sigs.next() {
        if distractor_sigs.all(|s| s == first) && signatures[key] != first {
            return vec![Evidence::new(
                CriterionId::GrammaticalCues,
                "keyed option breaks the distractors' parallel style",
            )];
        }
    }
    Vec::new()
}

const GENERIC_STEM_PATTERNS: &[&str] =
    &["which of the following", "which statement", "which of these"];
const GENERIC_ENDINGS: &[&str] = &["is true", "is correct", "is false", "applies"];

fn unfocused_stem(q: &Question) -> Vec<Evidence> {
    let lower = q.stem.to_lowercase();
    let mut stripped = lower.clone();
    let mut had_pattern = false;
    for pat in GENERIC_STEM_PATTERNS {
        if stripped.contains(pat) {
            had_pattern = true;
            stripped = stripped.replace(pat, " ");
        }
    }
    let remaining = content_words(&stripped);
    if remaining.len() < 2 {
        return vec![Evidence::new(
            CriterionId::UnfocusedStem,
            "stem carries fewer than 2 content words",
        )];
    }
    if had_pattern {
        let trimmed = lower.trim_end_matches(['?', '.', '!', ' ']).to_string();
        let generic_tail = GENERIC_ENDINGS.iter().any(|e| trimmed.ends_with(e));
        let filler: BTreeSet<String> =
            ["true", "correct", "false", "appli"].iter().map(|s| s.to_string()).collect();
        if generic_tail && remaining.is_subset(&filler) {
            return vec![Evidence::new(
                CriterionId::UnfocusedStem,
                "stem is a generic pattern with no substantive content",
            )];
        }
    }
    Vec::new()
}

fn gratuitous_information(q: &Question) -> Vec<Evidence> {
    let sentences = split_sentences(&q.stem);
    if sentences.len() < 2 {
        return Vec::new();
    }
    let final_words = content_words(&q.stem[sentences.last().unwrap().0..sentences.last().unwrap().1]);
    let option_words: Vec<BTreeSet<String>> =
        q.options.iter().map(|o| content_words(o)).collect();
    let mut evidence = Vec::new();
    for &(start, end) in &sentences[..sentences.len() - 1] {
        let words = content_words(&q.stem[start..end]);
        let disjoint_from_final = words.is_disjoint(&final_words);
        let disjoint_from_options = option_words.iter().all(|o| words.is_disjoint(o));
        if disjoint_from_final && disjoint_from_options {
            evidence.push(
                Evidence::new(
                    CriterionId::GratuitousInformation,
                    "stem sentence unrelated to the question and every option",
                )
                .with_span(Location::Stem, start, end),
            );
        }
    }
    evidence
}

fn logical_cues(q: &Question, cfg: &DetectorConfig) -> Vec<Evidence> {
    let repeats = repeat_words(q);
    let minus = |text: &str| -> BTreeSet<String> {
        content_words(text).difference(&repeats).cloned().collect()
    };
    let stem_words = minus(&q.stem);
    let key_sim = jaccard(&stem_words, &minus(q.correct_option()));
    let best_distractor = q
        .distractor_indices()
        .map(|i| jaccard(&stem_words, &minus(&q.options[i])))
        .fold(0.0f64, f64::max);
    let margin = key_sim - best_distractor;
    if margin > cfg.cue_margin {
        vec![Evidence::new(
            CriterionId::LogicalCues,
            format!("stem-similarity margin {margin:.2} favors the keyed option"),
        )]
    } else {
        Vec::new()
    }
}

fn ambiguous_information(
    q: &Question,
    cfg: &DetectorConfig,
    scorer: &dyn PluggableScorer,
) -> Vec<Evidence> {
    let score = scorer.acceptability(&q.stem);
    if score < cfg.ambiguity_threshold {
        vec![Evidence::new(
            CriterionId::AmbiguousInformation,
            format!("stem acceptability {score:.2} below threshold {:.2}", cfg.ambiguity_threshold),
        )]
    } else {
        Vec::new()
    }
}

fn implausible_distractors(
    q: &Question,
    cfg: &DetectorConfig,
    scorer: &dyn PluggableScorer,
) -> Vec<Evidence> {
    q.distractor_indices()
        .filter_map(|i| {
            let p = scorer.plausibility(q, i);
            (p < cfg.plausibility_threshold).then(|| {
                Evidence::new(
                    CriterionId::ImplausibleDistractors,
                    format!("distractor plausibility {p:.2} below threshold"),
                )
                .with_span(Location::Option(i), 0, q.options[i].len())
            })
        })
        .collect()
}

fn more_than_one_correct(q: &Question, scorer: &dyn PluggableScorer) -> Vec<Evidence> {
    let key_norm = normalized_option(q.correct_option());
    for i in q.distractor_indices() {
        if normalized_option(&q.options[i]) == key_norm {
            return vec![Evidence::new(
                CriterionId::MoreThanOneCorrect,
                format!("option {i} duplicates the keyed option"),
            )
            .with_span(Location::Option(i), 0, q.options[i].len())];
        }
    }
    match scorer.answer(q) {
        AnswerJudgment::Index(i) if i != q.answer_index => {
            vec![Evidence::new(
                CriterionId::MoreThanOneCorrect,
                format!("answer scorer selected option {i}, key is {}", q.answer_index),
            )]
        }
        AnswerJudgment::Multiple => {
            vec![Evidence::new(
                CriterionId::MoreThanOneCorrect,
                "answer scorer found multiple defensible options",
            )]
        }
        _ => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::HeuristicScorer;

    fn question(stem: &str, options: &[&str], answer: usize) -> Question {
        Question::validate(
            "q",
            None,
            stem,
            options.iter().map(|s| s.to_string()).collect(),
            answer,
        )
        .unwrap()
    }

    fn flag(criterion: CriterionId, q: &Question) -> bool {
        let cfg = DetectorConfig::default();
        let scorer = HeuristicScorer::default();
        !detect(criterion, q, &cfg, &scorer).is_empty()
    }

    #[test]
    fn none_of_the_above_cases() {
        let c = CriterionId::NoneOfTheAbove;
        assert!(flag(c, &question("x?", &["a1", "b2", "None of the above"], 0)));
        assert!(flag(c, &question("x?", &["a1", "b2", "none of the abve"], 0)));
        assert!(!flag(c, &question("x?", &["2", "4", "6", "8"], 0)));
    }

    #[test]
    fn all_of_the_above_cases() {
        let c = CriterionId::AllOfTheAbove;
        assert!(flag(c, &question("x?", &["cat", "dog", "All of the above"], 0)));
        assert!(flag(c, &question("x?", &["cat", "dog", "all the above"], 0)));
        assert!(!flag(c, &question("x?", &["cat", "dog", "bird"], 0)));
    }

    #[test]
    fn longest_option_cases() {
        let c = CriterionId::LongestOptionCorrect;
        let long = "a detailed answer that runs much longer than everything else here";
        assert!(flag(c, &question("x?", &[long, "short one", "tiny", "small"], 0)));
        assert!(!flag(c, &question("x?", &["same size", "same size", "same size"], 0)));
        // tied in chars with one distractor -> not strictly longest
        assert!(!flag(c, &question("x?", &["abcdef", "uvwxyz", "ab"], 0)));
    }

    #[test]
    fn true_false_cases() {
        let c = CriterionId::TrueFalseQuestion;
        assert!(flag(c, &question("x?", &["True", "False"], 0)));
        assert!(!flag(c, &question("x?", &["Paris", "Rome", "Lyon", "Nice"], 0)));
        assert!(flag(
            c,
            &question(
                "x?",
                &["It increases pH", "It does not increase pH", "It melts"],
                0
            )
        ));
    }

    #[test]
    fn absolute_terms_cases() {
        let c = CriterionId::AbsoluteTerms;
        assert!(flag(c, &question("x?", &["It always increases", "It decreases"], 0)));
        assert!(!flag(c, &question("x?", &["It generally increases", "It decreases"], 0)));
        // stem-only hit must not flag
        assert!(!flag(c, &question("It always holds for x?", &["It increases", "It decreases"], 0)));
        // hit inside a meta-option phrase is excluded
        assert!(!flag(c, &question("x?", &["cat", "dog", "None of the above"], 0)));
    }

    #[test]
    fn vague_terms_cases() {
        let c = CriterionId::VagueTerms;
        assert!(flag(c, &question("x?", &["It usually binds", "It melts"], 0)));
        assert!(!flag(c, &question("x?", &["It binds in 80% of trials", "It melts"], 0)));
        assert!(!flag(c, &question("It often holds?", &["It binds", "It melts"], 0)));
    }

    #[test]
    fn negative_worded_cases() {
        let c = CriterionId::NegativeWorded;
        assert!(flag(c, &question("Which is NOT a noble gas?", &["He", "Fe"], 1)));
        assert!(!flag(c, &question("Which is a noble gas?", &["He", "Fe"], 0)));
        assert!(flag(c, &question("All of the following EXCEPT", &["He", "Fe"], 0)));
        // option-only hit must not flag
        assert!(!flag(c, &question("Which holds?", &["It is not red", "It is red"], 0)));
    }

    #[test]
    fn fill_in_blank_cases() {
        let c = CriterionId::FillInBlank;
        assert!(flag(c, &question("The ____ is the powerhouse of the cell.", &["a1", "b2"], 0)));
        assert!(!flag(c, &question("The powerhouse of the cell is the ____.", &["a1", "b2"], 0)));
        assert!(!flag(c, &question("What is the powerhouse of the cell?", &["a1", "b2"], 0)));
        assert!(flag(c, &question("Fill [blank] in the middle here.", &["a1", "b2"], 0)));
    }

    #[test]
    fn complex_k_type_cases() {
        let c = CriterionId::ComplexKType;
        assert!(flag(c, &question("x?", &["Both A and C", "cat", "dog", "bird"], 0)));
        assert!(!flag(c, &question("x?", &["cat", "dog", "bird", "fish"], 0)));
        assert!(flag(c, &question("x?", &["1 and 3 only", "cat", "dog", "bird"], 0)));
        assert!(flag(c, &question("x?", &["all of the above except B", "cat", "dog"], 0)));
        assert!(!flag(c, &question("x?", &["between 1 and 3", "cat", "dog"], 0)));
    }

    #[test]
    fn lost_sequence_cases() {
        let c = CriterionId::LostSequence;
        assert!(flag(c, &question("x?", &["5", "2", "9", "1"], 0)));
        assert!(!flag(c, &question("x?", &["1", "2", "5", "9"], 0)));
        assert!(!flag(c, &question("x?", &["9", "5", "2", "1"], 0)));
        assert!(!flag(c, &question("x?", &["1", "2", "banana", "9"], 0)));
    }

    #[test]
    fn word_repeats_cases() {
        let c = CriterionId::WordRepeats;
        assert!(flag(
            c,
            &question(
                "How does photosynthesis start?",
                &["With photosynthesis pigments", "With water", "With heat"],
                0
            )
        ));
        assert!(!flag(
            c,
            &question(
                "How does photosynthesis start?",
                &["With photosynthesis pigments", "Without photosynthesis", "With heat"],
                0
            )
        ));
        assert!(!flag(c, &question("How does it start?", &["With light", "With heat"], 0)));
    }

    #[test]
    fn convergence_cues_cases() {
        let c = CriterionId::ConvergenceCues;
        let q = question(
            "What does the reaction do?",
            &[
                "Raises temperature and pressure",
                "Raises temperature only",
                "Raises pressure only",
                "Lowers volume",
            ],
            0,
        );
        assert!(flag(c, &q));
        assert!(!flag(c, &question("x?", &["cat", "dog", "bird", "fish"], 0)));
        // distractor maximizes the score instead
        let q = question(
            "What does the reaction do?",
            &[
                "Lowers volume",
                "Raises temperature and pressure",
                "Raises temperature only",
                "Raises pressure only",
            ],
            0,
        );
        assert!(!flag(c, &q));
    }

    #[test]
    fn grammatical_cues_cases() {
        let c = CriterionId::GrammaticalCues;
        assert!(flag(c, &question("The sample is an", &["oxide", "metal", "salt"], 0)));
        assert!(!flag(c, &question("The sample is an", &["oxide", "acid", "ion"], 0)));
        assert!(flag(
            c,
            &question("Which structures are involved?", &["The ribosomes", "The nucleus", "The wall"], 0)
        ));
    }

    #[test]
    fn unfocused_stem_cases() {
        let c = CriterionId::UnfocusedStem;
        assert!(flag(c, &question("Which of the following is true?", &["a1", "b2"], 0)));
        assert!(!flag(
            c,
            &question("Which gas is most abundant in Earth's atmosphere?", &["a1", "b2"], 0)
        ));
        assert!(flag(c, &question("Statistics?", &["a1", "b2"], 0)));
    }

    #[test]
    fn gratuitous_information_cases() {
        let c = CriterionId::GratuitousInformation;
        assert!(flag(
            c,
            &question(
                "My roommate hates mornings. Which gas is most abundant in the atmosphere?",
                &["Nitrogen", "Oxygen"],
                0
            )
        ));
        assert!(!flag(c, &question("Which gas is most abundant?", &["Nitrogen", "Oxygen"], 0)));
        assert!(!flag(
            c,
            &question(
                "Nitrogen dominates the air. Which gas is most abundant in the atmosphere?",
                &["Nitrogen", "Oxygen"],
                0
            )
        ));
    }

    #[test]
    fn logical_cues_cases() {
        let c = CriterionId::LogicalCues;
        // every stem word the keyed option re-uses also appears in some
        // distractor, so word_repeats stays silent but the margin is large
        let q = question(
            "How does sodium chloride dissolve in liquid water?",
            &[
                "Sodium chloride separates in liquid water",
                "Sodium melts",
                "Chloride is a gas",
                "Liquid nitrogen boils",
                "Water evaporates",
            ],
            0,
        );
        assert!(flag(c, &q));
        assert!(!flag(c, &question("x?", &["cat", "dog", "bird"], 0)));
        let q = question(
            "How does the cell wall respond?",
            &["The cell wall stiffens", "The cell wall softens", "It dissolves"],
            0,
        );
        assert!(!flag(c, &q)); // margin too small
    }

    #[test]
    fn ambiguous_information_cases() {
        let c = CriterionId::AmbiguousInformation;
        assert!(flag(c, &question("Mitochondria because energy?", &["a1", "b2"], 0)));
        assert!(!flag(
            c,
            &question("Which gas is most abundant in Earth's atmosphere?", &["a1", "b2"], 0)
        ));
    }

    #[test]
    fn implausible_distractors_cases() {
        let c = CriterionId::ImplausibleDistractors;
        assert!(flag(
            c,
            &question(
                "How many moles of water form in the reaction?",
                &["2 moles of water", "banana", "4 moles of water"],
                0
            )
        ));
        assert!(!flag(c, &question("How many moles form?", &["2", "4", "6", "8"], 0)));
        assert!(flag(c, &question("How many moles form in total?", &["2 moles", "?", "4 moles"], 0)));
    }

    #[test]
    fn more_than_one_correct_cases() {
        let c = CriterionId::MoreThanOneCorrect;
        assert!(flag(c, &question("x?", &["The mitochondria", "the mitochondria.", "b2"], 0)));
        assert!(!flag(c, &question("x?", &["cat", "dog", "bird"], 0)));

        struct Disagrees;
        impl PluggableScorer for Disagrees {
            fn acceptability(&self, _: &str) -> f64 {
                1.0
            }
            fn plausibility(&self, _: &Question, _: usize) -> f64 {
                1.0
            }
            fn answer(&self, _: &Question) -> AnswerJudgment {
                AnswerJudgment::Index(1)
            }
            fn deterministic(&self) -> bool {
                true
            }
        }
        let q = question("x?", &["cat", "dog", "bird"], 2);
        let cfg = DetectorConfig::default();
        assert!(!detect(c, &q, &cfg, &Disagrees).is_empty());
    }
}
