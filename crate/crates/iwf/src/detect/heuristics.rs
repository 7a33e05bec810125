//! Deterministic default implementations of the pluggable scorers.

use super::{AnswerJudgment, PluggableScorer};
use crate::model::Question;
use crate::textkit::{self, content_words, jaccard, lexicons, tokenize, Token};

/// Acceptability penalty constants. Each detected problem subtracts its
/// constant from 1.0; the score is clamped to [0, 1].
pub const PENALTY_NO_VERB: f64 = 0.6;
pub const PENALTY_MISSING_TERMINAL: f64 = 0.2;
pub const PENALTY_OVERLONG: f64 = 0.2;
pub const PENALTY_LEADING_PRONOUN: f64 = 0.2;
pub const PENALTY_UNBALANCED: f64 = 0.3;

const AUX_VERBS: &[&str] = &[
    "am", "is", "are", "was", "were", "be", "been", "being", "has", "have", "had", "do", "does",
    "did", "can", "could", "will", "would", "shall", "should", "may", "might", "must",
];

const INTERROGATIVES: &[&str] = &[
    "what", "which", "who", "whom", "whose", "when", "where", "why", "how", "is", "are", "do",
    "does", "did", "can", "could", "will", "would", "should",
];

const LEADING_PRONOUNS: &[&str] = &["it", "they", "this", "that", "these", "those", "he", "she"];

/// Offline scorer: composite lexical heuristics, no models, no network.
#[derive(Debug, Clone)]
pub struct HeuristicScorer {
    /// Stem token count beyond which the overlong penalty applies.
    pub stem_token_limit: usize,
    /// Edit budget when recognizing meta-options ("none of the above").
    pub fuzzy_edits: usize,
}

impl Default for HeuristicScorer {
    fn default() -> Self {
        HeuristicScorer { stem_token_limit: 60, fuzzy_edits: 2 }
    }
}

impl HeuristicScorer {
    pub fn new(stem_token_limit: usize, fuzzy_edits: usize) -> Self {
        HeuristicScorer { stem_token_limit, fuzzy_edits }
    }
}

fn is_verb_like(t: &Token) -> bool {
    if !matches!(t.class, textkit::TokenClass::Word) {
        return false;
    }
    if AUX_VERBS.contains(&t.normal.as_str()) {
        return true;
    }
    let n = t.normal.chars().count();
    (t.normal.ends_with('s') && n >= 4)
        || (t.normal.ends_with("ed") && n >= 4)
        || (t.normal.ends_with("ing") && n >= 5)
}

fn unbalanced(text: &str) -> bool {
    let count = |c: char| text.chars().filter(|&x| x == c).count();
    count('(') != count(')')
        || count('[') != count(']')
        || count('{') != count('}')
        || count('"') % 2 != 0
}

impl PluggableScorer for HeuristicScorer {
    fn acceptability(&self, text: &str) -> f64 {
        let tokens = tokenize(text);
        let words: Vec<&Token> = tokens.iter().filter(|t| t.is_word()).collect();
        let mut score = 1.0;

        if !words.iter().any(|t| is_verb_like(t)) {
            score -= PENALTY_NO_VERB;
        }
        if let Some(first) = words.first() {
            if INTERROGATIVES.contains(&first.normal.as_str())
                && !text.trim_end().ends_with('?')
            {
                score -= PENALTY_MISSING_TERMINAL;
            }
            if LEADING_PRONOUNS.contains(&first.normal.as_str()) {
                score -= PENALTY_LEADING_PRONOUN;
            }
        }
        if words.len() > self.stem_token_limit {
            score -= PENALTY_OVERLONG;
        }
        if unbalanced(text) {
            score -= PENALTY_UNBALANCED;
        }
        score.clamp(0.0, 1.0)
    }

    fn plausibility(&self, q: &Question, option_index: usize) -> f64 {
        let option = q.options[option_index].trim();
        // Meta-options and numeric near-misses are plausible by construction,
        // however short.
        let lex = lexicons();
        if lex
            .none_phrases
            .entries()
            .chain(lex.all_phrases.entries())
            .any(|p| textkit::fuzzy_contains(option, p, self.fuzzy_edits).is_some())
        {
            return 1.0;
        }
        if textkit::parse_numeric(option).is_some()
            && textkit::parse_numeric(q.correct_option()).is_some()
        {
            return 1.0;
        }
        if option.chars().count() < 2 {
            return 0.0;
        }
        let opt_words = content_words(option);
        let stem_sim = jaccard(&opt_words, &content_words(&q.stem));
        let key_sim = jaccard(&opt_words, &content_words(q.correct_option()));
        stem_sim.max(key_sim)
    }

    fn answer(&self, _q: &Question) -> AnswerJudgment {
        AnswerJudgment::Unknown
    }

    fn deterministic(&self) -> bool {
        true
    }
}
