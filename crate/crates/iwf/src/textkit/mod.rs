//! Deterministic text-analysis primitives: tokenization, sentence splitting,
//! content-word extraction, stemming, numeric parsing, token-overlap
//! similarity, and fuzzy phrase matching.
//!
//! Everything here is a pure function of its inputs; no models, no
//! randomness, no locale dependence.

mod lexicon;
mod stem;

pub use lexicon::{lexicons, Lexicon, Lexicons};
pub use stem::stem;

use std::collections::BTreeSet;

/// Token class under the published tokenization rule set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenClass {
    Word,
    Number,
    Punctuation,
}

/// One token with its normalized and stemmed forms and source span
/// (byte offsets, always on character boundaries).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub normal: String,
    pub stem: String,
    pub start: usize,
    pub end: usize,
    pub class: TokenClass,
}

impl Token {
    pub fn is_word(&self) -> bool {
        matches!(self.class, TokenClass::Word | TokenClass::Number)
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

/// Tokenize text into words, numbers, and punctuation runs.
///
/// Rules: a token starting with a letter consumes alphanumerics plus internal
/// apostrophes ("don't" is one token); a token starting with a digit consumes
/// digits, internal `.`/`,` followed by a digit, and a trailing `%` — unless a
/// letter follows immediately, in which case it continues as a word ("42nd").
/// Any other non-whitespace character starts a punctuation token that consumes
/// repeats of the same character ("____", "...").
pub fn tokenize(text: &str) -> Vec<Token> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (start, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_alphabetic() {
            let mut j = i + 1;
            while j < chars.len() {
                let cj = chars[j].1;
                if is_word_char(cj) {
                    j += 1;
                } else if is_apostrophe(cj)
                    && j + 1 < chars.len()
                    && chars[j + 1].1.is_alphabetic()
                {
                    j += 2;
                } else {
                    break;
                }
            }
            push_token(&mut tokens, text, start, end_offset(&chars, j, text), TokenClass::Word);
            i = j;
        } else if c.is_ascii_digit() {
            let mut j = i + 1;
            let mut class = TokenClass::Number;
            while j < chars.len() {
                let cj = chars[j].1;
                if cj.is_ascii_digit() {
                    j += 1;
                } else if (cj == '.' || cj == ',')
                    && j + 1 < chars.len()
                    && chars[j + 1].1.is_ascii_digit()
                {
                    j += 2;
                } else if cj == '%' {
                    j += 1;
                    break;
                } else if cj.is_alphabetic() {
                    // "42nd", "5th": continue as a word token.
                    class = TokenClass::Word;
                    while j < chars.len() && is_word_char(chars[j].1) {
                        j += 1;
                    }
                    break;
                } else {
                    break;
                }
            }
            push_token(&mut tokens, text, start, end_offset(&chars, j, text), class);
            i = j;
        } else {
            let mut j = i + 1;
            while j < chars.len() && chars[j].1 == c {
                j += 1;
            }
            push_token(
                &mut tokens,
                text,
                start,
                end_offset(&chars, j, text),
                TokenClass::Punctuation,
            );
            i = j;
        }
    }
    tokens
}

fn end_offset(chars: &[(usize, char)], j: usize, text: &str) -> usize {
    if j < chars.len() {
        chars[j].0
    } else {
        text.len()
    }
}

fn push_token(tokens: &mut Vec<Token>, text: &str, start: usize, end: usize, class: TokenClass) {
    let surface = text[start..end].to_string();
    let normal = surface.to_lowercase();
    let stemmed = match class {
        TokenClass::Word => stem(&normal),
        _ => normal.clone(),
    };
    tokens.push(Token { surface, normal, stem: stemmed, start, end, class });
}

/// Split text into sentence spans (byte offsets) that partition it.
///
/// A boundary is sentence-final punctuation (`.`, `!`, `?`) followed by
/// whitespace and an uppercase letter, except after a known abbreviation or a
/// single initial. Trailing whitespace belongs to the preceding sentence.
pub fn split_sentences(text: &str) -> Vec<(usize, usize)> {
    if text.is_empty() {
        return Vec::new();
    }
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut spans = Vec::new();
    let mut sent_start = 0usize;
    let mut i = 0;
    while i < chars.len() {
        let (off, c) = chars[i];
        if matches!(c, '.' | '!' | '?') {
            // find the next non-whitespace character
            let mut j = i + 1;
            while j < chars.len() && chars[j].1.is_whitespace() {
                j += 1;
            }
            let followed_by_capital = j < chars.len() && j > i + 1 && chars[j].1.is_uppercase();
            let abbreviation = c == '.' && is_abbreviation_before(text, off);
            if followed_by_capital && !abbreviation {
                let next_start = chars[j].0;
                spans.push((sent_start, next_start));
                sent_start = next_start;
                i = j;
                continue;
            }
        }
        i += 1;
    }
    if sent_start < text.len() {
        spans.push((sent_start, text.len()));
    }
    spans
}

fn is_abbreviation_before(text: &str, period_offset: usize) -> bool {
    // Word immediately before the period, allowing internal periods ("e.g").
    let head = &text[..period_offset];
    let word_start = head
        .rfind(|c: char| !(c.is_alphanumeric() || c == '.'))
        .map(|p| p + head[p..].chars().next().unwrap().len_utf8())
        .unwrap_or(0);
    let word = head[word_start..].trim_matches('.').to_lowercase();
    if word.is_empty() {
        return false;
    }
    lexicons().abbreviations.contains(&word)
}

/// Stemmed non-stopword word tokens of the text, as a set.
pub fn content_words(text: &str) -> BTreeSet<String> {
    let stop = &lexicons().stopwords;
    tokenize(text)
        .into_iter()
        .filter(|t| t.is_word() && !stop.contains(&t.normal))
        .map(|t| t.stem)
        .collect()
}

/// A parsed option value for sequence checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NumericValue {
    Number(f64),
    /// A calendar value (a 4-digit year), comparable within its own class.
    Date(f64),
}

impl NumericValue {
    pub fn value(self) -> f64 {
        match self {
            NumericValue::Number(v) | NumericValue::Date(v) => v,
        }
    }

    pub fn is_date(self) -> bool {
        matches!(self, NumericValue::Date(_))
    }
}

/// Parse an option that is predominantly a single numeric or date value.
///
/// Recognized: integers, decimals, thousands separators, percentages, a value
/// with one trailing unit word ("5 mol"), 4-digit years 1900-2099, and ISO
/// dates (yyyy-mm-dd). Number words ("forty-two") are not parsed.
pub fn parse_numeric(option_text: &str) -> Option<NumericValue> {
    let trimmed = option_text.trim();
    if trimmed.is_empty() {
        return None;
    }
    let parts: Vec<&str> = trimmed.split_whitespace().collect();
    let head = match parts.as_slice() {
        [single] => *single,
        [value, unit]
            if unit.chars().all(|c| c.is_alphabetic()) && unit.chars().count() <= 10 =>
        {
            *value
        }
        _ => return None,
    };

    if let Some(date) = parse_iso_date(head) {
        return Some(date);
    }
    let head = head.strip_prefix('$').unwrap_or(head);
    let head = head.strip_suffix('%').unwrap_or(head);
    let cleaned: String = head.chars().filter(|&c| c != ',').collect();
    let value: f64 = cleaned.parse().ok()?;
    if cleaned.len() == 4
        && cleaned.chars().all(|c| c.is_ascii_digit())
        && (1900.0..=2099.0).contains(&value)
    {
        return Some(NumericValue::Date(value));
    }
    Some(NumericValue::Number(value))
}

fn parse_iso_date(s: &str) -> Option<NumericValue> {
    let parts: Vec<&str> = s.split('-').collect();
    if parts.len() != 3 {
        return None;
    }
    let (y, m, d) = (
        parts[0].parse::<u32>().ok()?,
        parts[1].parse::<u32>().ok()?,
        parts[2].parse::<u32>().ok()?,
    );
    if parts[0].len() == 4 && (1..=12).contains(&m) && (1..=31).contains(&d) {
        Some(NumericValue::Date((y * 372 + m * 31 + d) as f64))
    } else {
        None
    }
}

/// Jaccard overlap of the two texts' content-word sets; 0 when both empty.
pub fn overlap_similarity(a: &str, b: &str) -> f64 {
    let sa = content_words(a);
    let sb = content_words(b);
    jaccard(&sa, &sb)
}

/// Jaccard index over precomputed stem sets.
pub fn jaccard(sa: &BTreeSet<String>, sb: &BTreeSet<String>) -> f64 {
    let union = sa.union(sb).count();
    if union == 0 {
        return 0.0;
    }
    let inter = sa.intersection(sb).count();
    inter as f64 / union as f64
}

/// Levenshtein distance over characters.
pub fn edit_distance(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut curr = vec![0usize; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        curr[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            curr[j + 1] = sub.min(prev[j + 1] + 1).min(curr[j] + 1);
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[b.len()]
}

/// True with the matched byte span iff some token-aligned window of `text` is
/// within `max_edits` character edits of `phrase`, case-insensitive.
pub fn fuzzy_contains(text: &str, phrase: &str, max_edits: usize) -> Option<(usize, usize)> {
    let phrase_lower = phrase.to_lowercase();
    let phrase_words = phrase_lower.split_whitespace().count().max(1);
    let tokens: Vec<Token> =
        tokenize(text).into_iter().filter(|t| t.is_word()).collect();
    if tokens.is_empty() {
        return None;
    }
    let lo = phrase_words.saturating_sub(1).max(1);
    let hi = phrase_words + 1;
    for i in 0..tokens.len() {
        for width in lo..=hi {
            if i + width > tokens.len() {
                break;
            }
            let start = tokens[i].start;
            let end = tokens[i + width - 1].end;
            let window = text[start..end].to_lowercase();
            if window.chars().count().abs_diff(phrase_lower.chars().count()) > max_edits {
                continue;
            }
            if edit_distance(&window, &phrase_lower) <= max_edits {
                return Some((start, end));
            }
        }
    }
    None
}
