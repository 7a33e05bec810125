//! Word and phrase lexicons backing the lexical detectors.
//!
//! Each lexicon ships embedded in the binary as a word-per-line UTF-8 file.
//! Setting `IWF_LEXICON_DIR` to a directory containing files with the same
//! names replaces the embedded versions.

use std::collections::BTreeSet;
use std::sync::OnceLock;

/// A named set of lowercase words or phrases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    pub name: String,
    entries: BTreeSet<String>,
}

impl Lexicon {
    /// Build from raw lines; entries are trimmed, lowercased, blanks dropped.
    pub fn from_lines(name: &str, text: &str) -> Lexicon {
        let entries: BTreeSet<String> = text
            .lines()
            .map(|l| l.trim().to_lowercase())
            .filter(|l| !l.is_empty())
            .collect();
        assert!(!entries.is_empty(), "lexicon {name} is empty");
        Lexicon { name: name.to_string(), entries }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains(word)
    }

    pub fn entries(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|s| s.as_str())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// The full set of vendored lexicons.
#[derive(Debug)]
pub struct Lexicons {
    pub stopwords: Lexicon,
    pub absolute_terms: Lexicon,
    pub vague_terms: Lexicon,
    pub negative_stem: Lexicon,
    pub none_phrases: Lexicon,
    pub all_phrases: Lexicon,
    pub abbreviations: Lexicon,
}

fn load_one(name: &str, embedded: &str) -> Lexicon {
    if let Ok(dir) = std::env::var("IWF_LEXICON_DIR") {
        let path = std::path::Path::new(&dir).join(format!("{name}.txt"));
        if let Ok(text) = std::fs::read_to_string(&path) {
            return Lexicon::from_lines(name, &text);
        }
    }
    Lexicon::from_lines(name, embedded)
}

/// Process-wide lexicons; the env override is read on first use.
pub fn lexicons() -> &'static Lexicons {
    static LEXICONS: OnceLock<Lexicons> = OnceLock::new();
    LEXICONS.get_or_init(|| Lexicons {
        stopwords: load_one("stopwords", include_str!("../../resources/stopwords.txt")),
        absolute_terms: load_one(
            "absolute_terms",
            include_str!("../../resources/absolute_terms.txt"),
        ),
        vague_terms: load_one("vague_terms", include_str!("../../resources/vague_terms.txt")),
        negative_stem: load_one(
            "negative_stem",
            include_str!("../../resources/negative_stem.txt"),
        ),
        none_phrases: load_one("none_phrases", include_str!("../../resources/none_phrases.txt")),
        all_phrases: load_one("all_phrases", include_str!("../../resources/all_phrases.txt")),
        abbreviations: load_one(
            "abbreviations",
            include_str!("../../resources/abbreviations.txt"),
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_lexicons_load() {
        let lex = lexicons();
        assert!(lex.stopwords.len() >= 100);
        assert!(lex.stopwords.contains("the"));
        assert!(lex.stopwords.contains("only"));
        assert!(lex.absolute_terms.contains("always"));
        assert!(lex.vague_terms.contains("usually"));
        assert!(lex.negative_stem.contains("except"));
        assert!(lex.none_phrases.contains("none of the above"));
        assert!(lex.all_phrases.contains("all of the above"));
    }

    #[test]
    fn entries_are_normalized() {
        let lex = Lexicon::from_lines("t", "  Foo \nBAR\n\n bar \n");
        assert_eq!(lex.len(), 2);
        assert!(lex.contains("foo"));
        assert!(lex.contains("bar"));
    }
}
