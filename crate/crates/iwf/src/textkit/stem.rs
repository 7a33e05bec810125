//! Suffix-stripping stemmer used for content-word comparison.
//!
//! This is a deliberately small, deterministic rule table, not a full
//! morphological engine. Rules are applied to the lowercase form of a word:
//!
//! | order | rule                       | condition                     |
//! |-------|----------------------------|-------------------------------|
//! | 0     | strip trailing `'s` / `'`  | always                        |
//! | 1     | `sses` -> `ss`             |                               |
//! | 2     | `ies` -> `i`               |                               |
//! | 3     | `ied` -> `i`               |                               |
//! | 4     | `ations` -> `ate`          |                               |
//! | 5     | `ization` -> `ize`         |                               |
//! | 6     | `ational` -> `ate`         |                               |
//! | 7     | `tional` -> `tion`         |                               |
//! | 8     | `ation` -> `ate`           |                               |
//! | 9     | `ingly` -> ``              | remaining length >= 3         |
//! | 10    | `edly` -> ``               | remaining length >= 3         |
//! | 11    | `ing` -> ``                | remaining length >= 3         |
//! | 12    | `ed` -> ``                 | remaining length >= 2         |
//! | 13    | `ly` -> ``                 | remaining length >= 3         |
//! | 14    | `ion` -> ``                | preceded by `s`/`t`, len >= 3 |
//! | 15    | `ness` -> ``               | remaining length >= 3         |
//! | 16    | `ment` -> ``               | remaining length >= 3         |
//! | 17    | `s` -> ``                  | not after `s`/`u`/`i`, len >= 3 |
//! | 18    | undouble final consonant   | after rules 9-12              |
//! | 19    | final consonant+`y` -> `i` | always, word length >= 3      |
//!
//! At most one of rules 1-17 fires (first match wins); rules 0, 18 and 19
//! are unconditional post-passes.

/// Stem a lowercase word.
pub fn stem(word: &str) -> String {
    let mut w = word.to_string();
    if let Some(s) = w.strip_suffix("'s") {
        w = s.to_string();
    } else if let Some(s) = w.strip_suffix('\'') {
        w = s.to_string();
    }

    let mut undouble = false;
    if let Some(s) = w.strip_suffix("sses") {
        w = format!("{s}ss");
    } else if let Some(s) = w.strip_suffix("ies") {
        w = format!("{s}i");
    } else if let Some(s) = w.strip_suffix("ied") {
        w = format!("{s}i");
    } else if let Some(s) = w.strip_suffix("ations") {
        w = format!("{s}ate");
    } else if let Some(s) = w.strip_suffix("ization") {
        w = format!("{s}ize");
    } else if let Some(s) = w.strip_suffix("ational") {
        w = format!("{s}ate");
    } else if let Some(s) = w.strip_suffix("tional") {
        w = format!("{s}tion");
    } else if let Some(s) = w.strip_suffix("ation") {
        w = format!("{s}ate");
    } else if let Some(s) = w.strip_suffix("ingly").filter(|s| s.chars().count() >= 3) {
        w = s.to_string();
        undouble = true;
    } else if let Some(s) = w.strip_suffix("edly").filter(|s| s.chars().count() >= 3) {
        w = s.to_string();
        undouble = true;
    } else if let Some(s) = w.strip_suffix("ing").filter(|s| s.chars().count() >= 3) {
        w = s.to_string();
        undouble = true;
    } else if let Some(s) = w.strip_suffix("ed").filter(|s| s.chars().count() >= 2) {
        w = s.to_string();
        undouble = true;
    } else if let Some(s) = w.strip_suffix("ly").filter(|s| s.chars().count() >= 3) {
        w = s.to_string();
    } else if let Some(s) = w
        .strip_suffix("ion")
        .filter(|s| s.chars().count() >= 3 && (s.ends_with('s') || s.ends_with('t')))
    {
        w = s.to_string();
    } else if let Some(s) = w.strip_suffix("ness").filter(|s| s.chars().count() >= 3) {
        w = s.to_string();
    } else if let Some(s) = w.strip_suffix("ment").filter(|s| s.chars().count() >= 3) {
        w = s.to_string();
    } else if let Some(s) = w
        .strip_suffix('s')
        .filter(|s| s.chars().count() >= 3 && !matches!(s.chars().last(), Some('s' | 'u' | 'i')))
    {
        w = s.to_string();
    }

    if undouble {
        let chars: Vec<char> = w.chars().collect();
        if chars.len() >= 2 {
            let last = chars[chars.len() - 1];
            if last == chars[chars.len() - 2] && is_consonant(last) && !matches!(last, 'l' | 's' | 'z')
            {
                w.pop();
            }
        }
    }

    let chars: Vec<char> = w.chars().collect();
    if chars.len() >= 3 && chars[chars.len() - 1] == 'y' && is_consonant(chars[chars.len() - 2]) {
        w.pop();
        w.push('i');
    }
    w
}

fn is_consonant(c: char) -> bool {
    c.is_ascii_alphabetic() && !matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plural_rules() {
        assert_eq!(stem("cells"), "cell");
        assert_eq!(stem("cell"), "cell");
        assert_eq!(stem("ponies"), "poni");
        assert_eq!(stem("classes"), "class");
        assert_eq!(stem("gas"), "gas"); // too short to strip
    }

    #[test]
    fn final_y_becomes_i() {
        assert_eq!(stem("body"), "bodi");
        assert_eq!(stem("bodies"), "bodi");
        assert_eq!(stem("day"), "day"); // vowel before y
    }

    #[test]
    fn verb_suffixes() {
        assert_eq!(stem("boils"), "boil");
        assert_eq!(stem("running"), "run");
        assert_eq!(stem("jumped"), "jump");
        assert_eq!(stem("increases"), "increase");
        assert_eq!(stem("increase"), "increase");
    }

    #[test]
    fn tion_family() {
        assert_eq!(stem("organization"), "organize");
        assert_eq!(stem("attention"), "attent");
        assert_eq!(stem("relations"), "relate");
    }

    #[test]
    fn possessive_stripped() {
        assert_eq!(stem("earth's"), "earth");
    }
}
