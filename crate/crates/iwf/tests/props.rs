//! Randomized property checks for the metric and text layers.

use proptest::prelude::*;

use iwf::metrics;
use iwf::model::{CriterionId, FlawSet, LabelMatrix, LabelSource, CRITERION_COUNT};
use iwf::textkit::{edit_distance, jaccard, split_sentences, tokenize};

fn matrix_pair() -> impl Strategy<Value = (LabelMatrix, LabelMatrix)> {
    (1usize..40)
        .prop_flat_map(|n| {
            (
                proptest::collection::vec(0u32..(1 << CRITERION_COUNT), n),
                proptest::collection::vec(0u32..(1 << CRITERION_COUNT), n),
            )
        })
        .prop_map(|(a_bits, b_bits)| {
            let build = |bits: &[u32], source| {
                let mut m = LabelMatrix::new(source);
                for (i, &word) in bits.iter().enumerate() {
                    let mut s = FlawSet::new();
                    for c in CriterionId::ALL {
                        s.set(c, word >> c.index() & 1 == 1);
                    }
                    m.push(format!("q{i}"), s).unwrap();
                }
                m
            };
            (build(&a_bits, LabelSource::Rules), build(&b_bits, LabelSource::Human))
        })
}

proptest! {
    #[test]
    fn hamming_and_match_are_complements((a, b) in matrix_pair()) {
        let hl = metrics::hamming_loss(&a, &b).unwrap();
        let mp = metrics::match_percent(&a, &b).unwrap();
        prop_assert!((hl + mp - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_match_never_exceeds_match_percent((a, b) in matrix_pair()) {
        let em = metrics::exact_match_ratio(&a, &b).unwrap();
        let mp = metrics::match_percent(&a, &b).unwrap();
        prop_assert!(em <= mp + 1e-12);
    }

    #[test]
    fn flaw_set_count_is_popcount(word in 0u32..(1 << CRITERION_COUNT)) {
        let mut s = FlawSet::new();
        for c in CriterionId::ALL {
            s.set(c, word >> c.index() & 1 == 1);
        }
        prop_assert_eq!(s.count(), word.count_ones());
        prop_assert_eq!(s.flagged().count(), word.count_ones() as usize);
        let rebuilt = FlawSet::from_bits(*s.bits());
        prop_assert_eq!(s, rebuilt);
    }

    #[test]
    fn kappa_is_symmetric_and_bounded(
        pairs in proptest::collection::vec((any::<bool>(), any::<bool>()), 1..60)
    ) {
        let a: Vec<bool> = pairs.iter().map(|p| p.0).collect();
        let b: Vec<bool> = pairs.iter().map(|p| p.1).collect();
        let ab = metrics::cohen_kappa(&a, &b).unwrap();
        let ba = metrics::cohen_kappa(&b, &a).unwrap();
        prop_assert!((ab.kappa - ba.kappa).abs() < 1e-12);
        prop_assert!(ab.kappa <= 1.0 + 1e-12);
        let self_agree = metrics::cohen_kappa(&a, &a).unwrap();
        prop_assert!((self_agree.kappa - 1.0).abs() < 1e-12);
    }

    #[test]
    fn token_spans_are_ordered_and_in_bounds(text in "\\PC{0,120}") {
        let tokens = tokenize(&text);
        let mut last_end = 0usize;
        for t in &tokens {
            prop_assert!(t.start >= last_end);
            prop_assert!(t.start < t.end);
            prop_assert!(t.end <= text.len());
            prop_assert!(text.is_char_boundary(t.start));
            prop_assert!(text.is_char_boundary(t.end));
            prop_assert_eq!(&t.surface, &text[t.start..t.end]);
            prop_assert_eq!(&t.normal, &t.surface.to_lowercase());
            last_end = t.end;
        }
    }

    #[test]
    fn sentence_spans_cover_tokens(text in "\\PC{0,120}") {
        let spans = split_sentences(&text);
        let mut last_end = 0usize;
        for &(start, end) in &spans {
            prop_assert!(start >= last_end);
            prop_assert!(start < end);
            prop_assert!(end <= text.len());
            last_end = end;
        }
        for t in tokenize(&text) {
            prop_assert!(
                spans.iter().any(|&(s, e)| t.start >= s && t.end <= e),
                "token {:?} outside every sentence", t.surface
            );
        }
    }

    #[test]
    fn edit_distance_is_a_metric(a in "\\PC{0,12}", b in "\\PC{0,12}") {
        prop_assert_eq!(edit_distance(&a, &b), edit_distance(&b, &a));
        prop_assert_eq!(edit_distance(&a, &a), 0);
        let chars_a = a.chars().count();
        let chars_b = b.chars().count();
        prop_assert!(edit_distance(&a, &b) <= chars_a.max(chars_b));
        prop_assert!(edit_distance(&a, &b) >= chars_a.abs_diff(chars_b));
    }

    #[test]
    fn jaccard_is_bounded_and_reflexive(
        words in proptest::collection::btree_set("[a-z]{1,6}", 0..8)
    ) {
        let j = jaccard(&words, &words);
        if words.is_empty() {
            prop_assert_eq!(j, 0.0);
        } else {
            prop_assert!((j - 1.0).abs() < 1e-12);
        }
    }
}
