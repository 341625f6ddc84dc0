//! Unigram-recall overlap between a reference and a system text.
//!
//! Tokenization: lowercase, split on any non-alphanumeric character, drop
//! empty tokens. Overlap uses set semantics: duplicated tokens count once.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::num::{count, Real};

/// Lowercase alphanumeric tokens, in order, duplicates kept. The text is
/// lowercased before splitting, so every token is purely alphanumeric
/// even when lowercasing expands a character.
pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

/// Distinct lowercase tokens.
pub fn token_set(text: &str) -> BTreeSet<String> {
    tokenize(text).into_iter().collect()
}

/// Fraction of distinct reference unigrams that also appear in the system
/// text. Errors when the reference tokenizes to nothing.
pub fn rouge1_recall<F: Real>(reference: &str, system: &str) -> Result<F> {
    let reference_tokens = token_set(reference);
    if reference_tokens.is_empty() {
        return Err(Error::EmptyReference);
    }
    let system_tokens = token_set(system);
    let overlap = reference_tokens
        .iter()
        .filter(|t| system_tokens.contains(*t))
        .count();
    Ok(count::<F>(overlap) / count::<F>(reference_tokens.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_overlap_scores_one() {
        let r: f64 = rouge1_recall("sort list", "please sort my list now").unwrap();
        assert_eq!(r, 1.0);
    }

    #[test]
    fn disjoint_texts_score_zero() {
        let r: f64 = rouge1_recall("null pointer exception", "my code crashes").unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn partial_overlap_is_a_token_fraction() {
        let r: f64 = rouge1_recall("parse json java", "how to parse a string").unwrap();
        assert_eq!(r, 1.0 / 3.0);
    }

    #[test]
    fn empty_reference_is_an_error() {
        assert!(rouge1_recall::<f64>("!!!", "anything").is_err());
        assert!(rouge1_recall::<f64>("", "anything").is_err());
    }

    #[test]
    fn tokenization_lowercases_and_splits_on_non_alphanumerics() {
        assert_eq!(tokenize("Don't-Panic 42"), vec!["don", "t", "panic", "42"]);
    }

    #[test]
    fn duplicated_system_tokens_do_not_change_recall() {
        let once: f64 = rouge1_recall("a b c", "a x").unwrap();
        let dup: f64 = rouge1_recall("a b c", "a a a x x").unwrap();
        assert_eq!(once, dup);
    }
}
