//! Text readability via the long-words-per-sentence index.
//!
//! Raw index = (words with >= 7 alphanumeric characters) / sentences.
//! Sentences are delimited by '.', '!', '?', or a blank line; text without
//! any delimiter counts as one sentence. The reported score is the raw
//! index linearly clamped at [`RIX_MAX`] and mapped to [0, 100]; higher
//! means harder to read.

use crate::corpus::QuestionContent;
use crate::error::{Error, Result};
use crate::num::{count, real, Real};

/// Raw index value mapped to the score ceiling of 100.
pub const RIX_MAX: f64 = 10.0;

const LONG_WORD_CHARS: usize = 7;

/// Raw long-words-per-sentence index of a text.
pub fn rix_raw<F: Real>(text: &str) -> Result<F> {
    if text.trim().is_empty() {
        return Err(Error::EmptyText);
    }
    Ok(count::<F>(long_word_count(text)) / count::<F>(sentence_count(text)))
}

/// Normalized readability score in [0, 100].
pub fn text_readability<F: Real>(content: &QuestionContent) -> Result<F> {
    let raw: F = rix_raw(&content.prose)?;
    Ok(real::<F>(100.0) * raw.min(real(RIX_MAX)) / real(RIX_MAX))
}

/// Words whose alphanumeric character count reaches the long-word bar.
pub fn long_word_count(text: &str) -> usize {
    text.split_whitespace()
        .filter(|w| w.chars().filter(|c| c.is_alphanumeric()).count() >= LONG_WORD_CHARS)
        .count()
}

/// Sentence count; at least 1 for non-empty text.
pub fn sentence_count(text: &str) -> usize {
    let mut sentences = 0;
    let mut current_has_content = false;
    let mut newline_run = 0;
    for ch in text.chars() {
        match ch {
            '.' | '!' | '?' => {
                if current_has_content {
                    sentences += 1;
                    current_has_content = false;
                }
                newline_run = 0;
            }
            '\n' => {
                newline_run += 1;
                if newline_run == 2 && current_has_content {
                    sentences += 1;
                    current_has_content = false;
                }
            }
            c => {
                if !c.is_whitespace() {
                    newline_run = 0;
                }
                if c.is_alphanumeric() {
                    current_has_content = true;
                }
            }
        }
    }
    if current_has_content {
        sentences += 1;
    }
    sentences.max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn content(prose: &str) -> QuestionContent {
        QuestionContent {
            prose: prose.to_string(),
            body_prose: prose.to_string(),
            code_blocks: Vec::new(),
            prose_length: prose.chars().count(),
            code_length: 0,
        }
    }

    #[test]
    fn long_words_per_sentence() {
        // implemented, serialization, yesterday are the three long words
        let raw: f64 = rix_raw("I implemented serialization yesterday. It failed.").unwrap();
        assert_eq!(raw, 1.5);
        let score: f64 =
            text_readability(&content("I implemented serialization yesterday. It failed."))
                .unwrap();
        assert_eq!(score, 15.0);
    }

    #[test]
    fn no_long_words_scores_zero() {
        let score: f64 = text_readability(&content("Hi. Ok.")).unwrap();
        assert_eq!(score, 0.0);
    }

    #[test]
    fn text_without_terminal_punctuation_is_one_sentence() {
        // four long words, no delimiter: the whole text is one sentence
        let raw: f64 = rix_raw("configure serialization pipeline carefully").unwrap();
        assert_eq!(raw, 4.0);
    }

    #[test]
    fn blank_line_delimits_sentences() {
        assert_eq!(sentence_count("first paragraph\n\nsecond paragraph"), 2);
        assert_eq!(sentence_count("one line\nsame sentence"), 1);
    }

    #[test]
    fn punctuation_runs_do_not_create_empty_sentences() {
        assert_eq!(sentence_count("what?! really..."), 2);
        assert_eq!(sentence_count("ok."), 1);
    }

    #[test]
    fn score_clamps_at_one_hundred() {
        let many_long = "serialization ".repeat(25) + ".";
        let score: f64 = text_readability(&content(&many_long)).unwrap();
        assert_eq!(score, 100.0);
    }

    #[test]
    fn empty_prose_is_an_error() {
        assert!(text_readability::<f64>(&content("")).is_err());
        assert!(rix_raw::<f64>("   ").is_err());
    }

    #[test]
    fn reordering_sentences_does_not_change_the_score() {
        let a: f64 = text_readability(&content("Serialization failed. It stopped.")).unwrap();
        let b: f64 = text_readability(&content("It stopped. Serialization failed.")).unwrap();
        assert_eq!(a, b);
    }
}
