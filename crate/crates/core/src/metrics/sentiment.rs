//! Lexicon-based sentiment polarity with the four-way output contract:
//! Positive, Negative, Mixed, Neutral.
//!
//! Terms carry integer strengths in [-5,-2] or [2,5]; strengths 0 and +/-1
//! are the implicit neutral baseline and are never stored. A text is
//! scored by the strongest matched term of each sign, so duplicating a
//! matched term never changes the result.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::metrics::rouge::tokenize;

/// Four-way sentiment category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Positive,
    Negative,
    Mixed,
    Neutral,
}

impl Polarity {
    pub fn name(&self) -> &'static str {
        match self {
            Polarity::Positive => "Positive",
            Polarity::Negative => "Negative",
            Polarity::Mixed => "Mixed",
            Polarity::Neutral => "Neutral",
        }
    }

    /// Stable index used when the category is encoded as a number.
    pub fn index(&self) -> usize {
        match self {
            Polarity::Positive => 0,
            Polarity::Negative => 1,
            Polarity::Mixed => 2,
            Polarity::Neutral => 3,
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Polarity {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "Positive" => Ok(Polarity::Positive),
            "Negative" => Ok(Polarity::Negative),
            "Mixed" => Ok(Polarity::Mixed),
            "Neutral" => Ok(Polarity::Neutral),
            other => Err(format!("unknown polarity {other:?}")),
        }
    }
}

/// Term -> strength map; strengths in [-5,-2] U [2,5].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SentimentLexicon {
    entries: BTreeMap<String, i8>,
}

impl SentimentLexicon {
    pub fn new() -> SentimentLexicon {
        SentimentLexicon::default()
    }

    pub fn insert(&mut self, term: &str, strength: i64) -> Result<()> {
        if !((-5..=-2).contains(&strength) || (2..=5).contains(&strength)) {
            return Err(Error::InvalidLexiconStrength {
                term: term.to_string(),
                strength,
            });
        }
        self.entries.insert(term.to_lowercase(), strength as i8);
        Ok(())
    }

    pub fn strength(&self, term: &str) -> Option<i8> {
        self.entries.get(term).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Parse the lexicon file format: one `term<TAB>strength` per line,
    /// `#` starts a comment, blank lines ignored.
    pub fn from_tsv_str(text: &str) -> Result<SentimentLexicon> {
        let mut lexicon = SentimentLexicon::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (term, strength) = line.split_once('\t').ok_or(Error::Malformed {
                what: "lexicon",
                line: idx + 1,
                message: "expected term<TAB>strength".to_string(),
            })?;
            let strength: i64 = strength.trim().parse().map_err(|e| Error::Malformed {
                what: "lexicon",
                line: idx + 1,
                message: format!("bad strength: {e}"),
            })?;
            lexicon.insert(term.trim(), strength)?;
        }
        Ok(lexicon)
    }

    pub fn load(path: &Path) -> Result<SentimentLexicon> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        SentimentLexicon::from_tsv_str(&text)
    }
}

/// Sentiment of one text: the strongest positive and negative strengths
/// found (1 when nothing matched) plus the derived category.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SentimentScore {
    pub positive: i8,
    pub negative: i8,
    pub polarity: Polarity,
}

/// Score a text against the lexicon. Positive when only positive strength
/// reaches 2, Negative when only negative does, Mixed when both do,
/// Neutral otherwise.
pub fn sentiment_polarity(text: &str, lexicon: &SentimentLexicon) -> Result<SentimentScore> {
    if lexicon.is_empty() {
        return Err(Error::EmptyLexicon);
    }
    let mut positive: i8 = 1;
    let mut negative: i8 = 1;
    for token in tokenize(text) {
        if let Some(strength) = lexicon.strength(&token) {
            if strength > 0 {
                positive = positive.max(strength);
            } else {
                negative = negative.max(-strength);
            }
        }
    }
    let polarity = match (positive >= 2, negative >= 2) {
        (true, false) => Polarity::Positive,
        (false, true) => Polarity::Negative,
        (true, true) => Polarity::Mixed,
        (false, false) => Polarity::Neutral,
    };
    Ok(SentimentScore {
        positive,
        negative,
        polarity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> SentimentLexicon {
        let mut l = SentimentLexicon::new();
        l.insert("great", 3).unwrap();
        l.insert("terrible", -4).unwrap();
        l
    }

    #[test]
    fn four_way_classification() {
        let l = toy();
        assert_eq!(sentiment_polarity("great tool", &l).unwrap().polarity, Polarity::Positive);
        assert_eq!(sentiment_polarity("terrible bug", &l).unwrap().polarity, Polarity::Negative);
        assert_eq!(
            sentiment_polarity("great but terrible", &l).unwrap().polarity,
            Polarity::Mixed
        );
        assert_eq!(
            sentiment_polarity("compile the code", &l).unwrap().polarity,
            Polarity::Neutral
        );
    }

    #[test]
    fn matching_is_case_insensitive_and_duplication_invariant() {
        let l = toy();
        let a = sentiment_polarity("GREAT!", &l).unwrap();
        let b = sentiment_polarity("great great great", &l).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.positive, 3);
        assert_eq!(a.negative, 1);
    }

    #[test]
    fn empty_lexicon_is_an_error() {
        assert!(sentiment_polarity("anything", &SentimentLexicon::new()).is_err());
    }

    #[test]
    fn neutral_strengths_are_rejected() {
        let mut l = SentimentLexicon::new();
        assert!(l.insert("meh", 1).is_err());
        assert!(l.insert("meh", 0).is_err());
        assert!(l.insert("meh", -1).is_err());
        assert!(l.insert("meh", 6).is_err());
    }

    #[test]
    fn tsv_parsing_skips_comments() {
        let l = SentimentLexicon::from_tsv_str("# header\ngreat\t3\n\nawful\t-4\n").unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(l.strength("awful"), Some(-4));
        assert!(SentimentLexicon::from_tsv_str("broken line").is_err());
        assert!(SentimentLexicon::from_tsv_str("term\t9").is_err());
    }
}
