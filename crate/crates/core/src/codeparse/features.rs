//! Textual features of a code snippet and the feature-based readability
//! score.
//!
//! The score is a logistic transform of a weighted feature sum; the weight
//! vector is a config artifact with a shipped default (see
//! `assets/readability_weights.tsv`). 1 means highly readable, 0 poor.

use std::path::Path;

use super::MergedSnippet;
use crate::corpus::Language;
use crate::error::{Error, Result};
use crate::num::{count, real, Real};

/// Feature order used by weight vectors.
pub const FEATURE_NAMES: [&str; 8] = [
    "avg_line_length",
    "max_line_length",
    "avg_identifier_length",
    "indentation_variance",
    "blank_line_ratio",
    "comment_line_ratio",
    "branch_keyword_density",
    "paren_density",
];

const BRANCH_KEYWORDS: [&str; 11] = [
    "if", "else", "elif", "for", "while", "switch", "case", "do", "catch", "try", "except",
];

/// Per-line and per-token features of one snippet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReadabilityFeatures<F> {
    /// Mean characters per line.
    pub avg_line_length: F,
    /// Characters of the longest line.
    pub max_line_length: F,
    /// Mean length of identifiers: maximal alphanumeric-plus-underscore
    /// runs starting with a letter.
    pub avg_identifier_length: F,
    /// Population variance of leading-whitespace width (tab = 4 columns)
    /// over non-blank lines.
    pub indentation_variance: F,
    /// Blank lines / total lines.
    pub blank_line_ratio: F,
    /// Lines starting with the language's line-comment marker / total lines.
    pub comment_line_ratio: F,
    /// Branch keywords per line.
    pub branch_keyword_density: F,
    /// Parenthesis characters per source character.
    pub paren_density: F,
}

impl<F: Copy> ReadabilityFeatures<F> {
    pub fn as_array(&self) -> [F; 8] {
        [
            self.avg_line_length,
            self.max_line_length,
            self.avg_identifier_length,
            self.indentation_variance,
            self.blank_line_ratio,
            self.comment_line_ratio,
            self.branch_keyword_density,
            self.paren_density,
        ]
    }
}

fn line_comment_marker(language: Language) -> &'static str {
    match language {
        Language::Python => "#",
        _ => "//",
    }
}

/// Compute the feature vector of a merged snippet.
pub fn extract_readability_features<F: Real>(snippet: &MergedSnippet) -> ReadabilityFeatures<F> {
    let source = &snippet.source;
    let lines: Vec<&str> = source.split('\n').collect();
    let n_lines = count::<F>(lines.len());

    let line_lengths: Vec<usize> = lines.iter().map(|l| l.chars().count()).collect();
    let avg_line_length = count::<F>(line_lengths.iter().sum()) / n_lines;
    let max_line_length = count::<F>(line_lengths.iter().copied().max().unwrap_or(0));

    let identifiers = identifier_lengths(source);
    let avg_identifier_length = if identifiers.is_empty() {
        F::zero()
    } else {
        count::<F>(identifiers.iter().sum()) / count::<F>(identifiers.len())
    };

    let indents: Vec<F> = lines
        .iter()
        .filter(|l| !l.trim().is_empty())
        .map(|l| indentation_width(l))
        .collect();
    let indentation_variance = population_variance(&indents);

    let blank = lines.iter().filter(|l| l.trim().is_empty()).count();
    let blank_line_ratio = count::<F>(blank) / n_lines;

    let marker = line_comment_marker(snippet.language);
    let comments = lines
        .iter()
        .filter(|l| l.trim_start().starts_with(marker))
        .count();
    let comment_line_ratio = count::<F>(comments) / n_lines;

    let branches = source
        .split(|c: char| !(c.is_alphanumeric() || c == '_'))
        .filter(|t| BRANCH_KEYWORDS.contains(t))
        .count();
    let branch_keyword_density = count::<F>(branches) / n_lines;

    let chars = source.chars().count().max(1);
    let parens = source.chars().filter(|c| *c == '(' || *c == ')').count();
    let paren_density = count::<F>(parens) / count::<F>(chars);

    ReadabilityFeatures {
        avg_line_length,
        max_line_length,
        avg_identifier_length,
        indentation_variance,
        blank_line_ratio,
        comment_line_ratio,
        branch_keyword_density,
        paren_density,
    }
}

fn identifier_lengths(source: &str) -> Vec<usize> {
    source
        .split(|c: char| !(c.is_alphanumeric() || c == '_'))
        .filter(|run| !run.is_empty() && run.chars().next().is_some_and(|c| c.is_alphabetic()))
        .map(|run| run.chars().count())
        .collect()
}

fn indentation_width<F: Real>(line: &str) -> F {
    let mut width = 0usize;
    for ch in line.chars() {
        match ch {
            ' ' => width += 1,
            '\t' => width += 4,
            _ => break,
        }
    }
    count(width)
}

fn population_variance<F: Real>(values: &[F]) -> F {
    if values.is_empty() {
        return F::zero();
    }
    let n = count::<F>(values.len());
    let mean = values.iter().copied().sum::<F>() / n;
    values.iter().map(|v| (*v - mean) * (*v - mean)).sum::<F>() / n
}

/// Named weight vector over [`FEATURE_NAMES`].
#[derive(Debug, Clone, PartialEq)]
pub struct ReadabilityWeights<F> {
    values: Vec<F>,
}

impl<F: Real> ReadabilityWeights<F> {
    /// Shipped default: blank lines and comments help readability; long
    /// lines, erratic indentation, dense branching, and paren-heavy code
    /// hurt it.
    pub fn default_weights() -> ReadabilityWeights<F> {
        ReadabilityWeights {
            values: [
                -0.02, // avg_line_length
                -0.01, // max_line_length
                -0.05, // avg_identifier_length
                -0.05, // indentation_variance
                1.5,   // blank_line_ratio
                2.0,   // comment_line_ratio
                -1.0,  // branch_keyword_density
                -5.0,  // paren_density
            ]
            .iter()
            .map(|w| real(*w))
            .collect(),
        }
    }

    pub fn from_values(values: Vec<F>) -> Result<ReadabilityWeights<F>> {
        if values.len() != FEATURE_NAMES.len() {
            return Err(Error::WeightDimension {
                expected: FEATURE_NAMES.len(),
                got: values.len(),
            });
        }
        Ok(ReadabilityWeights { values })
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    /// Parse the weights file format: `feature_name<TAB>weight` lines,
    /// `#` comments. Every feature must appear exactly once.
    pub fn from_tsv_str(text: &str) -> Result<ReadabilityWeights<F>> {
        let mut named: Vec<Option<F>> = vec![None; FEATURE_NAMES.len()];
        let mut seen = 0usize;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (name, weight) = line.split_once('\t').ok_or(Error::Malformed {
                what: "weights",
                line: idx + 1,
                message: "expected feature_name<TAB>weight".to_string(),
            })?;
            let position = FEATURE_NAMES
                .iter()
                .position(|f| *f == name.trim())
                .ok_or(Error::Malformed {
                    what: "weights",
                    line: idx + 1,
                    message: format!("unknown feature {name:?}"),
                })?;
            if named[position].is_some() {
                return Err(Error::Malformed {
                    what: "weights",
                    line: idx + 1,
                    message: format!("duplicate feature {name:?}"),
                });
            }
            let value: f64 = weight.trim().parse().map_err(|e| Error::Malformed {
                what: "weights",
                line: idx + 1,
                message: format!("bad weight: {e}"),
            })?;
            named[position] = Some(real(value));
            seen += 1;
        }
        if seen != FEATURE_NAMES.len() {
            return Err(Error::WeightDimension {
                expected: FEATURE_NAMES.len(),
                got: seen,
            });
        }
        Ok(ReadabilityWeights {
            values: named.into_iter().map(|v| v.expect("counted")).collect(),
        })
    }

    pub fn load(path: &Path) -> Result<ReadabilityWeights<F>> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        ReadabilityWeights::from_tsv_str(&text)
    }
}

/// Logistic transform of the weighted feature sum.
pub fn readability_from_features<F: Real>(
    features: &ReadabilityFeatures<F>,
    weights: &ReadabilityWeights<F>,
) -> Result<F> {
    let feature_values = features.as_array();
    if weights.values.len() != feature_values.len() {
        return Err(Error::WeightDimension {
            expected: feature_values.len(),
            got: weights.values.len(),
        });
    }
    let sum: F = feature_values
        .iter()
        .zip(&weights.values)
        .map(|(f, w)| *f * *w)
        .sum();
    Ok(F::one() / (F::one() + (-sum).exp()))
}

/// Readability of a snippet in [0, 1]; 1 = highly readable.
pub fn code_readability<F: Real>(
    snippet: &MergedSnippet,
    weights: &ReadabilityWeights<F>,
) -> Result<F> {
    let features = extract_readability_features(snippet);
    readability_from_features(&features, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snippet(language: Language, source: &str) -> MergedSnippet {
        MergedSnippet {
            language,
            source: source.to_string(),
            block_count: 1,
        }
    }

    #[test]
    fn line_lengths() {
        let f: ReadabilityFeatures<f64> =
            extract_readability_features(&snippet(Language::Java, "ab\ncd"));
        assert_eq!(f.avg_line_length, 2.0);
        assert_eq!(f.max_line_length, 2.0);
    }

    #[test]
    fn blank_line_ratio() {
        let f: ReadabilityFeatures<f64> =
            extract_readability_features(&snippet(Language::Java, "x\n\ny"));
        assert_eq!(f.blank_line_ratio, 1.0 / 3.0);
    }

    #[test]
    fn comment_line_ratio_uses_the_language_marker() {
        let f: ReadabilityFeatures<f64> =
            extract_readability_features(&snippet(Language::Java, "// hi\nx=1"));
        assert_eq!(f.comment_line_ratio, 0.5);
        let py: ReadabilityFeatures<f64> =
            extract_readability_features(&snippet(Language::Python, "# hi\nx=1"));
        assert_eq!(py.comment_line_ratio, 0.5);
        let not_python: ReadabilityFeatures<f64> =
            extract_readability_features(&snippet(Language::Python, "// hi\nx=1"));
        assert_eq!(not_python.comment_line_ratio, 0.0);
    }

    #[test]
    fn identifiers_start_with_a_letter() {
        let lengths = identifier_lengths("foo_bar = 9abc + _x + value2");
        // foo_bar (7) and value2 (6); "9abc" starts with a digit, "_x" with
        // an underscore
        assert_eq!(lengths, vec![7, 6]);
    }

    #[test]
    fn zero_weights_score_half() {
        let w = ReadabilityWeights::<f64>::from_values(vec![0.0; 8]).unwrap();
        let s = snippet(Language::Java, "class A { void m() { if (x) y(); } }");
        assert_eq!(code_readability(&s, &w).unwrap(), 0.5);
    }

    #[test]
    fn score_stays_in_unit_interval() {
        let w = ReadabilityWeights::<f64>::default_weights();
        for src in ["x", "((((((((", &"very long line ".repeat(100), "# c\n\n\n# c"] {
            let score = code_readability(&snippet(Language::Python, src), &w).unwrap();
            assert!((0.0..=1.0).contains(&score), "{score}");
        }
    }

    #[test]
    fn weight_file_roundtrip_and_validation() {
        let text = FEATURE_NAMES
            .iter()
            .enumerate()
            .map(|(i, n)| format!("{n}\t{}", i as f64 / 10.0))
            .collect::<Vec<_>>()
            .join("\n");
        let w = ReadabilityWeights::<f64>::from_tsv_str(&text).unwrap();
        assert_eq!(w.values()[3], 0.3);
        assert!(ReadabilityWeights::<f64>::from_tsv_str("avg_line_length\t1.0").is_err());
        assert!(ReadabilityWeights::<f64>::from_tsv_str("bogus\t1.0").is_err());
        let dup = format!("{text}\navg_line_length\t0.0");
        assert!(ReadabilityWeights::<f64>::from_tsv_str(&dup).is_err());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        assert!(ReadabilityWeights::<f64>::from_values(vec![0.0; 3]).is_err());
    }

    #[test]
    fn indentation_variance_of_uniform_code_is_zero() {
        let f: ReadabilityFeatures<f64> =
            extract_readability_features(&snippet(Language::Python, "    a\n    b"));
        assert_eq!(f.indentation_variance, 0.0);
        let varied: ReadabilityFeatures<f64> =
            extract_readability_features(&snippet(Language::Python, "a\n        b"));
        assert!(varied.indentation_variance > 0.0);
    }
}
