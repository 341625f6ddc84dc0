//! Entropy-based metrics: character-level metric entropy and tag-based
//! topic entropy.

use std::collections::BTreeMap;

use crate::corpus::TagFrequencyTable;
use crate::error::{Error, Result};
use crate::num::{count, Real};

/// Shannon entropy (base 2) of the character distribution of `text`,
/// divided by the character count. Low values indicate unusual, repetitive
/// term usage; single-symbol texts score 0.
pub fn metric_entropy<F: Real>(text: &str) -> Result<F> {
    if text.is_empty() {
        return Err(Error::EmptyText);
    }
    let mut freq: BTreeMap<char, usize> = BTreeMap::new();
    let mut len = 0usize;
    for ch in text.chars() {
        *freq.entry(ch).or_insert(0) += 1;
        len += 1;
    }
    let n = count::<F>(len);
    let mut entropy = F::zero();
    for &c in freq.values() {
        let p = count::<F>(c) / n;
        entropy -= p * p.log2();
    }
    Ok(entropy / n)
}

/// Raw topic entropy of a question: -(1/n) * sum_k P_k ln P_k over its
/// tags, with P_k the tag's global probability. Natural log. Higher values
/// mean more common, more ambiguous topics.
pub fn topic_entropy_raw<F: Real>(tags: &[String], table: &TagFrequencyTable) -> Result<F> {
    if tags.is_empty() {
        return Err(Error::EmptyTagList);
    }
    let mut sum = F::zero();
    for tag in tags {
        let p: F = table.probability(tag)?;
        sum += p * p.ln();
    }
    Ok(-sum / count::<F>(tags.len()))
}

/// Batch min-max normalization bounds for topic entropy, recorded with the
/// metric table so later single-question runs reproduce the same scaling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TeNormalization<F> {
    pub min: F,
    pub max: F,
}

impl<F: Real> TeNormalization<F> {
    /// Fit bounds over the raw values of one corpus batch.
    pub fn fit(raw_values: impl Iterator<Item = F>) -> TeNormalization<F> {
        let mut min = F::infinity();
        let mut max = F::neg_infinity();
        let mut any = false;
        for v in raw_values {
            any = true;
            if v < min {
                min = v;
            }
            if v > max {
                max = v;
            }
        }
        if !any {
            return TeNormalization {
                min: F::zero(),
                max: F::zero(),
            };
        }
        TeNormalization { min, max }
    }

    /// Map a raw value into [0, 1], clamping outside the fitted range.
    /// A degenerate batch (max == min) maps everything to 0.
    pub fn apply(&self, raw: F) -> F {
        let span = self.max - self.min;
        if span <= F::zero() {
            return F::zero();
        }
        ((raw - self.min) / span).clamp(F::zero(), F::one())
    }
}
