//! Information-gain feature scoring: class-entropy reduction after
//! conditioning on an equal-frequency-binned feature. Entropies in nats.

use crate::corpus::QualityLabel;
use crate::error::{Error, Result};
use crate::ml::dataset::LabeledDataset;
use crate::num::{count, Real};

/// Default bin count for discretizing continuous features.
pub const DEFAULT_BINS: usize = 10;

/// Scored features, descending; ties broken lexicographically by name.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRanking<F> {
    pub entries: Vec<(String, F)>,
}

impl<F: Real> FeatureRanking<F> {
    pub(crate) fn from_scores(mut entries: Vec<(String, F)>) -> FeatureRanking<F> {
        entries.sort_by(|(name_a, score_a), (name_b, score_b)| {
            score_b
                .partial_cmp(score_a)
                .expect("scores are finite")
                .then_with(|| name_a.cmp(name_b))
        });
        FeatureRanking { entries }
    }
}

/// Equal-frequency bin index per row. Rows with equal values always land
/// in the same bin: a value's bin is `floor(rank_below * bins / n)`.
pub fn equal_frequency_bins<F: Real>(column: &[F], bins: usize) -> Vec<usize> {
    let n = column.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| column[i].partial_cmp(&column[j]).expect("finite values"));

    let mut assignment = vec![0usize; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && column[order[j + 1]] == column[order[i]] {
            j += 1;
        }
        let bin = ((i * bins) / n).min(bins - 1);
        for &row in &order[i..=j] {
            assignment[row] = bin;
        }
        i = j + 1;
    }
    assignment
}

fn entropy_nats<F: Real>(counts: &[usize]) -> F {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return F::zero();
    }
    let total_f = count::<F>(total);
    let mut h = F::zero();
    for &c in counts {
        if c == 0 {
            continue;
        }
        let p = count::<F>(c) / total_f;
        h -= p * p.ln();
    }
    h
}

/// IG = H(C) - H(C | binned feature), in nats. A single-class label
/// column scores 0 (there is nothing to gain). Always in [0, H(C)].
pub fn information_gain<F: Real>(
    column: &[F],
    labels: &[QualityLabel],
    bins: usize,
) -> Result<F> {
    if column.len() != labels.len() {
        return Err(Error::LengthMismatch {
            column: column.len(),
            labels: labels.len(),
        });
    }
    if column.len() < 2 {
        return Err(Error::EmptyInput);
    }
    let n = labels.len();
    let class_counts = |rows: &[usize]| -> [usize; 2] {
        let mut c = [0usize; 2];
        for &i in rows {
            match labels[i] {
                QualityLabel::Promoted => c[0] += 1,
                QualityLabel::Discouraged => c[1] += 1,
            }
        }
        c
    };

    let all_rows: Vec<usize> = (0..n).collect();
    let h_class: F = entropy_nats(&class_counts(&all_rows));
    if h_class == F::zero() {
        return Ok(F::zero());
    }

    let assignment = equal_frequency_bins(column, bins.max(1));
    let mut by_bin: Vec<Vec<usize>> = vec![Vec::new(); bins.max(1)];
    for (row, &bin) in assignment.iter().enumerate() {
        by_bin[bin].push(row);
    }
    let mut conditional = F::zero();
    for rows in &by_bin {
        if rows.is_empty() {
            continue;
        }
        let weight = count::<F>(rows.len()) / count::<F>(n);
        conditional += weight * entropy_nats(&class_counts(rows));
    }
    Ok((h_class - conditional).max(F::zero()))
}

/// Rank every dataset feature by information gain.
pub fn rank_by_info_gain<F: Real>(
    ds: &LabeledDataset<F>,
    bins: usize,
) -> Result<FeatureRanking<F>> {
    let mut entries = Vec::with_capacity(ds.n_features());
    for (idx, name) in ds.feature_names.iter().enumerate() {
        let score = information_gain(&ds.column(idx), &ds.labels, bins)?;
        entries.push((name.clone(), score));
    }
    Ok(FeatureRanking::from_scores(entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use QualityLabel::*;

    #[test]
    fn perfect_feature_gains_ln2_on_balanced_labels() {
        let labels = [Promoted, Discouraged, Promoted, Discouraged];
        let column = [1.0f64, 0.0, 1.0, 0.0];
        let ig = information_gain(&column, &labels, 10).unwrap();
        assert!((ig - core::f64::consts::LN_2).abs() < 1e-9);
    }

    #[test]
    fn constant_feature_gains_nothing() {
        let labels = [Promoted, Discouraged, Promoted, Discouraged];
        let column = [5.0f64; 4];
        assert_eq!(information_gain(&column, &labels, 10).unwrap(), 0.0);
    }

    #[test]
    fn single_class_labels_gain_zero() {
        let labels = [Promoted, Promoted];
        let column = [0.0f64, 1.0];
        assert_eq!(information_gain(&column, &labels, 10).unwrap(), 0.0);
    }

    #[test]
    fn gain_never_exceeds_class_entropy() {
        let labels = [Promoted, Promoted, Promoted, Discouraged];
        // H(C) = -(3/4)ln(3/4) - (1/4)ln(1/4)
        let h = -(0.75f64 * 0.75f64.ln() + 0.25 * 0.25f64.ln());
        let column = [0.1f64, 0.2, 0.3, 0.4];
        let ig = information_gain(&column, &labels, 4).unwrap();
        assert!(ig <= h + 1e-12);
    }

    #[test]
    fn length_mismatch_errors() {
        assert!(information_gain(&[1.0f64], &[Promoted, Discouraged], 4).is_err());
    }

    #[test]
    fn binning_keeps_ties_together() {
        let column = [1.0f64, 1.0, 1.0, 2.0, 2.0, 3.0];
        let bins = equal_frequency_bins(&column, 3);
        assert_eq!(bins[0], bins[1]);
        assert_eq!(bins[1], bins[2]);
        assert_eq!(bins[3], bins[4]);
        assert!(bins[5] > bins[0]);
    }

    #[test]
    fn ranking_sorts_descending_with_lexicographic_ties() {
        let ds = LabeledDataset::new(
            vec!["noise".to_string(), "b_copy".to_string(), "a_copy".to_string()],
            vec![
                vec![0.5, 1.0, 1.0],
                vec![0.5, 0.0, 0.0],
                vec![0.5, 1.0, 1.0],
                vec![0.5, 0.0, 0.0],
            ],
            vec![Promoted, Discouraged, Promoted, Discouraged],
        )
        .unwrap();
        let ranking = rank_by_info_gain(&ds, 4).unwrap();
        assert_eq!(ranking.entries[0].0, "a_copy");
        assert_eq!(ranking.entries[1].0, "b_copy");
        assert_eq!(ranking.entries[0].1, ranking.entries[1].1);
        assert_eq!(ranking.entries[2].0, "noise");
        assert_eq!(ranking.entries[2].1, 0.0);
    }
}
