//! Stratified k-fold cross-validation and the evaluation metrics.

use rand::prelude::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::dataset::LabeledDataset;
use super::{train, ModelSpec};
use crate::corpus::QualityLabel;
use crate::error::{Error, Result};
use crate::num::{count, Real};

/// Which sampling variant produced the training table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetVariant {
    Balanced,
    Imbalanced,
}

impl DatasetVariant {
    pub fn name(&self) -> &'static str {
        match self {
            DatasetVariant::Balanced => "balanced",
            DatasetVariant::Imbalanced => "imbalanced",
        }
    }
}

impl std::fmt::Display for DatasetVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Precision / recall / F1 of one class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassMetrics<F> {
    pub precision: F,
    pub recall: F,
    pub f1: F,
}

/// Metrics of one held-out fold.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldMetrics<F> {
    pub fold: usize,
    pub promoted: ClassMetrics<F>,
    pub discouraged: ClassMetrics<F>,
    pub accuracy: F,
}

/// Classifier performance report: micro-averaged over the pooled fold
/// predictions, with the per-fold breakdown attached.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport<F> {
    pub promoted: ClassMetrics<F>,
    pub discouraged: ClassMetrics<F>,
    pub accuracy: F,
    pub folds: Vec<FoldMetrics<F>>,
    pub variant: DatasetVariant,
    pub feature_set: String,
    pub warnings: Vec<String>,
}

/// Outcome of scoring plain prediction/truth pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalOutcome<F> {
    pub promoted: ClassMetrics<F>,
    pub discouraged: ClassMetrics<F>,
    pub accuracy: F,
    pub warnings: Vec<String>,
}

/// Standard precision/recall/F1 per class plus accuracy. A class that was
/// never predicted gets precision 0 with a warning.
pub fn evaluate<F: Real>(
    predictions: &[QualityLabel],
    truth: &[QualityLabel],
) -> Result<EvalOutcome<F>> {
    if predictions.len() != truth.len() {
        return Err(Error::EvalLengthMismatch {
            predictions: predictions.len(),
            truth: truth.len(),
        });
    }
    if predictions.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut warnings = Vec::new();
    let mut per_class = Vec::with_capacity(2);
    for class in [QualityLabel::Promoted, QualityLabel::Discouraged] {
        let tp = predictions
            .iter()
            .zip(truth)
            .filter(|(p, t)| **p == class && **t == class)
            .count();
        let fp = predictions
            .iter()
            .zip(truth)
            .filter(|(p, t)| **p == class && **t != class)
            .count();
        let fn_ = predictions
            .iter()
            .zip(truth)
            .filter(|(p, t)| **p != class && **t == class)
            .count();
        let precision = if tp + fp == 0 {
            warnings.push(format!("no {class} predictions; precision set to 0"));
            F::zero()
        } else {
            count::<F>(tp) / count::<F>(tp + fp)
        };
        let recall = if tp + fn_ == 0 {
            F::zero()
        } else {
            count::<F>(tp) / count::<F>(tp + fn_)
        };
        let f1 = if precision + recall > F::zero() {
            count::<F>(2) * precision * recall / (precision + recall)
        } else {
            F::zero()
        };
        per_class.push(ClassMetrics {
            precision,
            recall,
            f1,
        });
    }
    let correct = predictions
        .iter()
        .zip(truth)
        .filter(|(p, t)| p == t)
        .count();
    Ok(EvalOutcome {
        promoted: per_class[0],
        discouraged: per_class[1],
        accuracy: count::<F>(correct) / count::<F>(truth.len()),
        warnings,
    })
}

/// Stratified fold assignment: each class is shuffled and dealt
/// round-robin, so per-fold class ratios stay within one row of the
/// global ratio. Returns `k` index lists.
pub fn stratified_folds(
    labels: &[QualityLabel],
    k: usize,
    seed: u64,
) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::InvalidParam {
            name: "k".to_string(),
            value: k.to_string(),
            reason: "cross-validation needs at least 2 folds".to_string(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds: Vec<Vec<usize>> = vec![Vec::new(); k];
    for class in [QualityLabel::Promoted, QualityLabel::Discouraged] {
        let mut indices: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        if indices.len() < k {
            return Err(Error::ClassSmallerThanFolds {
                label: class,
                got: indices.len(),
                k,
            });
        }
        indices.shuffle(&mut rng);
        for (position, index) in indices.into_iter().enumerate() {
            folds[position % k].push(index);
        }
    }
    for fold in &mut folds {
        fold.sort_unstable();
    }
    Ok(folds)
}

/// Stratified k-fold cross-validation of one model specification.
/// The aggregate metrics micro-average over the pooled fold predictions.
pub fn cross_validate<F: Real>(
    spec: &ModelSpec<F>,
    ds: &LabeledDataset<F>,
    k: usize,
    seed: u64,
    variant: DatasetVariant,
    feature_set: &str,
) -> Result<EvalReport<F>> {
    let folds = stratified_folds(&ds.labels, k, seed)?;
    let mut pooled: Vec<(usize, QualityLabel)> = Vec::with_capacity(ds.n_rows());
    let mut fold_metrics = Vec::with_capacity(k);
    let mut warnings = Vec::new();

    for (fold_number, test_indices) in folds.iter().enumerate() {
        let train_indices: Vec<usize> = (0..ds.n_rows())
            .filter(|i| !test_indices.contains(i))
            .collect();
        let train_ds = ds.subset(&train_indices);
        let model = train(spec, &train_ds)?;
        let mut fold_predictions = Vec::with_capacity(test_indices.len());
        let mut fold_truth = Vec::with_capacity(test_indices.len());
        for &i in test_indices {
            let prediction = model.predict(&ds.rows[i])?;
            pooled.push((i, prediction.label));
            fold_predictions.push(prediction.label);
            fold_truth.push(ds.labels[i]);
        }
        let outcome: EvalOutcome<F> = evaluate(&fold_predictions, &fold_truth)?;
        warnings.extend(
            outcome
                .warnings
                .iter()
                .map(|w| format!("fold {fold_number}: {w}")),
        );
        fold_metrics.push(FoldMetrics {
            fold: fold_number,
            promoted: outcome.promoted,
            discouraged: outcome.discouraged,
            accuracy: outcome.accuracy,
        });
    }

    pooled.sort_unstable_by_key(|(i, _)| *i);
    let predictions: Vec<QualityLabel> = pooled.iter().map(|(_, p)| *p).collect();
    let outcome: EvalOutcome<F> = evaluate(&predictions, &ds.labels)?;
    warnings.extend(outcome.warnings);
    Ok(EvalReport {
        promoted: outcome.promoted,
        discouraged: outcome.discouraged,
        accuracy: outcome.accuracy,
        folds: fold_metrics,
        variant,
        feature_set: feature_set.to_string(),
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use QualityLabel::*;

    #[test]
    fn textbook_precision_recall() {
        // promoted: TP=8, FP=2, FN=2
        let mut predictions = vec![Promoted; 10];
        let mut truth = vec![Promoted; 8];
        truth.extend([Discouraged, Discouraged]);
        predictions.extend([Discouraged, Discouraged]);
        truth.extend([Promoted, Promoted]);
        let out: EvalOutcome<f64> = evaluate(&predictions, &truth).unwrap();
        assert!((out.promoted.precision - 0.8).abs() < 1e-12);
        assert!((out.promoted.recall - 0.8).abs() < 1e-12);
        assert!((out.promoted.f1 - 0.8).abs() < 1e-12);
    }

    #[test]
    fn perfect_predictions_score_one() {
        let labels = vec![Promoted, Discouraged, Promoted];
        let out: EvalOutcome<f64> = evaluate(&labels, &labels).unwrap();
        assert_eq!(out.accuracy, 1.0);
        assert_eq!(out.promoted.f1, 1.0);
        assert_eq!(out.discouraged.f1, 1.0);
        assert!(out.warnings.is_empty());
    }

    #[test]
    fn never_predicted_class_warns_with_zero_precision() {
        let predictions = vec![Promoted, Promoted];
        let truth = vec![Promoted, Discouraged];
        let out: EvalOutcome<f64> = evaluate(&predictions, &truth).unwrap();
        assert_eq!(out.discouraged.precision, 0.0);
        assert_eq!(out.warnings.len(), 1);
    }

    #[test]
    fn length_mismatch_is_an_error() {
        assert!(evaluate::<f64>(&[Promoted], &[Promoted, Discouraged]).is_err());
    }

    #[test]
    fn accuracy_is_the_prevalence_weighted_recall() {
        let predictions = vec![Promoted, Promoted, Discouraged, Promoted, Discouraged];
        let truth = vec![Promoted, Discouraged, Discouraged, Promoted, Promoted];
        let out: EvalOutcome<f64> = evaluate(&predictions, &truth).unwrap();
        let n_promoted = 3.0;
        let n_discouraged = 2.0;
        let weighted = (out.promoted.recall * n_promoted + out.discouraged.recall * n_discouraged)
            / (n_promoted + n_discouraged);
        assert!((out.accuracy - weighted).abs() < 1e-12);
    }

    #[test]
    fn folds_are_stratified_within_one_row() {
        let labels: Vec<QualityLabel> = (0..100)
            .map(|i| if i % 2 == 0 { Promoted } else { Discouraged })
            .collect();
        let folds = stratified_folds(&labels, 10, 5).unwrap();
        for fold in &folds {
            assert_eq!(fold.len(), 10);
            let promoted = fold.iter().filter(|&&i| labels[i] == Promoted).count();
            assert!((promoted as i64 - 5).abs() <= 1);
        }
        // disjoint cover
        let mut all: Vec<usize> = folds.into_iter().flatten().collect();
        all.sort_unstable();
        assert_eq!(all, (0..100).collect::<Vec<_>>());
    }

    #[test]
    fn class_smaller_than_folds_errors() {
        let labels = vec![Promoted, Promoted, Discouraged];
        assert!(matches!(
            stratified_folds(&labels, 2, 1),
            Err(Error::ClassSmallerThanFolds {
                label: Discouraged,
                ..
            })
        ));
    }

    #[test]
    fn fewer_than_two_folds_is_an_error() {
        let labels = vec![Promoted, Discouraged];
        assert!(matches!(
            stratified_folds(&labels, 1, 1),
            Err(Error::InvalidParam { .. })
        ));
    }
}
