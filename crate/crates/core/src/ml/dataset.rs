//! Feature matrix assembly from metric vectors.

use crate::corpus::QualityLabel;
use crate::error::{Error, Result};
use crate::metrics::{MetricVector, Polarity};
use crate::num::{count, real, Real};

/// The optimal feature subset found by the ranking analyses.
pub const TOP4: [&str; 4] = ["te", "tr", "me", "tcr"];

/// The ten canonical metric names in ranking order.
pub const CANONICAL_METRICS: [&str; 10] =
    ["te", "me", "tcr", "cr", "tr", "tcc", "tq", "sp", "cua", "cruse"];

/// How the categorical sentiment metric becomes model features.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpEncoding {
    /// One column `sp` holding the category index; used for the
    /// per-metric rankings so the output lists the ten metrics.
    CategoryIndex,
    /// Strength pair plus the 4-way one-hot: `sp_pos`, `sp_neg`,
    /// `sp_positive`, `sp_negative`, `sp_mixed`, `sp_neutral`; used for
    /// model training.
    StrengthsAndOneHot,
}

/// What to do with rows whose selected features are not applicable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NaPolicy {
    /// Impute 0 and add a `has_code` indicator column.
    ImputeZeroWithFlag,
    /// Drop rows with any missing selected feature.
    DropRows,
}

/// Rectangular labeled feature matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset<F> {
    pub feature_names: Vec<String>,
    pub rows: Vec<Vec<F>>,
    pub labels: Vec<QualityLabel>,
}

/// Column names generated by an encoding/policy pair, full feature set.
pub fn all_feature_names(sp: SpEncoding, na: NaPolicy) -> Vec<String> {
    let mut names: Vec<String> = vec!["te", "me", "tcr", "cr", "tr", "tcc", "tq"]
        .into_iter()
        .map(str::to_string)
        .collect();
    match sp {
        SpEncoding::CategoryIndex => names.push("sp".to_string()),
        SpEncoding::StrengthsAndOneHot => {
            for n in ["sp_pos", "sp_neg", "sp_positive", "sp_negative", "sp_mixed", "sp_neutral"] {
                names.push(n.to_string());
            }
        }
    }
    names.push("cua".to_string());
    names.push("cruse".to_string());
    if na == NaPolicy::ImputeZeroWithFlag {
        names.push("has_code".to_string());
    }
    names
}

/// Value of one named feature of one metric vector; `None` when the
/// metric is not applicable to this question.
pub fn feature_value<F: Real>(v: &MetricVector<F>, name: &str) -> Option<F> {
    match name {
        "te" => v.te,
        "me" => v.me,
        "tcr" => v.tcr,
        "cr" => v.cr,
        "tr" => v.tr,
        "tcc" => v.tcc,
        "tq" => v.tq,
        "sp" => v.sp.map(|p| count(p.index())),
        "sp_pos" => Some(real(v.sp_pos as f64)),
        "sp_neg" => Some(real(v.sp_neg as f64)),
        "sp_positive" => v.sp.map(|p| one_hot(p, Polarity::Positive)),
        "sp_negative" => v.sp.map(|p| one_hot(p, Polarity::Negative)),
        "sp_mixed" => v.sp.map(|p| one_hot(p, Polarity::Mixed)),
        "sp_neutral" => v.sp.map(|p| one_hot(p, Polarity::Neutral)),
        "cua" => v.cua.map(|c| F::from_u64(c).expect("count fits scalar")),
        "cruse" => v.cruse.map(|p| {
            if p == crate::codeparse::Parsability::Parsable {
                F::one()
            } else {
                F::zero()
            }
        }),
        "has_code" => Some(if v.has_code { F::one() } else { F::zero() }),
        _ => None,
    }
}

fn one_hot<F: Real>(actual: Polarity, expected: Polarity) -> F {
    if actual == expected {
        F::one()
    } else {
        F::zero()
    }
}

/// Assemble one model row for a known feature-name list, applying the
/// N/A policy. Returns `None` under `DropRows` when a value is missing.
pub fn row_for_features<F: Real>(
    v: &MetricVector<F>,
    feature_names: &[String],
    na_policy: NaPolicy,
) -> Result<Option<Vec<F>>> {
    let mut row = Vec::with_capacity(feature_names.len());
    for name in feature_names {
        let value = feature_value(v, name);
        match (value, na_policy) {
            (Some(x), _) => row.push(x),
            (None, NaPolicy::ImputeZeroWithFlag) => row.push(F::zero()),
            (None, NaPolicy::DropRows) => return Ok(None),
        }
    }
    for (name, x) in feature_names.iter().zip(&row) {
        if !x.is_finite() {
            return Err(Error::NonFiniteFeature {
                feature: name.clone(),
                row: v.question_id as usize,
            });
        }
    }
    Ok(Some(row))
}

impl<F: Real> LabeledDataset<F> {
    /// Build a dataset from labeled metric vectors. Unlabeled vectors are
    /// rejected: training data must carry the vote polarity.
    pub fn from_vectors(
        vectors: &[MetricVector<F>],
        feature_names: Vec<String>,
        na_policy: NaPolicy,
    ) -> Result<LabeledDataset<F>> {
        let mut rows = Vec::with_capacity(vectors.len());
        let mut labels = Vec::with_capacity(vectors.len());
        for v in vectors {
            let label = v.label.ok_or(Error::Unlabelable { id: v.question_id })?;
            if let Some(row) = row_for_features(v, &feature_names, na_policy)? {
                rows.push(row);
                labels.push(label);
            }
        }
        LabeledDataset::new(feature_names, rows, labels)
    }

    pub fn new(
        feature_names: Vec<String>,
        rows: Vec<Vec<F>>,
        labels: Vec<QualityLabel>,
    ) -> Result<LabeledDataset<F>> {
        if rows.len() != labels.len() {
            return Err(Error::LengthMismatch {
                column: rows.len(),
                labels: labels.len(),
            });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != feature_names.len() {
                return Err(Error::RaggedDataset {
                    row: i,
                    got: row.len(),
                    expected: feature_names.len(),
                });
            }
            for (name, x) in feature_names.iter().zip(row) {
                if !x.is_finite() {
                    return Err(Error::NonFiniteFeature {
                        feature: name.clone(),
                        row: i,
                    });
                }
            }
        }
        Ok(LabeledDataset {
            feature_names,
            rows,
            labels,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn feature_index(&self, name: &str) -> Result<usize> {
        self.feature_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownFeature(name.to_string()))
    }

    pub fn column(&self, index: usize) -> Vec<F> {
        self.rows.iter().map(|r| r[index]).collect()
    }

    /// (promoted, discouraged) counts.
    pub fn class_counts(&self) -> (usize, usize) {
        let promoted = self
            .labels
            .iter()
            .filter(|l| **l == QualityLabel::Promoted)
            .count();
        (promoted, self.labels.len() - promoted)
    }

    /// Projection onto a subset of features, keeping every row.
    pub fn select_features(&self, names: &[&str]) -> Result<LabeledDataset<F>> {
        let indices: Vec<usize> = names
            .iter()
            .map(|n| self.feature_index(n))
            .collect::<Result<_>>()?;
        let rows = self
            .rows
            .iter()
            .map(|r| indices.iter().map(|i| r[*i]).collect())
            .collect();
        LabeledDataset::new(
            names.iter().map(|n| n.to_string()).collect(),
            rows,
            self.labels.clone(),
        )
    }

    /// Subset of rows by index, in the given order.
    pub fn subset(&self, indices: &[usize]) -> LabeledDataset<F> {
        LabeledDataset {
            feature_names: self.feature_names.clone(),
            rows: indices.iter().map(|i| self.rows[*i].clone()).collect(),
            labels: indices.iter().map(|i| self.labels[*i]).collect(),
        }
    }

    /// Balanced copy via majority-class undersampling.
    pub fn undersampled(&self, seed: u64) -> Result<LabeledDataset<F>> {
        let keep = crate::corpus::undersample_indices(&self.labels, seed)?;
        Ok(self.subset(&keep))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Language;

    fn vector(id: u64, label: QualityLabel, te: f64, has_code: bool) -> MetricVector<f64> {
        MetricVector {
            question_id: id,
            label: Some(label),
            language: Language::Java,
            tq: Some(0.5),
            tr: Some(20.0),
            cr: if has_code { Some(0.4) } else { None },
            tcr: if has_code { Some(1.2) } else { None },
            tcc: if has_code { Some(0.3) } else { None },
            cruse: if has_code {
                Some(crate::codeparse::Parsability::Parsable)
            } else {
                None
            },
            cua: if has_code { Some(3) } else { None },
            te: Some(te),
            te_raw: Some(te),
            me: Some(0.02),
            sp: Some(Polarity::Neutral),
            sp_pos: 1,
            sp_neg: 1,
            has_code,
            diagnostics: Vec::new(),
        }
    }

    #[test]
    fn impute_policy_keeps_rows_and_adds_flag() {
        let names = all_feature_names(SpEncoding::StrengthsAndOneHot, NaPolicy::ImputeZeroWithFlag);
        let vectors = vec![
            vector(1, QualityLabel::Promoted, 0.2, true),
            vector(2, QualityLabel::Discouraged, 0.8, false),
        ];
        let ds = LabeledDataset::from_vectors(&vectors, names.clone(), NaPolicy::ImputeZeroWithFlag)
            .unwrap();
        assert_eq!(ds.n_rows(), 2);
        assert_eq!(ds.n_features(), names.len());
        let has_code = ds.feature_index("has_code").unwrap();
        assert_eq!(ds.rows[0][has_code], 1.0);
        assert_eq!(ds.rows[1][has_code], 0.0);
        let cr = ds.feature_index("cr").unwrap();
        assert_eq!(ds.rows[1][cr], 0.0);
    }

    #[test]
    fn drop_policy_removes_na_rows() {
        let names = all_feature_names(SpEncoding::StrengthsAndOneHot, NaPolicy::DropRows);
        let vectors = vec![
            vector(1, QualityLabel::Promoted, 0.2, true),
            vector(2, QualityLabel::Discouraged, 0.8, false),
        ];
        let ds =
            LabeledDataset::from_vectors(&vectors, names, NaPolicy::DropRows).unwrap();
        assert_eq!(ds.n_rows(), 1);
    }

    #[test]
    fn category_encoding_has_one_sp_column() {
        let names = all_feature_names(SpEncoding::CategoryIndex, NaPolicy::ImputeZeroWithFlag);
        assert!(names.contains(&"sp".to_string()));
        assert!(!names.contains(&"sp_pos".to_string()));
        // the ten canonical metrics plus the indicator
        assert_eq!(names.len(), 11);
    }

    #[test]
    fn unlabeled_vectors_are_rejected() {
        let mut v = vector(1, QualityLabel::Promoted, 0.2, true);
        v.label = None;
        let names = all_feature_names(SpEncoding::StrengthsAndOneHot, NaPolicy::ImputeZeroWithFlag);
        assert!(matches!(
            LabeledDataset::from_vectors(&[v], names, NaPolicy::ImputeZeroWithFlag),
            Err(Error::Unlabelable { id: 1 })
        ));
    }

    #[test]
    fn select_features_projects_columns() {
        let names = all_feature_names(SpEncoding::StrengthsAndOneHot, NaPolicy::ImputeZeroWithFlag);
        let vectors = vec![vector(1, QualityLabel::Promoted, 0.2, true)];
        let ds = LabeledDataset::from_vectors(&vectors, names, NaPolicy::ImputeZeroWithFlag)
            .unwrap();
        let top = ds.select_features(&TOP4).unwrap();
        assert_eq!(top.feature_names, vec!["te", "tr", "me", "tcr"]);
        assert_eq!(top.rows[0], vec![0.2, 20.0, 0.02, 1.2]);
        assert!(ds.select_features(&["bogus"]).is_err());
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let err = LabeledDataset::new(
            vec!["a".to_string(), "b".to_string()],
            vec![vec![1.0, 2.0], vec![1.0]],
            vec![QualityLabel::Promoted, QualityLabel::Discouraged],
        );
        assert!(matches!(err, Err(Error::RaggedDataset { row: 1, .. })));
    }

    #[test]
    fn non_finite_values_are_rejected() {
        let err = LabeledDataset::new(
            vec!["a".to_string()],
            vec![vec![f64::NAN]],
            vec![QualityLabel::Promoted],
        );
        assert!(matches!(err, Err(Error::NonFiniteFeature { .. })));
    }
}
