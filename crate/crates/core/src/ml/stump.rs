//! Single-feature classification power: cross-validated accuracy of a
//! depth-1 decision tree trained on each feature alone.

use super::cv::{cross_validate, DatasetVariant};
use super::dataset::LabeledDataset;
use super::info_gain::FeatureRanking;
use super::tree::DecisionTreeParams;
use super::{ModelKind, ModelParams, ModelSpec};
use crate::error::Result;
use crate::num::Real;

/// Rank every feature by its solo stump accuracy, descending; ties break
/// lexicographically by feature name.
pub fn rank_by_stump<F: Real>(
    ds: &LabeledDataset<F>,
    k_folds: usize,
    seed: u64,
) -> Result<FeatureRanking<F>> {
    let spec = ModelSpec {
        kind: ModelKind::DecisionTree,
        params: ModelParams::Tree(DecisionTreeParams {
            max_depth: Some(1),
            min_samples_split: 2,
        }),
        seed,
    };
    let mut entries = Vec::with_capacity(ds.n_features());
    for name in &ds.feature_names {
        let solo = ds.select_features(&[name.as_str()])?;
        let report = cross_validate(&spec, &solo, k_folds, seed, DatasetVariant::Imbalanced, name)?;
        entries.push((name.clone(), report.accuracy));
    }
    Ok(FeatureRanking::from_scores(entries))
}
