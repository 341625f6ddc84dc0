//! Bagged decision-tree ensemble with per-split feature subsampling.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::tree::{DecisionTree, DecisionTreeParams, FeatureSampler};
use crate::corpus::QualityLabel;
use crate::error::{Error, Result};
use crate::num::{count, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct RandomForestParams {
    pub n_trees: usize,
    /// `None` means unlimited depth.
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
}

impl Default for RandomForestParams {
    fn default() -> Self {
        RandomForestParams {
            n_trees: 100,
            max_depth: None,
            min_samples_split: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomForest<F> {
    pub(crate) trees: Vec<DecisionTree<F>>,
    n_features: usize,
}

impl<F: Real> RandomForest<F> {
    /// Fit `n_trees` trees, each on a bootstrap sample with sqrt(d)
    /// features considered per split. Per-tree seeds derive from the
    /// master seed, so a fixed seed reproduces the forest exactly.
    pub fn fit(
        rows: &[Vec<F>],
        labels: &[QualityLabel],
        params: &RandomForestParams,
        seed: u64,
    ) -> Result<RandomForest<F>> {
        if rows.is_empty() {
            return Err(Error::EmptyInput);
        }
        let n = rows.len();
        let n_features = rows[0].len();
        let features_per_split = ((n_features as f64).sqrt().round() as usize)
            .clamp(1, n_features);
        let tree_params = DecisionTreeParams {
            max_depth: params.max_depth,
            min_samples_split: params.min_samples_split,
        };

        let mut master = ChaCha8Rng::seed_from_u64(seed);
        let mut trees = Vec::with_capacity(params.n_trees);
        for _ in 0..params.n_trees {
            let tree_seed = master.next_u64();
            let mut rng = ChaCha8Rng::seed_from_u64(tree_seed);
            // bootstrap: n draws with replacement
            let picks: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
            let boot_rows: Vec<Vec<F>> = picks.iter().map(|&i| rows[i].clone()).collect();
            let boot_labels: Vec<QualityLabel> = picks.iter().map(|&i| labels[i]).collect();
            let tree = DecisionTree::fit_with_sampler(
                &boot_rows,
                &boot_labels,
                &tree_params,
                Some(FeatureSampler {
                    rng: &mut rng,
                    features_per_split,
                }),
            )?;
            trees.push(tree);
        }
        Ok(RandomForest { trees, n_features })
    }

    /// Hard vote of each tree, ties to Promoted.
    pub fn per_tree_votes(&self, row: &[F]) -> Result<Vec<QualityLabel>> {
        self.trees
            .iter()
            .map(|t| {
                let scores = t.predict_scores(row)?;
                Ok(if scores[0] >= scores[1] {
                    QualityLabel::Promoted
                } else {
                    QualityLabel::Discouraged
                })
            })
            .collect()
    }

    /// Vote fractions [promoted, discouraged].
    pub fn predict_scores(&self, row: &[F]) -> Result<[F; 2]> {
        let votes = self.per_tree_votes(row)?;
        let promoted = votes
            .iter()
            .filter(|v| **v == QualityLabel::Promoted)
            .count();
        let total = count::<F>(votes.len());
        Ok([
            count::<F>(promoted) / total,
            count::<F>(votes.len() - promoted) / total,
        ])
    }

    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub(crate) fn from_parts(trees: Vec<DecisionTree<F>>, n_features: usize) -> RandomForest<F> {
        RandomForest { trees, n_features }
    }

    pub(crate) fn trees(&self) -> &[DecisionTree<F>] {
        &self.trees
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use QualityLabel::*;

    fn separable() -> (Vec<Vec<f64>>, Vec<QualityLabel>) {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..30 {
            rows.push(vec![i as f64 / 30.0, 1.0]);
            labels.push(Promoted);
            rows.push(vec![2.0 + i as f64 / 30.0, 0.0]);
            labels.push(Discouraged);
        }
        (rows, labels)
    }

    #[test]
    fn forest_learns_separable_data() {
        let (rows, labels) = separable();
        let params = RandomForestParams {
            n_trees: 20,
            ..RandomForestParams::default()
        };
        let forest = RandomForest::fit(&rows, &labels, &params, 11).unwrap();
        for (row, label) in rows.iter().zip(&labels) {
            let scores = forest.predict_scores(row).unwrap();
            let predicted = if scores[0] >= scores[1] { Promoted } else { Discouraged };
            assert_eq!(predicted, *label);
        }
    }

    #[test]
    fn prediction_is_the_majority_of_tree_votes() {
        let (rows, labels) = separable();
        let params = RandomForestParams {
            n_trees: 7,
            ..RandomForestParams::default()
        };
        let forest = RandomForest::fit(&rows, &labels, &params, 3).unwrap();
        let row = &rows[0];
        let votes = forest.per_tree_votes(row).unwrap();
        let promoted = votes.iter().filter(|v| **v == Promoted).count();
        let scores = forest.predict_scores(row).unwrap();
        assert_eq!(scores[0], promoted as f64 / 7.0);
    }

    #[test]
    fn fixed_seed_reproduces_the_forest() {
        let (rows, labels) = separable();
        let params = RandomForestParams {
            n_trees: 5,
            ..RandomForestParams::default()
        };
        let a = RandomForest::fit(&rows, &labels, &params, 9).unwrap();
        let b = RandomForest::fit(&rows, &labels, &params, 9).unwrap();
        assert_eq!(a, b);
        let c = RandomForest::fit(&rows, &labels, &params, 10).unwrap();
        assert!(a != c || a.predict_scores(&rows[0]).unwrap() == c.predict_scores(&rows[0]).unwrap());
    }
}
