//! CART-style binary decision tree with Gini impurity and midpoint
//! threshold candidates.

use rand_chacha::ChaCha8Rng;

use crate::corpus::QualityLabel;
use crate::error::{Error, Result};
use crate::num::{count, real, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTreeParams {
    /// `None` means unlimited depth.
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
}

impl Default for DecisionTreeParams {
    fn default() -> Self {
        DecisionTreeParams {
            max_depth: None,
            min_samples_split: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode<F> {
    Split {
        feature: usize,
        /// Rows with value <= threshold go left.
        threshold: F,
        left: usize,
        right: usize,
    },
    Leaf {
        /// (promoted, discouraged) training counts in this leaf.
        counts: [usize; 2],
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree<F> {
    pub(crate) nodes: Vec<TreeNode<F>>,
    n_features: usize,
}

struct SplitChoice<F> {
    gain: F,
    feature: usize,
    threshold: F,
}

/// Per-split feature subsampling used by the forest.
pub(crate) struct FeatureSampler<'a> {
    pub rng: &'a mut ChaCha8Rng,
    pub features_per_split: usize,
}

impl<F: Real> DecisionTree<F> {
    pub fn fit(
        rows: &[Vec<F>],
        labels: &[QualityLabel],
        params: &DecisionTreeParams,
    ) -> Result<DecisionTree<F>> {
        DecisionTree::fit_with_sampler(rows, labels, params, None)
    }

    pub(crate) fn fit_with_sampler(
        rows: &[Vec<F>],
        labels: &[QualityLabel],
        params: &DecisionTreeParams,
        mut sampler: Option<FeatureSampler<'_>>,
    ) -> Result<DecisionTree<F>> {
        if rows.is_empty() {
            return Err(Error::EmptyInput);
        }
        let n_features = rows[0].len();
        let mut tree = DecisionTree {
            nodes: Vec::new(),
            n_features,
        };
        let indices: Vec<usize> = (0..rows.len()).collect();
        tree.build(rows, labels, indices, 0, params, &mut sampler);
        Ok(tree)
    }

    fn build(
        &mut self,
        rows: &[Vec<F>],
        labels: &[QualityLabel],
        indices: Vec<usize>,
        depth: usize,
        params: &DecisionTreeParams,
        sampler: &mut Option<FeatureSampler<'_>>,
    ) -> usize {
        let counts = class_counts(labels, &indices);
        let is_pure = counts[0] == 0 || counts[1] == 0;
        let depth_reached = params.max_depth.is_some_and(|d| depth >= d);
        let too_small = indices.len() < params.min_samples_split;

        if is_pure || depth_reached || too_small {
            return self.push_leaf(counts);
        }

        let candidate_features: Vec<usize> = match sampler {
            Some(s) => {
                let m = s.features_per_split.min(self.n_features).max(1);
                let mut chosen: Vec<usize> =
                    rand::seq::index::sample(s.rng, self.n_features, m).into_iter().collect();
                chosen.sort_unstable();
                chosen
            }
            None => (0..self.n_features).collect(),
        };

        match best_split(rows, labels, &indices, &candidate_features, counts) {
            None => self.push_leaf(counts),
            Some(split) => {
                let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = indices
                    .into_iter()
                    .partition(|&i| rows[i][split.feature] <= split.threshold);
                // reserve a slot so children know their parent's position
                let node_index = self.nodes.len();
                self.nodes.push(TreeNode::Leaf { counts });
                let left = self.build(rows, labels, left_rows, depth + 1, params, sampler);
                let right = self.build(rows, labels, right_rows, depth + 1, params, sampler);
                self.nodes[node_index] = TreeNode::Split {
                    feature: split.feature,
                    threshold: split.threshold,
                    left,
                    right,
                };
                node_index
            }
        }
    }

    fn push_leaf(&mut self, counts: [usize; 2]) -> usize {
        self.nodes.push(TreeNode::Leaf { counts });
        self.nodes.len() - 1
    }

    /// Class-fraction scores [promoted, discouraged] of the reached leaf.
    pub fn predict_scores(&self, row: &[F]) -> Result<[F; 2]> {
        if row.len() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                got: row.len(),
            });
        }
        let mut at = 0usize;
        loop {
            match &self.nodes[at] {
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if row[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
                TreeNode::Leaf { counts } => {
                    let total = count::<F>(counts[0] + counts[1]);
                    return Ok([count::<F>(counts[0]) / total, count::<F>(counts[1]) / total]);
                }
            }
        }
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub(crate) fn from_parts(nodes: Vec<TreeNode<F>>, n_features: usize) -> DecisionTree<F> {
        DecisionTree { nodes, n_features }
    }

    pub(crate) fn nodes(&self) -> &[TreeNode<F>] {
        &self.nodes
    }
}

fn class_counts(labels: &[QualityLabel], indices: &[usize]) -> [usize; 2] {
    let mut counts = [0usize; 2];
    for &i in indices {
        match labels[i] {
            QualityLabel::Promoted => counts[0] += 1,
            QualityLabel::Discouraged => counts[1] += 1,
        }
    }
    counts
}

fn gini<F: Real>(counts: [usize; 2]) -> F {
    let total = counts[0] + counts[1];
    if total == 0 {
        return F::zero();
    }
    let total_f = count::<F>(total);
    let p0 = count::<F>(counts[0]) / total_f;
    let p1 = count::<F>(counts[1]) / total_f;
    F::one() - p0 * p0 - p1 * p1
}

/// Best (feature, midpoint threshold) by Gini gain. A single sorted sweep
/// per feature moves rows into the left side one tie-group at a time.
/// Ties in gain resolve to the lower feature index, then lower threshold.
fn best_split<F: Real>(
    rows: &[Vec<F>],
    labels: &[QualityLabel],
    indices: &[usize],
    features: &[usize],
    parent_counts: [usize; 2],
) -> Option<SplitChoice<F>> {
    let n = indices.len();
    let parent_gini: F = gini(parent_counts);
    let mut best: Option<SplitChoice<F>> = None;

    for &feature in features {
        let mut order: Vec<usize> = indices.to_vec();
        order.sort_by(|&a, &b| {
            rows[a][feature]
                .partial_cmp(&rows[b][feature])
                .expect("finite features")
        });

        let mut left = [0usize; 2];
        let mut position = 0;
        while position < n {
            // absorb the tie group starting at `position`
            let value = rows[order[position]][feature];
            while position < n && rows[order[position]][feature] == value {
                match labels[order[position]] {
                    QualityLabel::Promoted => left[0] += 1,
                    QualityLabel::Discouraged => left[1] += 1,
                }
                position += 1;
            }
            if position == n {
                break; // no right side left
            }
            let next_value = rows[order[position]][feature];
            let threshold = (value + next_value) / real::<F>(2.0);
            let right = [parent_counts[0] - left[0], parent_counts[1] - left[1]];
            let left_total = left[0] + left[1];
            let weighted = (count::<F>(left_total) * gini::<F>(left)
                + count::<F>(n - left_total) * gini::<F>(right))
                / count::<F>(n);
            // zero-gain splits are kept: both children are non-empty, so
            // recursion still shrinks, and consistent data (e.g. xor
            // patterns with no single informative split) gets memorized
            let gain = parent_gini - weighted;
            let better = match &best {
                None => true,
                Some(b) => {
                    gain > b.gain
                        || (gain == b.gain
                            && (feature < b.feature
                                || (feature == b.feature && threshold < b.threshold)))
                }
            };
            if better {
                best = Some(SplitChoice {
                    gain,
                    feature,
                    threshold,
                });
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use QualityLabel::*;

    fn xor_data() -> (Vec<Vec<f64>>, Vec<QualityLabel>) {
        let rows = vec![
            vec![0.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
        ];
        let labels = vec![Promoted, Discouraged, Discouraged, Promoted];
        (rows, labels)
    }

    #[test]
    fn consistent_data_memorizes_at_unlimited_depth() {
        let (rows, labels) = xor_data();
        let tree: DecisionTree<f64> = DecisionTree::fit(&rows, &labels, &DecisionTreeParams::default()).unwrap();
        for (row, label) in rows.iter().zip(&labels) {
            let scores = tree.predict_scores(row).unwrap();
            let predicted = if scores[0] >= scores[1] { Promoted } else { Discouraged };
            assert_eq!(predicted, *label);
        }
    }

    #[test]
    fn depth_one_stump_cannot_solve_xor() {
        let (rows, labels) = xor_data();
        let params = DecisionTreeParams {
            max_depth: Some(1),
            min_samples_split: 2,
        };
        let tree = DecisionTree::fit(&rows, &labels, &params).unwrap();
        let correct = rows
            .iter()
            .zip(&labels)
            .filter(|(row, label)| {
                let scores = tree.predict_scores(row).unwrap();
                let predicted = if scores[0] >= scores[1] { Promoted } else { Discouraged };
                predicted == **label
            })
            .count();
        assert!(correct <= 3);
    }

    #[test]
    fn scores_are_leaf_fractions() {
        // one conflicting duplicate: leaf can't be pure
        let rows = vec![vec![1.0], vec![1.0], vec![1.0], vec![5.0]];
        let labels = vec![Promoted, Promoted, Discouraged, Discouraged];
        let tree: DecisionTree<f64> = DecisionTree::fit(&rows, &labels, &DecisionTreeParams::default()).unwrap();
        let scores = tree.predict_scores(&[1.0]).unwrap();
        assert!((scores[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((scores[1] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let (rows, labels) = xor_data();
        let tree: DecisionTree<f64> = DecisionTree::fit(&rows, &labels, &DecisionTreeParams::default()).unwrap();
        assert!(tree.predict_scores(&[0.0]).is_err());
    }

    #[test]
    fn predictions_are_invariant_under_monotone_feature_transforms() {
        let rows: Vec<Vec<f64>> = (0..40)
            .map(|i| vec![i as f64 / 7.0, ((i * 13) % 40) as f64])
            .collect();
        let labels: Vec<QualityLabel> = (0..40)
            .map(|i| if (i % 3) == 0 { Promoted } else { Discouraged })
            .collect();
        let transform = |v: f64| (v + 1.0).powi(3);
        let transformed: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| r.iter().map(|v| transform(*v)).collect())
            .collect();
        let params = DecisionTreeParams::default();
        let tree_a = DecisionTree::fit(&rows, &labels, &params).unwrap();
        let tree_b = DecisionTree::fit(&transformed, &labels, &params).unwrap();
        for (row, trow) in rows.iter().zip(&transformed) {
            assert_eq!(
                tree_a.predict_scores(row).unwrap(),
                tree_b.predict_scores(trow).unwrap()
            );
        }
    }

    #[test]
    fn min_samples_split_stops_growth() {
        let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64]).collect();
        let labels: Vec<QualityLabel> =
            (0..10).map(|i| if i < 5 { Promoted } else { Discouraged }).collect();
        let params = DecisionTreeParams {
            max_depth: None,
            min_samples_split: 100,
        };
        let tree = DecisionTree::fit(&rows, &labels, &params).unwrap();
        assert_eq!(tree.nodes.len(), 1);
    }
}
