//! K-nearest-neighbors on standardized rows with Euclidean distance.
//! Distance ties at the k-th neighbor include every tied row.

use crate::corpus::QualityLabel;
use crate::error::{Error, Result};
use crate::num::{count, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct KnnParams {
    pub k: usize,
}

impl Default for KnnParams {
    fn default() -> Self {
        KnnParams { k: 5 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KNearest<F> {
    pub(crate) rows: Vec<Vec<F>>,
    pub(crate) labels: Vec<QualityLabel>,
    pub(crate) k: usize,
}

impl<F: Real> KNearest<F> {
    /// Stores the (already standardized) training rows.
    pub fn fit(rows: &[Vec<F>], labels: &[QualityLabel], params: &KnnParams) -> Result<KNearest<F>> {
        if rows.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(KNearest {
            rows: rows.to_vec(),
            labels: labels.to_vec(),
            k: params.k.max(1),
        })
    }

    /// Neighbor class fractions [promoted, discouraged].
    pub fn predict_scores(&self, row: &[F]) -> Result<[F; 2]> {
        if row.len() != self.rows[0].len() {
            return Err(Error::DimensionMismatch {
                expected: self.rows[0].len(),
                got: row.len(),
            });
        }
        let mut distances: Vec<(F, usize)> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| (squared_distance(row, r), i))
            .collect();
        distances.sort_by(|a, b| {
            a.0.partial_cmp(&b.0)
                .expect("finite distances")
                .then(a.1.cmp(&b.1))
        });
        let k = self.k.min(distances.len());
        let kth = distances[k - 1].0;
        let mut counts = [0usize; 2];
        for (d, i) in &distances {
            if *d > kth {
                break;
            }
            match self.labels[*i] {
                QualityLabel::Promoted => counts[0] += 1,
                QualityLabel::Discouraged => counts[1] += 1,
            }
        }
        let total = count::<F>(counts[0] + counts[1]);
        Ok([count::<F>(counts[0]) / total, count::<F>(counts[1]) / total])
    }
}

fn squared_distance<F: Real>(a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b)
        .map(|(x, y)| (*x - *y) * (*x - *y))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use QualityLabel::*;

    #[test]
    fn one_neighbor_memorizes_distinct_points() {
        let rows = vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]];
        let labels = vec![Promoted, Discouraged, Promoted, Discouraged];
        let knn: KNearest<f64> = KNearest::fit(&rows, &labels, &KnnParams { k: 1 }).unwrap();
        for (row, label) in rows.iter().zip(&labels) {
            let scores = knn.predict_scores(row).unwrap();
            let predicted = if scores[0] >= scores[1] { Promoted } else { Discouraged };
            assert_eq!(predicted, *label);
        }
    }

    #[test]
    fn ties_at_kth_distance_include_all_tied_neighbors() {
        // query 0; neighbors at distance 1: -1 (promoted), +1 (discouraged),
        // another +1 duplicate (discouraged)
        let rows = vec![vec![-1.0], vec![1.0], vec![1.0]];
        let labels = vec![Promoted, Discouraged, Discouraged];
        let knn: KNearest<f64> = KNearest::fit(&rows, &labels, &KnnParams { k: 1 }).unwrap();
        let scores = knn.predict_scores(&[0.0]).unwrap();
        assert!((scores[0] - 1.0 / 3.0).abs() < 1e-12);
        assert!((scores[1] - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn k_larger_than_training_set_uses_everything() {
        let rows = vec![vec![0.0], vec![1.0]];
        let labels = vec![Promoted, Discouraged];
        let knn = KNearest::fit(&rows, &labels, &KnnParams { k: 99 }).unwrap();
        let scores = knn.predict_scores(&[0.5]).unwrap();
        assert_eq!(scores, [0.5, 0.5]);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let knn = KNearest::fit(&[vec![0.0, 1.0]], &[Promoted], &KnnParams::default()).unwrap();
        assert!(knn.predict_scores(&[0.0]).is_err());
    }
}
