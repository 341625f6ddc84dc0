//! Gaussian naive Bayes with variance smoothing.
//!
//! Per class and feature, fits the mean and population variance; every
//! variance gets `epsilon` added, where `epsilon = var_smoothing * (max
//! population variance over all features of the full training set)`, or
//! `var_smoothing` itself when that maximum is zero. Posteriors are
//! computed in log space and normalized to sum to one.

use crate::corpus::QualityLabel;
use crate::error::{Error, Result};
use crate::num::{count, real, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct GnbParams<F> {
    pub var_smoothing: F,
}

impl<F: Real> Default for GnbParams<F> {
    fn default() -> Self {
        GnbParams {
            var_smoothing: real(1e-9),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianNb<F> {
    /// [promoted, discouraged] priors.
    pub(crate) priors: [F; 2],
    /// Per class, per feature.
    pub(crate) means: [Vec<F>; 2],
    pub(crate) variances: [Vec<F>; 2],
}

impl<F: Real> GaussianNb<F> {
    pub fn fit(rows: &[Vec<F>], labels: &[QualityLabel], params: &GnbParams<F>) -> Result<GaussianNb<F>> {
        if rows.is_empty() {
            return Err(Error::EmptyInput);
        }
        let d = rows[0].len();
        let class_rows = |class: QualityLabel| -> Vec<&Vec<F>> {
            rows.iter()
                .zip(labels)
                .filter(|(_, l)| **l == class)
                .map(|(r, _)| r)
                .collect()
        };
        let promoted = class_rows(QualityLabel::Promoted);
        let discouraged = class_rows(QualityLabel::Discouraged);
        if promoted.is_empty() || discouraged.is_empty() {
            return Err(Error::SingleClassTraining);
        }

        let epsilon = {
            let mut max_var = F::zero();
            for f in 0..d {
                let column: Vec<F> = rows.iter().map(|r| r[f]).collect();
                let v = population_variance(&column);
                if v > max_var {
                    max_var = v;
                }
            }
            if max_var > F::zero() {
                params.var_smoothing * max_var
            } else {
                params.var_smoothing
            }
        };

        let stats = |class: &[&Vec<F>]| -> (Vec<F>, Vec<F>) {
            let n = count::<F>(class.len());
            let mut means = Vec::with_capacity(d);
            let mut variances = Vec::with_capacity(d);
            for f in 0..d {
                let mean = class.iter().map(|r| r[f]).sum::<F>() / n;
                let var = class
                    .iter()
                    .map(|r| (r[f] - mean) * (r[f] - mean))
                    .sum::<F>()
                    / n;
                means.push(mean);
                variances.push(var + epsilon);
            }
            (means, variances)
        };
        let (mean_p, var_p) = stats(&promoted);
        let (mean_d, var_d) = stats(&discouraged);
        let n_total = count::<F>(rows.len());
        Ok(GaussianNb {
            priors: [
                count::<F>(promoted.len()) / n_total,
                count::<F>(discouraged.len()) / n_total,
            ],
            means: [mean_p, mean_d],
            variances: [var_p, var_d],
        })
    }

    /// Normalized posteriors [promoted, discouraged]; they sum to one.
    pub fn predict_scores(&self, row: &[F]) -> Result<[F; 2]> {
        if row.len() != self.means[0].len() {
            return Err(Error::DimensionMismatch {
                expected: self.means[0].len(),
                got: row.len(),
            });
        }
        let two_pi = real::<F>(2.0 * std::f64::consts::PI);
        let mut log_joint = [F::zero(); 2];
        for class in 0..2 {
            let mut lp = self.priors[class].ln();
            for ((x, mean), var) in row
                .iter()
                .zip(&self.means[class])
                .zip(&self.variances[class])
            {
                let diff = *x - *mean;
                lp = lp - (two_pi * *var).ln() / real(2.0) - diff * diff / (real::<F>(2.0) * *var);
            }
            log_joint[class] = lp;
        }
        let max = log_joint[0].max(log_joint[1]);
        let exp0 = (log_joint[0] - max).exp();
        let exp1 = (log_joint[1] - max).exp();
        let sum = exp0 + exp1;
        Ok([exp0 / sum, exp1 / sum])
    }
}

fn population_variance<F: Real>(values: &[F]) -> F {
    let n = count::<F>(values.len());
    let mean = values.iter().copied().sum::<F>() / n;
    values.iter().map(|v| (*v - mean) * (*v - mean)).sum::<F>() / n
}

#[cfg(test)]
mod tests {
    use super::*;
    use QualityLabel::*;

    #[test]
    fn separated_point_classes_classify_by_proximity() {
        // class A = {0,0}, class B = {4,4} on one feature
        let rows = vec![vec![0.0], vec![0.0], vec![4.0], vec![4.0]];
        let labels = vec![Promoted, Promoted, Discouraged, Discouraged];
        let gnb: GaussianNb<f64> = GaussianNb::fit(&rows, &labels, &GnbParams::default()).unwrap();
        let scores = gnb.predict_scores(&[0.0]).unwrap();
        assert!(scores[0] > scores[1]);

        // hand Bayes: both classes have variance eps = 1e-9 * Var(all) with
        // Var([0,0,4,4]) = 4; equal priors cancel, so the posterior follows
        // the squared distances alone
        let eps = 1e-9 * 4.0;
        let log_a = -0.5 * (2.0 * std::f64::consts::PI * eps).ln();
        let log_b = -0.5 * (2.0 * std::f64::consts::PI * eps).ln() - 16.0 / (2.0 * eps);
        let max = log_a.max(log_b);
        let expect_a = ((log_a - max).exp()) / ((log_a - max).exp() + (log_b - max).exp());
        assert!((scores[0] - expect_a).abs() < 1e-12);
    }

    #[test]
    fn scores_sum_to_one() {
        let rows = vec![vec![0.0, 1.0], vec![1.0, 0.0], vec![4.0, 4.0], vec![5.0, 5.0]];
        let labels = vec![Promoted, Promoted, Discouraged, Discouraged];
        let gnb: GaussianNb<f64> = GaussianNb::fit(&rows, &labels, &GnbParams::default()).unwrap();
        let scores = gnb.predict_scores(&[2.0, 2.0]).unwrap();
        assert!((scores[0] + scores[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn single_class_training_is_an_error() {
        let rows = vec![vec![0.0], vec![1.0]];
        let labels = vec![Promoted, Promoted];
        assert!(matches!(
            GaussianNb::fit(&rows, &labels, &GnbParams::default()),
            Err(Error::SingleClassTraining)
        ));
    }

    #[test]
    fn constant_features_fall_back_to_absolute_smoothing() {
        let rows = vec![vec![2.0], vec![2.0], vec![2.0], vec![2.0]];
        let labels = vec![Promoted, Promoted, Discouraged, Discouraged];
        let gnb: GaussianNb<f64> = GaussianNb::fit(&rows, &labels, &GnbParams::default()).unwrap();
        let scores = gnb.predict_scores(&[2.0]).unwrap();
        assert!((scores[0] - 0.5).abs() < 1e-12);
    }
}
