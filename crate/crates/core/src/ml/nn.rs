//! One-hidden-layer feedforward network: logistic-sigmoid hidden
//! activation, softmax output, cross-entropy loss, trained by mini-batch
//! gradient descent on standardized inputs.

use rand::prelude::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::QualityLabel;
use crate::error::{Error, Result};
use crate::num::{count, real, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct NnParams<F> {
    pub hidden: usize,
    pub learning_rate: F,
    pub epochs: usize,
    pub batch_size: usize,
}

impl<F: Real> Default for NnParams<F> {
    fn default() -> Self {
        NnParams {
            hidden: 16,
            learning_rate: real(0.01),
            epochs: 200,
            batch_size: 32,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NeuralNet<F> {
    /// hidden x input.
    pub(crate) w1: Vec<Vec<F>>,
    pub(crate) b1: Vec<F>,
    /// 2 x hidden.
    pub(crate) w2: Vec<Vec<F>>,
    pub(crate) b2: Vec<F>,
}

fn sigmoid<F: Real>(x: F) -> F {
    F::one() / (F::one() + (-x).exp())
}

fn class_index(label: QualityLabel) -> usize {
    match label {
        QualityLabel::Promoted => 0,
        QualityLabel::Discouraged => 1,
    }
}

struct Forward<F> {
    hidden: Vec<F>,
    logits: [F; 2],
}

impl<F: Real> NeuralNet<F> {
    /// Xavier-uniform initialization from the seed.
    pub fn init(n_features: usize, hidden: usize, seed: u64) -> NeuralNet<F> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut uniform = |limit: f64| -> F {
            let x: f64 = rng.random_range(-limit..limit);
            real(x)
        };
        let limit1 = (6.0 / (n_features + hidden) as f64).sqrt();
        let w1 = (0..hidden)
            .map(|_| (0..n_features).map(|_| uniform(limit1)).collect())
            .collect();
        let limit2 = (6.0 / (hidden + 2) as f64).sqrt();
        let w2 = (0..2)
            .map(|_| (0..hidden).map(|_| uniform(limit2)).collect())
            .collect();
        NeuralNet {
            w1,
            b1: vec![F::zero(); hidden],
            w2,
            b2: vec![F::zero(); 2],
        }
    }

    pub fn n_features(&self) -> usize {
        self.w1.first().map(|r| r.len()).unwrap_or(0)
    }

    pub fn hidden_units(&self) -> usize {
        self.w1.len()
    }

    fn forward(&self, row: &[F]) -> Forward<F> {
        let hidden: Vec<F> = self
            .w1
            .iter()
            .zip(&self.b1)
            .map(|(weights, bias)| {
                let z = weights.iter().zip(row).map(|(w, x)| *w * *x).sum::<F>() + *bias;
                sigmoid(z)
            })
            .collect();
        let mut logits = [F::zero(); 2];
        for (k, logit) in logits.iter_mut().enumerate() {
            *logit = self.w2[k]
                .iter()
                .zip(&hidden)
                .map(|(w, a)| *w * *a)
                .sum::<F>()
                + self.b2[k];
        }
        Forward { hidden, logits }
    }

    /// Softmax probabilities [promoted, discouraged].
    pub fn predict_scores(&self, row: &[F]) -> Result<[F; 2]> {
        if row.len() != self.n_features() {
            return Err(Error::DimensionMismatch {
                expected: self.n_features(),
                got: row.len(),
            });
        }
        Ok(softmax(self.forward(row).logits))
    }

    /// Mean cross-entropy over a set, via the smooth log-sum-exp form.
    pub fn loss(&self, rows: &[Vec<F>], labels: &[QualityLabel]) -> F {
        let mut total = F::zero();
        for (row, label) in rows.iter().zip(labels) {
            let logits = self.forward(row).logits;
            total = total + log_sum_exp(logits) - logits[class_index(*label)];
        }
        total / count(rows.len())
    }

    /// Loss and the full analytic gradient, flattened in parameter order.
    pub fn loss_and_gradients(&self, rows: &[Vec<F>], labels: &[QualityLabel]) -> (F, Vec<F>) {
        let grads = self.batch_gradients(rows, labels);
        (self.loss(rows, labels), grads.flatten())
    }

    fn batch_gradients(&self, rows: &[Vec<F>], labels: &[QualityLabel]) -> Gradients<F> {
        let d = self.n_features();
        let h = self.hidden_units();
        let mut g = Gradients::zeros(d, h);
        let scale = F::one() / count::<F>(rows.len());
        for (row, label) in rows.iter().zip(labels) {
            let fwd = self.forward(row);
            let probs = softmax(fwd.logits);
            let mut dz2 = [F::zero(); 2];
            for k in 0..2 {
                let target = if class_index(*label) == k { F::one() } else { F::zero() };
                dz2[k] = (probs[k] - target) * scale;
            }
            for k in 0..2 {
                for j in 0..h {
                    g.w2[k][j] += dz2[k] * fwd.hidden[j];
                }
                g.b2[k] += dz2[k];
            }
            for j in 0..h {
                let da = dz2[0] * self.w2[0][j] + dz2[1] * self.w2[1][j];
                let dz1 = da * fwd.hidden[j] * (F::one() - fwd.hidden[j]);
                for i in 0..d {
                    g.w1[j][i] += dz1 * row[i];
                }
                g.b1[j] += dz1;
            }
        }
        g
    }

    /// Mini-batch gradient descent.
    pub fn train(
        &mut self,
        rows: &[Vec<F>],
        labels: &[QualityLabel],
        params: &NnParams<F>,
        seed: u64,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
        let mut order: Vec<usize> = (0..rows.len()).collect();
        let batch_size = params.batch_size.max(1);
        for _ in 0..params.epochs {
            order.shuffle(&mut rng);
            for batch in order.chunks(batch_size) {
                let batch_rows: Vec<Vec<F>> = batch.iter().map(|&i| rows[i].clone()).collect();
                let batch_labels: Vec<QualityLabel> = batch.iter().map(|&i| labels[i]).collect();
                let grads = self.batch_gradients(&batch_rows, &batch_labels);
                self.step(&grads, params.learning_rate);
            }
        }
    }

    fn step(&mut self, g: &Gradients<F>, lr: F) {
        for (row, grow) in self.w1.iter_mut().zip(&g.w1) {
            for (w, gw) in row.iter_mut().zip(grow) {
                *w -= lr * *gw;
            }
        }
        for (b, gb) in self.b1.iter_mut().zip(&g.b1) {
            *b -= lr * *gb;
        }
        for (row, grow) in self.w2.iter_mut().zip(&g.w2) {
            for (w, gw) in row.iter_mut().zip(grow) {
                *w -= lr * *gw;
            }
        }
        for (b, gb) in self.b2.iter_mut().zip(&g.b2) {
            *b -= lr * *gb;
        }
    }

    /// Flat parameter vector in (w1, b1, w2, b2) order.
    pub fn params_flat(&self) -> Vec<F> {
        let mut flat = Vec::new();
        for row in &self.w1 {
            flat.extend_from_slice(row);
        }
        flat.extend_from_slice(&self.b1);
        for row in &self.w2 {
            flat.extend_from_slice(row);
        }
        flat.extend_from_slice(&self.b2);
        flat
    }

    pub fn set_params_flat(&mut self, flat: &[F]) {
        let mut it = flat.iter().copied();
        for row in &mut self.w1 {
            for w in row.iter_mut() {
                *w = it.next().expect("flat vector matches architecture");
            }
        }
        for b in &mut self.b1 {
            *b = it.next().expect("flat vector matches architecture");
        }
        for row in &mut self.w2 {
            for w in row.iter_mut() {
                *w = it.next().expect("flat vector matches architecture");
            }
        }
        for b in &mut self.b2 {
            *b = it.next().expect("flat vector matches architecture");
        }
        assert!(it.next().is_none(), "flat vector matches architecture");
    }
}

struct Gradients<F> {
    w1: Vec<Vec<F>>,
    b1: Vec<F>,
    w2: Vec<Vec<F>>,
    b2: Vec<F>,
}

impl<F: Real> Gradients<F> {
    fn zeros(d: usize, h: usize) -> Gradients<F> {
        Gradients {
            w1: vec![vec![F::zero(); d]; h],
            b1: vec![F::zero(); h],
            w2: vec![vec![F::zero(); h]; 2],
            b2: vec![F::zero(); 2],
        }
    }

    fn flatten(&self) -> Vec<F> {
        let mut flat = Vec::new();
        for row in &self.w1 {
            flat.extend_from_slice(row);
        }
        flat.extend_from_slice(&self.b1);
        for row in &self.w2 {
            flat.extend_from_slice(row);
        }
        flat.extend_from_slice(&self.b2);
        flat
    }
}

fn softmax<F: Real>(logits: [F; 2]) -> [F; 2] {
    let max = logits[0].max(logits[1]);
    let e0 = (logits[0] - max).exp();
    let e1 = (logits[1] - max).exp();
    let sum = e0 + e1;
    [e0 / sum, e1 / sum]
}

fn log_sum_exp<F: Real>(logits: [F; 2]) -> F {
    let max = logits[0].max(logits[1]);
    max + ((logits[0] - max).exp() + (logits[1] - max).exp()).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use QualityLabel::*;

    fn toy() -> (Vec<Vec<f64>>, Vec<QualityLabel>) {
        let rows = vec![
            vec![-1.0, -1.2],
            vec![-0.8, -1.0],
            vec![1.0, 1.1],
            vec![0.9, 1.3],
        ];
        let labels = vec![Promoted, Promoted, Discouraged, Discouraged];
        (rows, labels)
    }

    #[test]
    fn training_reduces_loss_and_separates_classes() {
        let (rows, labels) = toy();
        let mut nn: NeuralNet<f64> = NeuralNet::init(2, 8, 7);
        let before = nn.loss(&rows, &labels);
        nn.train(
            &rows,
            &labels,
            &NnParams {
                hidden: 8,
                learning_rate: 0.5,
                epochs: 200,
                batch_size: 4,
            },
            7,
        );
        let after = nn.loss(&rows, &labels);
        assert!(after < before);
        for (row, label) in rows.iter().zip(&labels) {
            let scores = nn.predict_scores(row).unwrap();
            let predicted = if scores[0] >= scores[1] { Promoted } else { Discouraged };
            assert_eq!(predicted, *label);
        }
    }

    #[test]
    fn analytic_gradient_matches_central_differences() {
        let (rows, labels) = toy();
        let mut nn: NeuralNet<f64> = NeuralNet::init(2, 3, 13);
        let (_, analytic) = nn.loss_and_gradients(&rows, &labels);
        let params = nn.params_flat();
        let h = 1e-5;
        for (idx, analytic_g) in analytic.iter().enumerate() {
            let mut plus = params.clone();
            plus[idx] += h;
            nn.set_params_flat(&plus);
            let loss_plus = nn.loss(&rows, &labels);
            let mut minus = params.clone();
            minus[idx] -= h;
            nn.set_params_flat(&minus);
            let loss_minus = nn.loss(&rows, &labels);
            nn.set_params_flat(&params);
            let numeric = (loss_plus - loss_minus) / (2.0 * h);
            let denom = analytic_g.abs().max(numeric.abs()).max(1e-8);
            assert!(
                (analytic_g - numeric).abs() / denom < 1e-4,
                "param {idx}: analytic {analytic_g} vs numeric {numeric}"
            );
        }
    }

    #[test]
    fn scores_sum_to_one() {
        let nn: NeuralNet<f64> = NeuralNet::init(3, 4, 99);
        let scores = nn.predict_scores(&[0.3, -0.2, 0.8]).unwrap();
        assert!((scores[0] + scores[1] - 1.0).abs() < 1e-12);
        assert!(nn.predict_scores(&[1.0]).is_err());
    }

    #[test]
    fn fixed_seed_reproduces_training() {
        let (rows, labels) = toy();
        let params = NnParams {
            hidden: 4,
            learning_rate: 0.1,
            epochs: 20,
            batch_size: 2,
        };
        let mut a: NeuralNet<f64> = NeuralNet::init(2, 4, 5);
        a.train(&rows, &labels, &params, 5);
        let mut b: NeuralNet<f64> = NeuralNet::init(2, 4, 5);
        b.train(&rows, &labels, &params, 5);
        assert_eq!(a, b);
    }
}
