//! Feature ranking and the five-classifier training/evaluation harness.

pub mod cv;
pub mod dataset;
pub mod forest;
pub mod gnb;
pub mod grid;
pub mod info_gain;
pub mod knn;
pub mod model_io;
pub mod nn;
pub mod stump;
pub mod tree;

pub use cv::{
    cross_validate, evaluate, stratified_folds, ClassMetrics, DatasetVariant, EvalOutcome,
    EvalReport, FoldMetrics,
};
pub use dataset::{
    all_feature_names, feature_value, row_for_features, LabeledDataset, NaPolicy, SpEncoding,
    CANONICAL_METRICS, TOP4,
};
pub use forest::{RandomForest, RandomForestParams};
pub use gnb::{GaussianNb, GnbParams};
pub use grid::{default_grid, grid_search, GridSearchResult, ParamGrid, ParamValue};
pub use info_gain::{information_gain, rank_by_info_gain, FeatureRanking, DEFAULT_BINS};
pub use knn::{KNearest, KnnParams};
pub use nn::{NeuralNet, NnParams};
pub use stump::rank_by_stump;
pub use tree::{DecisionTree, DecisionTreeParams};

use std::fmt;
use std::str::FromStr;

use crate::corpus::QualityLabel;
use crate::error::{Error, Result};
use crate::num::{count, Real};

/// The five supervised model families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ModelKind {
    DecisionTree,
    RandomForest,
    KNearest,
    GaussianNB,
    NeuralNet,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::DecisionTree,
        ModelKind::RandomForest,
        ModelKind::KNearest,
        ModelKind::GaussianNB,
        ModelKind::NeuralNet,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::DecisionTree => "DecisionTree",
            ModelKind::RandomForest => "RandomForest",
            ModelKind::KNearest => "KNearest",
            ModelKind::GaussianNB => "GaussianNB",
            ModelKind::NeuralNet => "NeuralNet",
        }
    }

    /// KNN and the network train on standardized features.
    pub fn standardizes(&self) -> bool {
        matches!(self, ModelKind::KNearest | ModelKind::NeuralNet)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "decisiontree" | "dt" | "tree" => Ok(ModelKind::DecisionTree),
            "randomforest" | "rf" | "forest" => Ok(ModelKind::RandomForest),
            "knearest" | "knn" => Ok(ModelKind::KNearest),
            "gaussiannb" | "gnb" => Ok(ModelKind::GaussianNB),
            "neuralnet" | "nn" | "ann" => Ok(ModelKind::NeuralNet),
            other => Err(format!("unknown model kind {other:?}")),
        }
    }
}

/// Kind-specific hyperparameters.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelParams<F> {
    Tree(DecisionTreeParams),
    Forest(RandomForestParams),
    Knn(KnnParams),
    Gnb(GnbParams<F>),
    Nn(NnParams<F>),
}

impl<F: Real> ModelParams<F> {
    pub fn defaults(kind: ModelKind) -> ModelParams<F> {
        match kind {
            ModelKind::DecisionTree => ModelParams::Tree(DecisionTreeParams::default()),
            ModelKind::RandomForest => ModelParams::Forest(RandomForestParams::default()),
            ModelKind::KNearest => ModelParams::Knn(KnnParams::default()),
            ModelKind::GaussianNB => ModelParams::Gnb(GnbParams::default()),
            ModelKind::NeuralNet => ModelParams::Nn(NnParams::default()),
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            ModelParams::Tree(_) => ModelKind::DecisionTree,
            ModelParams::Forest(_) => ModelKind::RandomForest,
            ModelParams::Knn(_) => ModelKind::KNearest,
            ModelParams::Gnb(_) => ModelKind::GaussianNB,
            ModelParams::Nn(_) => ModelKind::NeuralNet,
        }
    }
}

/// A reproducible model configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec<F> {
    pub kind: ModelKind,
    pub params: ModelParams<F>,
    pub seed: u64,
}

impl<F: Real> ModelSpec<F> {
    pub fn with_defaults(kind: ModelKind, seed: u64) -> ModelSpec<F> {
        ModelSpec {
            kind,
            params: ModelParams::defaults(kind),
            seed,
        }
    }

    /// Compact `key=value` rendering of the hyperparameters.
    pub fn describe_params(&self) -> String {
        fn depth(d: Option<usize>) -> String {
            d.map(|v| v.to_string()).unwrap_or_else(|| "unlimited".to_string())
        }
        match &self.params {
            ModelParams::Tree(p) => format!(
                "max_depth={};min_samples_split={}",
                depth(p.max_depth),
                p.min_samples_split
            ),
            ModelParams::Forest(p) => format!(
                "n_trees={};max_depth={};min_samples_split={}",
                p.n_trees,
                depth(p.max_depth),
                p.min_samples_split
            ),
            ModelParams::Knn(p) => format!("k={}", p.k),
            ModelParams::Gnb(p) => format!("var_smoothing={}", p.var_smoothing),
            ModelParams::Nn(p) => format!(
                "hidden={};learning_rate={};epochs={};batch_size={}",
                p.hidden, p.learning_rate, p.epochs, p.batch_size
            ),
        }
    }
}

/// Feature standardization fit on training rows only. Constant features
/// keep a unit scale.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer<F> {
    pub means: Vec<F>,
    pub stds: Vec<F>,
}

impl<F: Real> Standardizer<F> {
    pub fn fit(rows: &[Vec<F>]) -> Standardizer<F> {
        let d = rows.first().map(|r| r.len()).unwrap_or(0);
        let n = count::<F>(rows.len().max(1));
        let mut means = vec![F::zero(); d];
        let mut stds = vec![F::one(); d];
        for f in 0..d {
            let mean = rows.iter().map(|r| r[f]).sum::<F>() / n;
            let variance = rows.iter().map(|r| (r[f] - mean) * (r[f] - mean)).sum::<F>() / n;
            means[f] = mean;
            let std = variance.sqrt();
            stds[f] = if std > F::zero() { std } else { F::one() };
        }
        Standardizer { means, stds }
    }

    pub fn transform(&self, row: &[F]) -> Vec<F> {
        row.iter()
            .zip(self.means.iter().zip(&self.stds))
            .map(|(x, (m, s))| (*x - *m) / *s)
            .collect()
    }

    pub fn transform_all(&self, rows: &[Vec<F>]) -> Vec<Vec<F>> {
        rows.iter().map(|r| self.transform(r)).collect()
    }
}

/// A fitted model plus the preprocessing it needs at prediction time.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel<F> {
    pub feature_names: Vec<String>,
    pub spec: ModelSpec<F>,
    pub standardizer: Option<Standardizer<F>>,
    pub inner: ModelInner<F>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelInner<F> {
    Tree(DecisionTree<F>),
    Forest(RandomForest<F>),
    Knn(KNearest<F>),
    Gnb(GaussianNb<F>),
    Nn(NeuralNet<F>),
}

/// Label plus class scores; scores are [promoted, discouraged] and sum to
/// one for every model family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction<F> {
    pub label: QualityLabel,
    pub scores: [F; 2],
}

/// Train one model on a labeled dataset. Deterministic for a fixed seed.
pub fn train<F: Real>(spec: &ModelSpec<F>, ds: &LabeledDataset<F>) -> Result<TrainedModel<F>> {
    if ds.n_rows() == 0 {
        return Err(Error::EmptyInput);
    }
    let (promoted, discouraged) = ds.class_counts();
    if promoted == 0 || discouraged == 0 {
        return Err(Error::SingleClassTraining);
    }

    let standardizer = if spec.kind.standardizes() {
        Some(Standardizer::fit(&ds.rows))
    } else {
        None
    };
    let rows: Vec<Vec<F>> = match &standardizer {
        Some(s) => s.transform_all(&ds.rows),
        None => ds.rows.clone(),
    };

    let inner = match &spec.params {
        ModelParams::Tree(p) => ModelInner::Tree(DecisionTree::fit(&rows, &ds.labels, p)?),
        ModelParams::Forest(p) => {
            ModelInner::Forest(RandomForest::fit(&rows, &ds.labels, p, spec.seed)?)
        }
        ModelParams::Knn(p) => ModelInner::Knn(KNearest::fit(&rows, &ds.labels, p)?),
        ModelParams::Gnb(p) => ModelInner::Gnb(GaussianNb::fit(&rows, &ds.labels, p)?),
        ModelParams::Nn(p) => {
            let mut nn = NeuralNet::init(ds.n_features(), p.hidden, spec.seed);
            nn.train(&rows, &ds.labels, p, spec.seed);
            ModelInner::Nn(nn)
        }
    };
    Ok(TrainedModel {
        feature_names: ds.feature_names.clone(),
        spec: spec.clone(),
        standardizer,
        inner,
    })
}

impl<F: Real> TrainedModel<F> {
    /// Predict one raw (unstandardized) feature row. Argmax ties go to
    /// Promoted.
    pub fn predict(&self, row: &[F]) -> Result<Prediction<F>> {
        if row.len() != self.feature_names.len() {
            return Err(Error::DimensionMismatch {
                expected: self.feature_names.len(),
                got: row.len(),
            });
        }
        let transformed;
        let row = match &self.standardizer {
            Some(s) => {
                transformed = s.transform(row);
                transformed.as_slice()
            }
            None => row,
        };
        let scores = match &self.inner {
            ModelInner::Tree(m) => m.predict_scores(row)?,
            ModelInner::Forest(m) => m.predict_scores(row)?,
            ModelInner::Knn(m) => m.predict_scores(row)?,
            ModelInner::Gnb(m) => m.predict_scores(row)?,
            ModelInner::Nn(m) => m.predict_scores(row)?,
        };
        let label = if scores[0] >= scores[1] {
            QualityLabel::Promoted
        } else {
            QualityLabel::Discouraged
        };
        Ok(Prediction { label, scores })
    }

    /// Error unless the given column names are exactly the model's.
    pub fn check_feature_names(&self, names: &[String]) -> Result<()> {
        if self.feature_names != names {
            return Err(Error::FeatureSetMismatch {
                model: self.feature_names.join(","),
                input: names.join(","),
            });
        }
        Ok(())
    }
}
