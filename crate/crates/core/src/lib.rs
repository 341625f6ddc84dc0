//! Corpus analytics for Q&A question quality.
//!
//! The toolkit ingests question corpora, computes ten objective quality
//! metrics per question, statistically compares up-voted ("promoted")
//! against down-voted ("discouraged") questions, ranks the metrics as
//! predictive features, and trains classifiers that predict a question's
//! vote polarity from its content alone.
//!
//! Numeric code is generic over the scalar type via [`num::Real`]
//! (`f32` or `f64`); the `*64` aliases below pin the default `f64`
//! precision used by the command-line pipeline.

pub mod codeparse;
pub mod corpus;
pub mod error;
pub mod metrics;
pub mod ml;
pub mod num;
pub mod persist;
pub mod report;
pub mod stats;

pub use error::{Error, Result};
pub use num::Real;

/// Default-precision metric vector.
pub type MetricVector64 = metrics::MetricVector<f64>;
/// Default-precision group comparison.
pub type ComparisonResult64 = stats::ComparisonResult<f64>;
/// Default-precision feature matrix.
pub type LabeledDataset64 = ml::LabeledDataset<f64>;
/// Default-precision model configuration.
pub type ModelSpec64 = ml::ModelSpec<f64>;
/// Default-precision trained model.
pub type TrainedModel64 = ml::TrainedModel<f64>;
/// Default-precision evaluation report.
pub type EvalReport64 = ml::EvalReport<f64>;
/// Default-precision readability weight vector.
pub type ReadabilityWeights64 = codeparse::ReadabilityWeights<f64>;
