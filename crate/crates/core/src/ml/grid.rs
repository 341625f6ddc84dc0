//! Cross-validated grid search over hyperparameter combinations,
//! maximizing accuracy. Ties resolve to the earlier grid combination.

use super::cv::{cross_validate, DatasetVariant, EvalReport};
use super::dataset::LabeledDataset;
use super::{ModelKind, ModelParams, ModelSpec};
use crate::error::{Error, Result};
use crate::num::{real, Real};

/// One grid cell value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamValue {
    Int(i64),
    Float(f64),
    /// Unlimited depth.
    Unlimited,
}

impl std::fmt::Display for ParamValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Float(v) => write!(f, "{v}"),
            ParamValue::Unlimited => f.write_str("unlimited"),
        }
    }
}

/// Ordered parameter grid: the first entry varies slowest in the
/// Cartesian product.
pub type ParamGrid = Vec<(String, Vec<ParamValue>)>;

/// The documented default grid of each model family.
pub fn default_grid(kind: ModelKind) -> ParamGrid {
    use ParamValue::*;
    match kind {
        ModelKind::DecisionTree => vec![
            (
                "max_depth".to_string(),
                vec![Int(4), Int(8), Int(16), Unlimited],
            ),
            ("min_samples_split".to_string(), vec![Int(2), Int(10)]),
        ],
        ModelKind::RandomForest => vec![
            ("n_trees".to_string(), vec![Int(50), Int(100)]),
            ("max_depth".to_string(), vec![Int(8), Unlimited]),
        ],
        ModelKind::KNearest => vec![(
            "k".to_string(),
            vec![Int(3), Int(5), Int(11), Int(21)],
        )],
        ModelKind::GaussianNB => vec![(
            "var_smoothing".to_string(),
            vec![Float(1e-9), Float(1e-6)],
        )],
        ModelKind::NeuralNet => vec![
            ("hidden".to_string(), vec![Int(8), Int(16), Int(32)]),
            (
                "learning_rate".to_string(),
                vec![Float(0.01), Float(0.001)],
            ),
        ],
    }
}

fn invalid(name: &str, value: ParamValue, reason: &str) -> Error {
    Error::InvalidParam {
        name: name.to_string(),
        value: value.to_string(),
        reason: reason.to_string(),
    }
}

fn positive_int(name: &str, value: ParamValue, min: i64) -> Result<usize> {
    match value {
        ParamValue::Int(v) if v >= min => Ok(v as usize),
        _ => Err(invalid(name, value, &format!("expected an integer >= {min}"))),
    }
}

fn positive_float(name: &str, value: ParamValue) -> Result<f64> {
    match value {
        ParamValue::Float(v) if v > 0.0 => Ok(v),
        ParamValue::Int(v) if v > 0 => Ok(v as f64),
        _ => Err(invalid(name, value, "expected a value > 0")),
    }
}

fn depth(name: &str, value: ParamValue) -> Result<Option<usize>> {
    match value {
        ParamValue::Unlimited => Ok(None),
        ParamValue::Int(v) if v >= 1 => Ok(Some(v as usize)),
        _ => Err(invalid(name, value, "expected an integer >= 1 or unlimited")),
    }
}

/// Build a model spec from one grid assignment, validating bounds.
pub fn spec_from_assignment<F: Real>(
    kind: ModelKind,
    assignment: &[(String, ParamValue)],
    seed: u64,
) -> Result<ModelSpec<F>> {
    let mut params = ModelParams::<F>::defaults(kind);
    for (name, value) in assignment {
        match (&mut params, name.as_str()) {
            (ModelParams::Tree(p), "max_depth") => p.max_depth = depth(name, *value)?,
            (ModelParams::Tree(p), "min_samples_split") => {
                p.min_samples_split = positive_int(name, *value, 2)?
            }
            (ModelParams::Forest(p), "n_trees") => p.n_trees = positive_int(name, *value, 1)?,
            (ModelParams::Forest(p), "max_depth") => p.max_depth = depth(name, *value)?,
            (ModelParams::Forest(p), "min_samples_split") => {
                p.min_samples_split = positive_int(name, *value, 2)?
            }
            (ModelParams::Knn(p), "k") => p.k = positive_int(name, *value, 1)?,
            (ModelParams::Gnb(p), "var_smoothing") => {
                p.var_smoothing = real(positive_float(name, *value)?)
            }
            (ModelParams::Nn(p), "hidden") => p.hidden = positive_int(name, *value, 1)?,
            (ModelParams::Nn(p), "learning_rate") => {
                p.learning_rate = real(positive_float(name, *value)?)
            }
            (ModelParams::Nn(p), "epochs") => p.epochs = positive_int(name, *value, 1)?,
            (ModelParams::Nn(p), "batch_size") => p.batch_size = positive_int(name, *value, 1)?,
            _ => {
                return Err(invalid(
                    name,
                    *value,
                    &format!("not a {kind} hyperparameter"),
                ))
            }
        }
    }
    Ok(ModelSpec { kind, params, seed })
}

/// Search outcome: the winning spec with its report, plus the accuracy of
/// every evaluated combination in grid order.
#[derive(Debug, Clone)]
pub struct GridSearchResult<F> {
    pub best: ModelSpec<F>,
    pub best_report: EvalReport<F>,
    pub scores: Vec<(ModelSpec<F>, F)>,
}

/// Evaluate the full Cartesian product of the grid by k-fold
/// cross-validation and keep the accuracy maximizer. Every combination
/// sees the same folds, so a fixed seed reproduces the selection.
pub fn grid_search<F: Real>(
    kind: ModelKind,
    grid: &ParamGrid,
    ds: &LabeledDataset<F>,
    k: usize,
    seed: u64,
    variant: DatasetVariant,
    feature_set: &str,
) -> Result<GridSearchResult<F>> {
    if grid.is_empty() || grid.iter().any(|(_, values)| values.is_empty()) {
        return Err(Error::EmptyGrid);
    }
    let mut best: Option<(ModelSpec<F>, EvalReport<F>)> = None;
    let mut scores = Vec::new();
    for assignment in cartesian(grid) {
        let spec = spec_from_assignment(kind, &assignment, seed)?;
        let report = cross_validate(&spec, ds, k, seed, variant, feature_set)?;
        scores.push((spec.clone(), report.accuracy));
        let improves = match &best {
            None => true,
            Some((_, current)) => report.accuracy > current.accuracy,
        };
        if improves {
            best = Some((spec, report));
        }
    }
    let (best, best_report) = best.expect("grid verified non-empty");
    Ok(GridSearchResult {
        best,
        best_report,
        scores,
    })
}

/// Cartesian product in grid order; the first parameter varies slowest.
fn cartesian(grid: &ParamGrid) -> Vec<Vec<(String, ParamValue)>> {
    let mut combos: Vec<Vec<(String, ParamValue)>> = vec![Vec::new()];
    for (name, values) in grid {
        let mut next = Vec::with_capacity(combos.len() * values.len());
        for combo in &combos {
            for value in values {
                let mut extended = combo.clone();
                extended.push((name.clone(), *value));
                next.push(extended);
            }
        }
        combos = next;
    }
    combos
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::QualityLabel::{self, *};

    fn xor_dataset() -> LabeledDataset<f64> {
        // xor over unbalanced quadrants: a depth-1 stump tops out at about
        // 0.67, a depth-2 tree separates the quadrants exactly
        let quadrants: [((f64, f64), QualityLabel, usize); 4] = [
            ((0.0, 0.0), Discouraged, 40),
            ((0.0, 1.0), Promoted, 20),
            ((1.0, 0.0), Promoted, 20),
            ((1.0, 1.0), Discouraged, 10),
        ];
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for ((a, b), label, copies) in quadrants {
            for _ in 0..copies {
                rows.push(vec![a, b]);
                labels.push(label);
            }
        }
        LabeledDataset::new(vec!["a".to_string(), "b".to_string()], rows, labels).unwrap()
    }

    #[test]
    fn singleton_grid_returns_that_spec() {
        let ds = xor_dataset();
        let grid: ParamGrid = vec![("k".to_string(), vec![ParamValue::Int(3)])];
        let result = grid_search(
            ModelKind::KNearest,
            &grid,
            &ds,
            4,
            9,
            DatasetVariant::Balanced,
            "all",
        )
        .unwrap();
        assert_eq!(result.scores.len(), 1);
        match result.best.params {
            ModelParams::Knn(ref p) => assert_eq!(p.k, 3),
            _ => panic!("wrong params"),
        }
    }

    #[test]
    fn deeper_tree_wins_on_xor_data() {
        let ds = xor_dataset();
        let grid: ParamGrid = vec![(
            "max_depth".to_string(),
            vec![ParamValue::Int(1), ParamValue::Unlimited],
        )];
        let result = grid_search(
            ModelKind::DecisionTree,
            &grid,
            &ds,
            4,
            21,
            DatasetVariant::Balanced,
            "all",
        )
        .unwrap();
        match result.best.params {
            ModelParams::Tree(ref p) => assert_eq!(p.max_depth, None),
            _ => panic!("wrong params"),
        }
        assert!(result.best_report.accuracy > 0.9);
        assert!(result.scores[0].1 <= 0.80);
    }

    #[test]
    fn search_is_reproducible_for_a_fixed_seed() {
        let ds = xor_dataset();
        let grid = default_grid(ModelKind::DecisionTree);
        let a = grid_search(
            ModelKind::DecisionTree,
            &grid,
            &ds,
            4,
            5,
            DatasetVariant::Balanced,
            "all",
        )
        .unwrap();
        let b = grid_search(
            ModelKind::DecisionTree,
            &grid,
            &ds,
            4,
            5,
            DatasetVariant::Balanced,
            "all",
        )
        .unwrap();
        assert_eq!(a.best, b.best);
        assert_eq!(a.best_report.accuracy, b.best_report.accuracy);
    }

    #[test]
    fn empty_grid_is_an_error() {
        let ds = xor_dataset();
        assert!(matches!(
            grid_search(
                ModelKind::KNearest,
                &Vec::new(),
                &ds,
                4,
                1,
                DatasetVariant::Balanced,
                "all"
            ),
            Err(Error::EmptyGrid)
        ));
    }

    #[test]
    fn out_of_bounds_parameters_are_rejected() {
        assert!(spec_from_assignment::<f64>(
            ModelKind::KNearest,
            &[("k".to_string(), ParamValue::Int(0))],
            1
        )
        .is_err());
        assert!(spec_from_assignment::<f64>(
            ModelKind::DecisionTree,
            &[("min_samples_split".to_string(), ParamValue::Int(1))],
            1
        )
        .is_err());
        assert!(spec_from_assignment::<f64>(
            ModelKind::GaussianNB,
            &[("var_smoothing".to_string(), ParamValue::Float(-1.0))],
            1
        )
        .is_err());
        assert!(spec_from_assignment::<f64>(
            ModelKind::GaussianNB,
            &[("k".to_string(), ParamValue::Int(3))],
            1
        )
        .is_err());
    }

    #[test]
    fn cartesian_order_has_first_parameter_slowest() {
        let grid: ParamGrid = vec![
            ("a".to_string(), vec![ParamValue::Int(1), ParamValue::Int(2)]),
            ("b".to_string(), vec![ParamValue::Int(3), ParamValue::Int(4)]),
        ];
        let combos = cartesian(&grid);
        assert_eq!(combos.len(), 4);
        assert_eq!(combos[0][0].1, ParamValue::Int(1));
        assert_eq!(combos[0][1].1, ParamValue::Int(3));
        assert_eq!(combos[1][1].1, ParamValue::Int(4));
        assert_eq!(combos[2][0].1, ParamValue::Int(2));
    }
}
