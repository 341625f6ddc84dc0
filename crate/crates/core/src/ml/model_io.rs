//! Versioned model-file format.
//!
//! Layout (UTF-8, LF):
//!
//! ```text
//! qscope-model v1
//! kind=DecisionTree
//! seed=42
//! features=te,tr,me,tcr
//! params=max_depth=8;min_samples_split=2
//! standardizer_means=0.1,0.2   (only for standardizing models)
//! standardizer_stds=1.0,2.0
//! [data]
//! <kind-specific lines, documented per writer below>
//! ```
//!
//! Floats are written with the shortest round-trip representation, so a
//! save/load cycle reproduces the model exactly.

use std::fmt::Write as _;
use std::path::Path;

use super::forest::{RandomForest, RandomForestParams};
use super::gnb::{GaussianNb, GnbParams};
use super::knn::KNearest;
use super::nn::{NeuralNet, NnParams};
use super::tree::{DecisionTree, DecisionTreeParams, TreeNode};
use super::{KnnParams, ModelInner, ModelKind, ModelParams, ModelSpec, Standardizer, TrainedModel};
use crate::corpus::QualityLabel;
use crate::error::{Error, Result};
use crate::num::{real, Real};

const MAGIC: &str = "qscope-model v1";

pub fn save_model<F: Real>(model: &TrainedModel<F>, path: &Path) -> Result<()> {
    std::fs::write(path, render_model(model)).map_err(|e| Error::io(path, e))
}

pub fn load_model<F: Real>(path: &Path) -> Result<TrainedModel<F>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_model(&text)
}

pub fn render_model<F: Real>(model: &TrainedModel<F>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(out, "kind={}", model.spec.kind);
    let _ = writeln!(out, "seed={}", model.spec.seed);
    let _ = writeln!(out, "features={}", model.feature_names.join(","));
    let _ = writeln!(out, "params={}", model.spec.describe_params());
    if let Some(s) = &model.standardizer {
        let _ = writeln!(out, "standardizer_means={}", join_floats(&s.means));
        let _ = writeln!(out, "standardizer_stds={}", join_floats(&s.stds));
    }
    let _ = writeln!(out, "[data]");
    match &model.inner {
        // node,<idx>,split,<feature>,<threshold>,<left>,<right>
        // node,<idx>,leaf,<promoted>,<discouraged>
        ModelInner::Tree(tree) => write_tree(&mut out, tree, None),
        ModelInner::Forest(forest) => {
            for (t, tree) in forest.trees().iter().enumerate() {
                write_tree(&mut out, tree, Some(t));
            }
        }
        // row,<label>,<v1>,...
        ModelInner::Knn(knn) => {
            for (row, label) in knn.rows.iter().zip(&knn.labels) {
                let _ = writeln!(out, "row,{},{}", label, join_floats(row));
            }
        }
        // prior,<p>,<d> then mean,<class>,... and var,<class>,...
        ModelInner::Gnb(gnb) => {
            let _ = writeln!(out, "prior,{},{}", gnb.priors[0], gnb.priors[1]);
            for class in 0..2 {
                let _ = writeln!(out, "mean,{},{}", class, join_floats(&gnb.means[class]));
                let _ = writeln!(out, "var,{},{}", class, join_floats(&gnb.variances[class]));
            }
        }
        // dims,<input>,<hidden> then w1,<j>,...  b1,...  w2,<k>,...  b2,...
        ModelInner::Nn(nn) => {
            let _ = writeln!(out, "dims,{},{}", nn.n_features(), nn.hidden_units());
            for (j, row) in nn.w1.iter().enumerate() {
                let _ = writeln!(out, "w1,{},{}", j, join_floats(row));
            }
            let _ = writeln!(out, "b1,{}", join_floats(&nn.b1));
            for (k, row) in nn.w2.iter().enumerate() {
                let _ = writeln!(out, "w2,{},{}", k, join_floats(row));
            }
            let _ = writeln!(out, "b2,{}", join_floats(&nn.b2));
        }
    }
    out
}

fn write_tree<F: Real>(out: &mut String, tree: &DecisionTree<F>, forest_index: Option<usize>) {
    let prefix = match forest_index {
        Some(t) => format!("tree,{t},"),
        None => String::new(),
    };
    for (idx, node) in tree.nodes().iter().enumerate() {
        match node {
            TreeNode::Split {
                feature,
                threshold,
                left,
                right,
            } => {
                let _ = writeln!(
                    out,
                    "{prefix}node,{idx},split,{feature},{threshold},{left},{right}"
                );
            }
            TreeNode::Leaf { counts } => {
                let _ = writeln!(out, "{prefix}node,{idx},leaf,{},{}", counts[0], counts[1]);
            }
        }
    }
}

fn join_floats<F: Real>(values: &[F]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn parse_model<F: Real>(text: &str) -> Result<TrainedModel<F>> {
    let mut lines = text.lines();
    if lines.next() != Some(MAGIC) {
        return Err(Error::ModelFormat(format!("expected header {MAGIC:?}")));
    }
    let mut kind: Option<ModelKind> = None;
    let mut seed = 0u64;
    let mut features: Vec<String> = Vec::new();
    let mut params_line = String::new();
    let mut means: Option<Vec<F>> = None;
    let mut stds: Option<Vec<F>> = None;
    for line in lines.by_ref() {
        if line == "[data]" {
            break;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::ModelFormat(format!("bad header line {line:?}")))?;
        match key {
            "kind" => {
                kind = Some(value.parse().map_err(Error::ModelFormat)?);
            }
            "seed" => {
                seed = value
                    .parse()
                    .map_err(|e| Error::ModelFormat(format!("seed: {e}")))?;
            }
            "features" => {
                features = value.split(',').map(str::to_string).collect();
            }
            "params" => params_line = value.to_string(),
            "standardizer_means" => means = Some(parse_floats(value)?),
            "standardizer_stds" => stds = Some(parse_floats(value)?),
            other => return Err(Error::ModelFormat(format!("unknown header key {other:?}"))),
        }
    }
    let kind = kind.ok_or_else(|| Error::ModelFormat("missing kind".to_string()))?;
    let params = parse_params::<F>(kind, &params_line)?;
    let data: Vec<&str> = lines.filter(|l| !l.trim().is_empty()).collect();
    let n_features = features.len();
    let inner = match kind {
        ModelKind::DecisionTree => ModelInner::Tree(parse_tree(&data, n_features)?),
        ModelKind::RandomForest => ModelInner::Forest(parse_forest(&data, n_features)?),
        ModelKind::KNearest => ModelInner::Knn(parse_knn(&data, &params)?),
        ModelKind::GaussianNB => ModelInner::Gnb(parse_gnb(&data)?),
        ModelKind::NeuralNet => ModelInner::Nn(parse_nn(&data)?),
    };
    let standardizer = match (means, stds) {
        (Some(means), Some(stds)) => Some(Standardizer { means, stds }),
        (None, None) => None,
        _ => {
            return Err(Error::ModelFormat(
                "standardizer means/stds must appear together".to_string(),
            ))
        }
    };
    Ok(TrainedModel {
        feature_names: features,
        spec: ModelSpec { kind, params, seed },
        standardizer,
        inner,
    })
}

fn parse_floats<F: Real>(s: &str) -> Result<Vec<F>> {
    s.split(',')
        .map(|v| {
            v.parse::<f64>()
                .map(real::<F>)
                .map_err(|e| Error::ModelFormat(format!("bad float {v:?}: {e}")))
        })
        .collect()
}

fn parse_params<F: Real>(kind: ModelKind, line: &str) -> Result<ModelParams<F>> {
    let mut map = std::collections::BTreeMap::new();
    for part in line.split(';').filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::ModelFormat(format!("bad params fragment {part:?}")))?;
        map.insert(k.to_string(), v.to_string());
    }
    let get = |key: &str| -> Result<&String> {
        map.get(key)
            .ok_or_else(|| Error::ModelFormat(format!("missing param {key:?}")))
    };
    let parse_depth = |v: &str| -> Result<Option<usize>> {
        if v == "unlimited" {
            Ok(None)
        } else {
            v.parse::<usize>()
                .map(Some)
                .map_err(|e| Error::ModelFormat(format!("max_depth: {e}")))
        }
    };
    let parse_usize = |v: &str| -> Result<usize> {
        v.parse::<usize>()
            .map_err(|e| Error::ModelFormat(format!("integer param: {e}")))
    };
    let parse_real = |v: &str| -> Result<F> {
        v.parse::<f64>()
            .map(real::<F>)
            .map_err(|e| Error::ModelFormat(format!("float param: {e}")))
    };
    Ok(match kind {
        ModelKind::DecisionTree => ModelParams::Tree(DecisionTreeParams {
            max_depth: parse_depth(get("max_depth")?)?,
            min_samples_split: parse_usize(get("min_samples_split")?)?,
        }),
        ModelKind::RandomForest => ModelParams::Forest(RandomForestParams {
            n_trees: parse_usize(get("n_trees")?)?,
            max_depth: parse_depth(get("max_depth")?)?,
            min_samples_split: parse_usize(get("min_samples_split")?)?,
        }),
        ModelKind::KNearest => ModelParams::Knn(KnnParams {
            k: parse_usize(get("k")?)?,
        }),
        ModelKind::GaussianNB => ModelParams::Gnb(GnbParams {
            var_smoothing: parse_real(get("var_smoothing")?)?,
        }),
        ModelKind::NeuralNet => ModelParams::Nn(NnParams {
            hidden: parse_usize(get("hidden")?)?,
            learning_rate: parse_real(get("learning_rate")?)?,
            epochs: parse_usize(get("epochs")?)?,
            batch_size: parse_usize(get("batch_size")?)?,
        }),
    })
}

fn parse_tree_nodes<F: Real>(lines: &[&str]) -> Result<Vec<TreeNode<F>>> {
    let mut nodes: Vec<(usize, TreeNode<F>)> = Vec::with_capacity(lines.len());
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() < 4 || fields[0] != "node" {
            return Err(Error::ModelFormat(format!("bad tree line {line:?}")));
        }
        let idx: usize = fields[1]
            .parse()
            .map_err(|e| Error::ModelFormat(format!("node index: {e}")))?;
        let node = match fields[2] {
            "split" if fields.len() == 7 => TreeNode::Split {
                feature: fields[3]
                    .parse()
                    .map_err(|e| Error::ModelFormat(format!("feature: {e}")))?,
                threshold: fields[4]
                    .parse::<f64>()
                    .map(real::<F>)
                    .map_err(|e| Error::ModelFormat(format!("threshold: {e}")))?,
                left: fields[5]
                    .parse()
                    .map_err(|e| Error::ModelFormat(format!("left: {e}")))?,
                right: fields[6]
                    .parse()
                    .map_err(|e| Error::ModelFormat(format!("right: {e}")))?,
            },
            "leaf" if fields.len() == 5 => TreeNode::Leaf {
                counts: [
                    fields[3]
                        .parse()
                        .map_err(|e| Error::ModelFormat(format!("count: {e}")))?,
                    fields[4]
                        .parse()
                        .map_err(|e| Error::ModelFormat(format!("count: {e}")))?,
                ],
            },
            other => return Err(Error::ModelFormat(format!("bad node type {other:?}"))),
        };
        nodes.push((idx, node));
    }
    nodes.sort_by_key(|(idx, _)| *idx);
    for (expected, (idx, _)) in nodes.iter().enumerate() {
        if *idx != expected {
            return Err(Error::ModelFormat(format!(
                "node indices are not contiguous at {idx}"
            )));
        }
    }
    Ok(nodes.into_iter().map(|(_, n)| n).collect())
}

fn parse_tree<F: Real>(lines: &[&str], n_features: usize) -> Result<DecisionTree<F>> {
    Ok(DecisionTree::from_parts(parse_tree_nodes(lines)?, n_features))
}

fn parse_forest<F: Real>(lines: &[&str], n_features: usize) -> Result<RandomForest<F>> {
    let mut per_tree: Vec<Vec<&str>> = Vec::new();
    for line in lines {
        let rest = line
            .strip_prefix("tree,")
            .ok_or_else(|| Error::ModelFormat(format!("bad forest line {line:?}")))?;
        let (t, node_line) = rest
            .split_once(',')
            .ok_or_else(|| Error::ModelFormat(format!("bad forest line {line:?}")))?;
        let t: usize = t
            .parse()
            .map_err(|e| Error::ModelFormat(format!("tree index: {e}")))?;
        if t >= per_tree.len() {
            per_tree.resize_with(t + 1, Vec::new);
        }
        per_tree[t].push(node_line);
    }
    let trees = per_tree
        .into_iter()
        .map(|lines| parse_tree(&lines, n_features))
        .collect::<Result<Vec<_>>>()?;
    if trees.is_empty() {
        return Err(Error::ModelFormat("forest has no trees".to_string()));
    }
    Ok(RandomForest::from_parts(trees, n_features))
}

fn parse_knn<F: Real>(lines: &[&str], params: &ModelParams<F>) -> Result<KNearest<F>> {
    let k = match params {
        ModelParams::Knn(p) => p.k,
        _ => return Err(Error::ModelFormat("knn params expected".to_string())),
    };
    let mut rows = Vec::with_capacity(lines.len());
    let mut labels = Vec::with_capacity(lines.len());
    for line in lines {
        let fields: Vec<&str> = line.splitn(3, ',').collect();
        if fields.len() != 3 || fields[0] != "row" {
            return Err(Error::ModelFormat(format!("bad knn line {line:?}")));
        }
        labels.push(
            fields[1]
                .parse::<QualityLabel>()
                .map_err(Error::ModelFormat)?,
        );
        rows.push(parse_floats(fields[2])?);
    }
    if rows.is_empty() {
        return Err(Error::ModelFormat("knn model has no rows".to_string()));
    }
    Ok(KNearest { rows, labels, k })
}

fn parse_gnb<F: Real>(lines: &[&str]) -> Result<GaussianNb<F>> {
    let mut priors: Option<[F; 2]> = None;
    let mut means: [Option<Vec<F>>; 2] = [None, None];
    let mut variances: [Option<Vec<F>>; 2] = [None, None];
    for line in lines {
        let fields: Vec<&str> = line.splitn(3, ',').collect();
        match fields[0] {
            "prior" if fields.len() == 3 => {
                priors = Some([
                    fields[1]
                        .parse::<f64>()
                        .map(real::<F>)
                        .map_err(|e| Error::ModelFormat(format!("prior: {e}")))?,
                    fields[2]
                        .parse::<f64>()
                        .map(real::<F>)
                        .map_err(|e| Error::ModelFormat(format!("prior: {e}")))?,
                ]);
            }
            "mean" | "var" if fields.len() == 3 => {
                let class: usize = fields[1]
                    .parse()
                    .map_err(|e| Error::ModelFormat(format!("class: {e}")))?;
                if class > 1 {
                    return Err(Error::ModelFormat(format!("bad class {class}")));
                }
                let values = parse_floats(fields[2])?;
                if fields[0] == "mean" {
                    means[class] = Some(values);
                } else {
                    variances[class] = Some(values);
                }
            }
            _ => return Err(Error::ModelFormat(format!("bad gnb line {line:?}"))),
        }
    }
    match (priors, means, variances) {
        (Some(priors), [Some(m0), Some(m1)], [Some(v0), Some(v1)]) => Ok(GaussianNb {
            priors,
            means: [m0, m1],
            variances: [v0, v1],
        }),
        _ => Err(Error::ModelFormat("incomplete gnb model".to_string())),
    }
}

fn parse_nn<F: Real>(lines: &[&str]) -> Result<NeuralNet<F>> {
    let mut dims: Option<(usize, usize)> = None;
    let mut w1_rows: Vec<(usize, Vec<F>)> = Vec::new();
    let mut w2_rows: Vec<(usize, Vec<F>)> = Vec::new();
    let mut b1: Option<Vec<F>> = None;
    let mut b2: Option<Vec<F>> = None;
    for line in lines {
        let fields: Vec<&str> = line.splitn(3, ',').collect();
        match fields[0] {
            "dims" if fields.len() == 3 => {
                dims = Some((
                    fields[1]
                        .parse()
                        .map_err(|e| Error::ModelFormat(format!("dims: {e}")))?,
                    fields[2]
                        .parse()
                        .map_err(|e| Error::ModelFormat(format!("dims: {e}")))?,
                ));
            }
            "w1" | "w2" if fields.len() == 3 => {
                let idx: usize = fields[1]
                    .parse()
                    .map_err(|e| Error::ModelFormat(format!("row index: {e}")))?;
                let values = parse_floats(fields[2])?;
                if fields[0] == "w1" {
                    w1_rows.push((idx, values));
                } else {
                    w2_rows.push((idx, values));
                }
            }
            "b1" if fields.len() >= 2 => {
                b1 = Some(parse_floats(&line["b1,".len()..])?);
            }
            "b2" if fields.len() >= 2 => {
                b2 = Some(parse_floats(&line["b2,".len()..])?);
            }
            _ => return Err(Error::ModelFormat(format!("bad nn line {line:?}"))),
        }
    }
    let (_input, hidden) =
        dims.ok_or_else(|| Error::ModelFormat("missing nn dims".to_string()))?;
    w1_rows.sort_by_key(|(i, _)| *i);
    w2_rows.sort_by_key(|(i, _)| *i);
    let w1: Vec<Vec<F>> = w1_rows.into_iter().map(|(_, v)| v).collect();
    let w2: Vec<Vec<F>> = w2_rows.into_iter().map(|(_, v)| v).collect();
    let b1 = b1.ok_or_else(|| Error::ModelFormat("missing b1".to_string()))?;
    let b2 = b2.ok_or_else(|| Error::ModelFormat("missing b2".to_string()))?;
    if w1.len() != hidden || w2.len() != 2 || b1.len() != hidden || b2.len() != 2 {
        return Err(Error::ModelFormat("nn dimensions are inconsistent".to_string()));
    }
    Ok(NeuralNet { w1, b1, w2, b2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::QualityLabel::*;
    use crate::ml::dataset::LabeledDataset;
    use crate::ml::train;

    fn dataset() -> LabeledDataset<f64> {
        let rows: Vec<Vec<f64>> = (0..24)
            .map(|i| vec![i as f64, (i % 5) as f64 - 2.0])
            .collect();
        let labels: Vec<_> = (0..24)
            .map(|i| if i < 12 { Promoted } else { Discouraged })
            .collect();
        LabeledDataset::new(vec!["x".to_string(), "y".to_string()], rows, labels).unwrap()
    }

    #[test]
    fn every_model_kind_roundtrips_exactly() {
        let ds = dataset();
        for kind in ModelKind::ALL {
            let mut spec = ModelSpec::<f64>::with_defaults(kind, 23);
            if let ModelParams::Nn(p) = &mut spec.params {
                p.epochs = 5; // keep the test fast
            }
            if let ModelParams::Forest(p) = &mut spec.params {
                p.n_trees = 5;
            }
            let model = train(&spec, &ds).unwrap();
            let text = render_model(&model);
            let back: TrainedModel<f64> = parse_model(&text).unwrap();
            assert_eq!(back, model, "{kind}");
            // and predictions agree bit for bit
            for row in &ds.rows {
                assert_eq!(
                    back.predict(row).unwrap().scores,
                    model.predict(row).unwrap().scores,
                    "{kind}"
                );
            }
        }
    }

    #[test]
    fn bad_header_is_rejected() {
        assert!(parse_model::<f64>("not a model\n").is_err());
        assert!(parse_model::<f64>("qscope-model v1\nbogus\n[data]\n").is_err());
        assert!(parse_model::<f64>("qscope-model v1\nkind=Nope\n[data]\n").is_err());
    }
}
