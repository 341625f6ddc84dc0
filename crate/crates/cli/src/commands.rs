//! Pipeline commands: ingest -> metrics -> compare -> rank -> train ->
//! predict -> report. Every command reads and writes files under the
//! configured output directory and is deterministic for a fixed seed.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};

use qscope_core::codeparse::BackendRegistry;
use qscope_core::corpus::{
    self, build_tag_table, extract_content, label, records, summarize_by_language, CorpusFormat,
    FilterSpec, Language, QualityLabel, Question,
};
use qscope_core::metrics::{compute_vector, compute_vectors, MetricContext, SentimentLexicon};
use qscope_core::ml::{
    self, all_feature_names, cross_validate, default_grid, grid_search, model_io, rank_by_info_gain,
    rank_by_stump, row_for_features, DatasetVariant, LabeledDataset, ModelKind, NaPolicy,
    SpEncoding, CANONICAL_METRICS, TOP4,
};
use qscope_core::persist::{
    read_corpus_csv, read_metrics_csv, read_run_meta, read_tag_table_csv, write_corpus_csv,
    write_metrics_csv, write_run_meta, write_tag_table_csv, RunMeta,
};
use qscope_core::report::{
    write_boxplot_svg, write_comparison_csv, write_eval_csv, write_fold_csv, write_ranking_csv,
    write_summary_csv,
};
use qscope_core::stats::compare_groups;
use qscope_core::{MetricVector64, ReadabilityWeights64};

/// Lexicon and weight defaults shipped with the repo.
const DEFAULT_LEXICON: &str = include_str!("../../../assets/lexicon.tsv");
const DEFAULT_WEIGHTS: &str = include_str!("../../../assets/readability_weights.tsv");

/// Comparison and boxplot targets: the numeric metrics, with parsability
/// encoded as 0/1.
const COMPARED_METRICS: [&str; 9] = ["tq", "tr", "cr", "tcr", "tcc", "cruse", "cua", "te", "me"];

pub struct Paths {
    pub out: PathBuf,
}

impl Paths {
    pub fn corpus(&self) -> PathBuf {
        self.out.join("corpus.csv")
    }
    pub fn tag_table(&self) -> PathBuf {
        self.out.join("tag_table.csv")
    }
    pub fn ingest_summary(&self) -> PathBuf {
        self.out.join("ingest_summary.csv")
    }
    pub fn metrics(&self) -> PathBuf {
        self.out.join("metrics.csv")
    }
    pub fn metrics_meta(&self) -> PathBuf {
        self.out.join("metrics_meta.txt")
    }
    pub fn comparison(&self) -> PathBuf {
        self.out.join("comparison.csv")
    }
    pub fn parsability(&self) -> PathBuf {
        self.out.join("parsability_rates.csv")
    }
    pub fn sentiment(&self) -> PathBuf {
        self.out.join("sentiment_summary.csv")
    }
    pub fn boxplot(&self, metric: &str) -> PathBuf {
        self.out.join(format!("boxplot_{metric}.svg"))
    }
    pub fn ig_ranking(&self) -> PathBuf {
        self.out.join("ig_ranking.csv")
    }
    pub fn stump_ranking(&self) -> PathBuf {
        self.out.join("stump_ranking.csv")
    }
    pub fn model(&self, kind: ModelKind) -> PathBuf {
        self.out.join(format!("model_{}.qsm", kind.name().to_lowercase()))
    }
    pub fn eval_report(&self) -> PathBuf {
        self.out.join("eval_report.csv")
    }
    pub fn eval_folds(&self) -> PathBuf {
        self.out.join("eval_folds.csv")
    }
    pub fn grid_scores(&self) -> PathBuf {
        self.out.join("grid_scores.csv")
    }
    pub fn prediction(&self) -> PathBuf {
        self.out.join("prediction.csv")
    }
    pub fn report(&self) -> PathBuf {
        self.out.join("report.txt")
    }
}

pub struct IngestArgs {
    pub input: PathBuf,
    pub format: CorpusFormat,
    pub filters: FilterSpec,
    pub external_tag_table: Option<PathBuf>,
}

pub fn cmd_ingest(paths: &Paths, args: &IngestArgs) -> Result<()> {
    std::fs::create_dir_all(&paths.out)
        .with_context(|| format!("cannot create {}", paths.out.display()))?;
    let load = corpus::load_corpus(&args.input, args.format, &args.filters)?;
    for w in &load.warnings {
        eprintln!("warning: {} row {}: {}", args.input.display(), w.row, w.message);
    }
    let labels: Vec<QualityLabel> = load
        .questions
        .iter()
        .map(label)
        .collect::<qscope_core::Result<_>>()?;

    let table = match &args.external_tag_table {
        Some(path) => read_tag_table_csv(path)?,
        None => build_tag_table(&load.questions)?,
    };

    write_corpus_csv(&paths.corpus(), &load.questions, &labels)?;
    write_tag_table_csv(&paths.tag_table(), &table)?;
    write_summary_csv(
        &paths.ingest_summary(),
        &summarize_by_language(&load.questions, &labels),
    )?;
    println!(
        "ingested {} questions ({} rows skipped) -> {}",
        load.questions.len(),
        load.warnings.len(),
        paths.corpus().display()
    );
    Ok(())
}

pub struct MetricsArgs {
    pub lexicon: Option<PathBuf>,
    pub weights: Option<PathBuf>,
    pub seed: u64,
}

fn load_lexicon(path: &Option<PathBuf>) -> Result<SentimentLexicon> {
    match path {
        Some(p) => Ok(SentimentLexicon::load(p)?),
        None => Ok(SentimentLexicon::from_tsv_str(DEFAULT_LEXICON)?),
    }
}

fn load_weights(path: &Option<PathBuf>) -> Result<ReadabilityWeights64> {
    match path {
        Some(p) => Ok(ReadabilityWeights64::load(p)?),
        None => Ok(ReadabilityWeights64::from_tsv_str(DEFAULT_WEIGHTS)?),
    }
}

pub fn cmd_metrics(paths: &Paths, args: &MetricsArgs) -> Result<()> {
    let (questions, _labels) = read_corpus_csv(&paths.corpus())
        .with_context(|| "run `qscope ingest` first to produce corpus.csv")?;
    let table = read_tag_table_csv(&paths.tag_table())?;
    let lexicon = load_lexicon(&args.lexicon)?;
    let weights = load_weights(&args.weights)?;
    let backends = BackendRegistry::with_default_backends();
    let ctx = MetricContext {
        table: &table,
        lexicon: &lexicon,
        weights: &weights,
        backends: &backends,
    };
    let (vectors, te_norm) = compute_vectors::<f64>(&questions, &ctx);
    let diagnostics: usize = vectors.iter().map(|v| v.diagnostics.len()).sum();
    if diagnostics > 0 {
        eprintln!("warning: {diagnostics} per-metric diagnostics recorded in the table");
    }
    write_metrics_csv(&paths.metrics(), &vectors)?;
    write_run_meta(
        &paths.metrics_meta(),
        &RunMeta {
            te_norm,
            seed: args.seed,
            rows: vectors.len(),
        },
    )?;
    println!(
        "computed {} metric vectors -> {}",
        vectors.len(),
        paths.metrics().display()
    );
    Ok(())
}

fn metric_rows(
    vectors: &[MetricVector64],
    metric: &str,
) -> Result<Vec<(QualityLabel, Option<f64>)>> {
    vectors
        .iter()
        .map(|v| {
            let label = v
                .label
                .ok_or_else(|| anyhow!("question {} is unlabeled", v.question_id))?;
            Ok((label, ml::feature_value(v, metric)))
        })
        .collect()
}

pub fn cmd_compare(paths: &Paths, seed: u64, svg: bool) -> Result<()> {
    let vectors: Vec<MetricVector64> = read_metrics_csv(&paths.metrics())
        .with_context(|| "run `qscope metrics` first to produce metrics.csv")?;
    let mut comparisons = Vec::new();
    for metric in COMPARED_METRICS {
        let rows = metric_rows(&vectors, metric)?;
        match compare_groups(&rows, metric) {
            Ok(result) => comparisons.push(result),
            Err(e) => eprintln!("warning: {metric}: comparison skipped: {e}"),
        }
    }
    write_comparison_csv(&paths.comparison(), &comparisons)?;

    write_parsability_rates(paths, &vectors)?;
    write_sentiment_summary(paths, &vectors)?;

    if svg {
        for metric in COMPARED_METRICS {
            let rows = metric_rows(&vectors, metric)?;
            let promoted: Vec<f64> = rows
                .iter()
                .filter(|(l, v)| *l == QualityLabel::Promoted && v.is_some())
                .map(|(_, v)| v.unwrap())
                .collect();
            let discouraged: Vec<f64> = rows
                .iter()
                .filter(|(l, v)| *l == QualityLabel::Discouraged && v.is_some())
                .map(|(_, v)| v.unwrap())
                .collect();
            // random promoted sample of the discouraged-group size
            let sampled: Vec<f64> = if promoted.len() > discouraged.len()
                && !discouraged.is_empty()
            {
                let labels: Vec<QualityLabel> = std::iter::repeat_n(
                    QualityLabel::Promoted,
                    promoted.len(),
                )
                .chain(std::iter::repeat_n(
                    QualityLabel::Discouraged,
                    discouraged.len(),
                ))
                .collect();
                corpus::undersample_indices(&labels, seed)?
                    .into_iter()
                    .filter(|&i| i < promoted.len())
                    .map(|i| promoted[i])
                    .collect()
            } else {
                promoted.clone()
            };
            write_boxplot_svg(
                &paths.boxplot(metric),
                metric,
                &[
                    ("TPS", promoted.as_slice()),
                    ("RPS", sampled.as_slice()),
                    ("DS", discouraged.as_slice()),
                ],
            )?;
        }
    }
    println!(
        "compared {} metrics -> {}",
        comparisons.len(),
        paths.comparison().display()
    );
    Ok(())
}

fn write_parsability_rates(paths: &Paths, vectors: &[MetricVector64]) -> Result<()> {
    let mut writer = csv::Writer::from_path(paths.parsability())?;
    writer.write_record(["language", "label", "snippets", "parsable", "rate_percent"])?;
    let mut scopes: Vec<(Option<Language>, &str)> = Language::ANALYZED
        .iter()
        .map(|l| (Some(*l), l.name()))
        .collect();
    scopes.push((None, "All"));
    for (language, name) in scopes {
        for label in [QualityLabel::Promoted, QualityLabel::Discouraged] {
            let verdicts: Vec<_> = vectors
                .iter()
                .filter(|v| v.label == Some(label) && language.is_none_or(|l| v.language == l))
                .filter_map(|v| v.cruse)
                .collect();
            let parsable = verdicts
                .iter()
                .filter(|p| **p == qscope_core::codeparse::Parsability::Parsable)
                .count();
            let rate = if verdicts.is_empty() {
                String::new()
            } else {
                corpus::percentage::<f64>(parsable, verdicts.len()).to_string()
            };
            writer.write_record([
                name.to_string(),
                label.to_string(),
                verdicts.len().to_string(),
                parsable.to_string(),
                rate,
            ])?;
        }
    }
    writer.flush()?;
    Ok(())
}

fn write_sentiment_summary(paths: &Paths, vectors: &[MetricVector64]) -> Result<()> {
    use qscope_core::metrics::Polarity;
    let mut writer = csv::Writer::from_path(paths.sentiment())?;
    writer.write_record(["language", "label", "positive", "negative", "mixed", "neutral"])?;
    let mut scopes: Vec<(Option<Language>, &str)> = Language::ANALYZED
        .iter()
        .map(|l| (Some(*l), l.name()))
        .collect();
    scopes.push((None, "All"));
    for (language, name) in scopes {
        for label in [QualityLabel::Promoted, QualityLabel::Discouraged] {
            let polarities: Vec<Polarity> = vectors
                .iter()
                .filter(|v| v.label == Some(label) && language.is_none_or(|l| v.language == l))
                .filter_map(|v| v.sp)
                .collect();
            let total = polarities.len();
            let percent = |p: Polarity| -> String {
                if total == 0 {
                    return String::new();
                }
                let count = polarities.iter().filter(|x| **x == p).count();
                corpus::percentage::<f64>(count, total).to_string()
            };
            writer.write_record([
                name.to_string(),
                label.to_string(),
                percent(Polarity::Positive),
                percent(Polarity::Negative),
                percent(Polarity::Mixed),
                percent(Polarity::Neutral),
            ])?;
        }
    }
    writer.flush()?;
    Ok(())
}

pub fn cmd_rank(paths: &Paths, bins: usize, folds: usize, seed: u64) -> Result<()> {
    let vectors: Vec<MetricVector64> = read_metrics_csv(&paths.metrics())
        .with_context(|| "run `qscope metrics` first to produce metrics.csv")?;
    let names = all_feature_names(SpEncoding::CategoryIndex, NaPolicy::ImputeZeroWithFlag);
    let ds = LabeledDataset::from_vectors(&vectors, names, NaPolicy::ImputeZeroWithFlag)?;
    let canonical = ds.select_features(&CANONICAL_METRICS)?;

    let ig = rank_by_info_gain(&canonical, bins)?;
    write_ranking_csv(&paths.ig_ranking(), &ig, "info_gain_nats")?;

    let stump = rank_by_stump(&canonical, folds, seed)?;
    write_ranking_csv(&paths.stump_ranking(), &stump, "accuracy")?;

    println!(
        "ranked {} features -> {} and {}",
        canonical.n_features(),
        paths.ig_ranking().display(),
        paths.stump_ranking().display()
    );
    Ok(())
}

pub struct TrainArgs {
    pub kinds: Vec<ModelKind>,
    pub variant: DatasetVariant,
    pub feature_set: FeatureSetChoice,
    pub folds: usize,
    pub seed: u64,
    pub grid: bool,
}

#[derive(Debug, Clone)]
pub enum FeatureSetChoice {
    All,
    Top4,
    Explicit(Vec<String>),
}

impl FeatureSetChoice {
    pub fn parse(s: &str) -> FeatureSetChoice {
        match s {
            "all" => FeatureSetChoice::All,
            "top4" => FeatureSetChoice::Top4,
            list => FeatureSetChoice::Explicit(
                list.split(',').map(|n| n.trim().to_string()).collect(),
            ),
        }
    }

    fn names(&self) -> Vec<String> {
        match self {
            FeatureSetChoice::All => {
                all_feature_names(SpEncoding::StrengthsAndOneHot, NaPolicy::ImputeZeroWithFlag)
            }
            FeatureSetChoice::Top4 => TOP4.iter().map(|n| n.to_string()).collect(),
            FeatureSetChoice::Explicit(names) => names.clone(),
        }
    }

    fn label(&self) -> String {
        match self {
            FeatureSetChoice::All => "all".to_string(),
            FeatureSetChoice::Top4 => "top4".to_string(),
            FeatureSetChoice::Explicit(names) => names.join("+"),
        }
    }
}

pub fn cmd_train(paths: &Paths, args: &TrainArgs) -> Result<()> {
    let vectors: Vec<MetricVector64> = read_metrics_csv(&paths.metrics())
        .with_context(|| "run `qscope metrics` first to produce metrics.csv")?;
    let names = args.feature_set.names();
    let full = LabeledDataset::from_vectors(&vectors, names, NaPolicy::ImputeZeroWithFlag)?;
    let ds = match args.variant {
        DatasetVariant::Balanced => full.undersampled(args.seed)?,
        DatasetVariant::Imbalanced => full,
    };
    let feature_label = args.feature_set.label();

    let mut reports = Vec::new();
    let mut grid_rows: Vec<(String, String, f64)> = Vec::new();
    for kind in &args.kinds {
        let (spec, report) = if args.grid {
            let result = grid_search(
                *kind,
                &default_grid(*kind),
                &ds,
                args.folds,
                args.seed,
                args.variant,
                &feature_label,
            )?;
            for (combo_spec, accuracy) in &result.scores {
                grid_rows.push((kind.to_string(), combo_spec.describe_params(), *accuracy));
            }
            (result.best, result.best_report)
        } else {
            let spec = ml::ModelSpec::with_defaults(*kind, args.seed);
            let report = cross_validate(&spec, &ds, args.folds, args.seed, args.variant, &feature_label)?;
            (spec, report)
        };
        for w in &report.warnings {
            eprintln!("warning: {kind}: {w}");
        }
        let model = ml::train(&spec, &ds)?;
        model_io::save_model(&model, &paths.model(*kind))?;
        println!(
            "trained {kind} ({}) accuracy={:.4} -> {}",
            spec.describe_params(),
            report.accuracy,
            paths.model(*kind).display()
        );
        reports.push((kind.to_string(), report));
    }

    write_eval_csv(&paths.eval_report(), &reports)?;
    write_fold_csv(&paths.eval_folds(), &reports)?;
    if args.grid {
        let mut writer = csv::Writer::from_path(paths.grid_scores())?;
        writer.write_record(["model", "params", "accuracy"])?;
        for (model, params, accuracy) in &grid_rows {
            writer.write_record([model.clone(), params.clone(), accuracy.to_string()])?;
        }
        writer.flush()?;
    }
    Ok(())
}

pub struct PredictArgs {
    pub model_file: PathBuf,
    pub question: PathBuf,
    pub lexicon: Option<PathBuf>,
    pub weights: Option<PathBuf>,
}

pub fn cmd_predict(paths: &Paths, args: &PredictArgs) -> Result<()> {
    let model = model_io::load_model::<f64>(&args.model_file)?;
    let table = read_tag_table_csv(&paths.tag_table())
        .with_context(|| "the saved tag table is required; run `qscope ingest` first")?;
    let meta: RunMeta<f64> = read_run_meta(&paths.metrics_meta())
        .with_context(|| "metrics_meta.txt is required; run `qscope metrics` first")?;
    let lexicon = load_lexicon(&args.lexicon)?;
    let weights = load_weights(&args.weights)?;
    let backends = BackendRegistry::with_default_backends();

    let text = std::fs::read_to_string(&args.question)
        .with_context(|| format!("cannot read {}", args.question.display()))?;
    let line = text
        .lines()
        .find(|l| !l.trim().is_empty())
        .ok_or_else(|| anyhow!("{} contains no question record", args.question.display()))?;
    let question: Question = records::parse_line(line)
        .map_err(|e| anyhow!("bad question record: {e}"))?;

    let ctx = MetricContext {
        table: &table,
        lexicon: &lexicon,
        weights: &weights,
        backends: &backends,
    };
    let content = extract_content(&question);
    let mut vector = compute_vector::<f64>(&question, &content, &ctx);
    vector.te = vector.te_raw.map(|raw| meta.te_norm.apply(raw));
    for d in &vector.diagnostics {
        eprintln!("warning: question {}: {d}", question.id);
    }

    let row = row_for_features(&vector, &model.feature_names, NaPolicy::ImputeZeroWithFlag)?
        .expect("impute policy always yields a row");
    let prediction = model.predict(&row)?;

    println!(
        "id={} predicted={} score_promoted={} score_discouraged={}",
        question.id, prediction.label, prediction.scores[0], prediction.scores[1]
    );
    let mut writer = csv::Writer::from_path(paths.prediction())?;
    writer.write_record([
        "id",
        "predicted",
        "score_promoted",
        "score_discouraged",
        "true_label",
    ])?;
    writer.write_record([
        question.id.to_string(),
        prediction.label.to_string(),
        prediction.scores[0].to_string(),
        prediction.scores[1].to_string(),
        label(&question).map(|l| l.to_string()).unwrap_or_default(),
    ])?;
    writer.flush()?;
    Ok(())
}

pub fn cmd_report(paths: &Paths) -> Result<()> {
    let mut out = String::new();
    out.push_str("question quality analysis report\n");
    out.push_str("================================\n\n");

    section(&mut out, "corpus summary", &paths.ingest_summary(), |text| {
        Ok(table_block(text))
    })?;
    section(&mut out, "metric comparison (promoted vs discouraged)", &paths.comparison(), |text| {
        comparison_digest(text)
    })?;
    section(&mut out, "parsability rates", &paths.parsability(), |text| {
        Ok(table_block(text))
    })?;
    section(&mut out, "sentiment polarity", &paths.sentiment(), |text| {
        Ok(table_block(text))
    })?;
    section(&mut out, "feature ranks (information gain)", &paths.ig_ranking(), |text| {
        Ok(table_block(text))
    })?;
    section(&mut out, "feature ranks (single-feature stumps)", &paths.stump_ranking(), |text| {
        Ok(table_block(text))
    })?;
    section(
        &mut out,
        "classifier performance (micro-averaged over pooled cross-validation folds)",
        &paths.eval_report(),
        |text| Ok(table_block(text)),
    )?;

    std::fs::write(paths.report(), &out)
        .with_context(|| format!("cannot write {}", paths.report().display()))?;
    println!("wrote {}", paths.report().display());
    Ok(())
}

fn section(
    out: &mut String,
    title: &str,
    path: &Path,
    render: impl Fn(&str) -> Result<String>,
) -> Result<()> {
    out.push_str(title);
    out.push('\n');
    out.push_str(&"-".repeat(title.len()));
    out.push('\n');
    match std::fs::read_to_string(path) {
        Ok(text) => out.push_str(&render(&text)?),
        Err(_) => {
            out.push_str(&format!(
                "not available ({} missing)\n",
                path.file_name().and_then(|n| n.to_str()).unwrap_or("file")
            ));
        }
    }
    out.push('\n');
    Ok(())
}

/// Indent a CSV file as a fixed block.
fn table_block(text: &str) -> String {
    text.lines()
        .map(|l| format!("  {l}\n"))
        .collect()
}

/// One line per metric from the overall comparison rows.
fn comparison_digest(text: &str) -> Result<String> {
    let mut out = String::new();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let column = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| anyhow!("comparison.csv has no column {name:?}"))
    };
    let metric_col = column("metric")?;
    let scope_col = column("scope")?;
    let median_a_col = column("median_promoted")?;
    let median_b_col = column("median_discouraged")?;
    let p_col = column("p")?;
    let d_col = column("cliffs_d")?;
    let magnitude_col = column("magnitude")?;
    let significant_col = column("significant")?;
    for record in reader.records() {
        let record = record?;
        if record.get(scope_col) != Some("overall") {
            continue;
        }
        let get = |i: usize| record.get(i).unwrap_or("");
        out.push_str(&format!(
            "  {:<6} median P={} D={}  p={} d={} ({}) {}\n",
            get(metric_col),
            get(median_a_col),
            get(median_b_col),
            get(p_col),
            get(d_col),
            get(magnitude_col),
            if get(significant_col) == "1" {
                "significant"
            } else {
                "not significant"
            }
        ));
    }
    Ok(out)
}

/// Map user-facing model names onto kinds; "all" selects every family.
pub fn parse_model_kinds(raw: &str) -> Result<Vec<ModelKind>> {
    if raw == "all" {
        return Ok(ModelKind::ALL.to_vec());
    }
    raw.split(',')
        .map(|name| {
            name.trim()
                .parse::<ModelKind>()
                .map_err(|e| anyhow!("{e}"))
        })
        .collect()
}

/// Parse the `--languages` list.
pub fn parse_languages(raw: &str) -> Result<Vec<Language>> {
    raw.split(',')
        .map(|name| {
            name.trim()
                .parse::<Language>()
                .map_err(|e| anyhow!("{e}"))
        })
        .collect()
}
