//! `qscope` — question-quality analytics pipeline.
//!
//! ingest -> metrics -> compare -> rank -> train -> predict -> report

mod commands;
mod config;

use std::path::PathBuf;

use anyhow::{anyhow, Result};
use clap::{Parser, Subcommand};

use commands::{
    cmd_compare, cmd_ingest, cmd_metrics, cmd_predict, cmd_rank, cmd_report, cmd_train,
    parse_languages, parse_model_kinds, FeatureSetChoice, IngestArgs, MetricsArgs, Paths,
    PredictArgs, TrainArgs,
};
use config::Config;
use qscope_core::corpus::{CorpusFormat, FilterSpec};
use qscope_core::ml::{DatasetVariant, DEFAULT_BINS};

#[derive(Parser)]
#[command(
    name = "qscope",
    version,
    about = "Objective quality metrics, agreement statistics, and vote-polarity classifiers for Q&A questions"
)]
struct Cli {
    /// Flat key=value config file; flags override config values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Seed for every randomized stage.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory for all artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Corpus input format: dump_posts or record_lines.
    #[arg(long, global = true)]
    format: Option<String>,

    /// Comma-separated language filter (csharp,java,javascript,python).
    #[arg(long, global = true)]
    languages: Option<String>,

    /// Balance the training table by undersampling the majority class.
    #[arg(long, global = true)]
    balanced: bool,

    /// Keep the natural class imbalance (default).
    #[arg(long, global = true, conflicts_with = "balanced")]
    imbalanced: bool,

    /// Feature set: all, top4, or an explicit comma-separated list.
    #[arg(long, global = true)]
    features: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a corpus file, apply the filters, label questions, and build
    /// the tag table.
    Ingest {
        /// Corpus file to read.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Keep questions with at least this many answers.
        #[arg(long)]
        min_answers: Option<u32>,
        /// Keep questions created in this year or earlier.
        #[arg(long)]
        max_year: Option<i32>,
        /// Keep score-0 questions (they cannot be labeled; off by default).
        #[arg(long)]
        include_zero_score: bool,
        /// Use an external tag-frequency CSV instead of counting the corpus.
        #[arg(long)]
        tag_table: Option<PathBuf>,
    },
    /// Compute the ten metrics for every ingested question.
    Metrics {
        /// Sentiment lexicon file (term<TAB>strength); built-in default.
        #[arg(long)]
        lexicon: Option<PathBuf>,
        /// Code-readability weights file; built-in default.
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Compare each metric between promoted and discouraged questions.
    Compare {
        /// Skip the SVG boxplots.
        #[arg(long)]
        no_svg: bool,
    },
    /// Rank features by information gain and by single-feature stumps.
    Rank {
        /// Equal-frequency bins for discretizing continuous features.
        #[arg(long)]
        bins: Option<usize>,
        /// Cross-validation folds for the stump ranking.
        #[arg(long)]
        folds: Option<usize>,
    },
    /// Train classifier(s) with cross-validated evaluation.
    Train {
        /// Model: dt, rf, knn, gnb, nn, a comma list, or "all".
        #[arg(long)]
        model: Option<String>,
        /// Cross-validation folds.
        #[arg(long)]
        folds: Option<usize>,
        /// Run the cross-validated grid search instead of default params.
        #[arg(long)]
        grid: bool,
    },
    /// Predict the vote polarity of one question record.
    Predict {
        /// Saved model file.
        #[arg(long)]
        model_file: Option<PathBuf>,
        /// record_lines file holding the question.
        #[arg(long)]
        question: Option<PathBuf>,
        /// Sentiment lexicon override.
        #[arg(long)]
        lexicon: Option<PathBuf>,
        /// Readability weights override.
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Assemble a plain-text report from the generated tables.
    Report,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };

    let seed: u64 = config.parsed(cli.seed, "seed", 42)?;
    let out = config
        .path(cli.out.as_deref(), "out")
        .unwrap_or_else(|| PathBuf::from("out"));
    let paths = Paths { out };

    match cli.command {
        Command::Ingest {
            input,
            min_answers,
            max_year,
            include_zero_score,
            tag_table,
        } => {
            let input = config
                .path(input.as_deref(), "input")
                .ok_or_else(|| anyhow!("--input (or config key input) is required"))?;
            let format: CorpusFormat = config
                .string(cli.format.as_deref(), "format", "record_lines")
                .parse()
                .map_err(|e: String| anyhow!(e))?;
            let mut filters = FilterSpec {
                min_answers: config.parsed(min_answers, "min_answers", 1)?,
                exclude_zero_score: !config.flag(include_zero_score, "include_zero_score"),
                max_year: config.parsed(max_year, "max_year", 2017)?,
                ..FilterSpec::default()
            };
            if let Some(raw) = cli
                .languages
                .as_deref()
                .or_else(|| config.get("languages"))
            {
                filters.languages = parse_languages(raw)?;
            }
            let external_tag_table = config.path(tag_table.as_deref(), "tag_table");
            cmd_ingest(
                &paths,
                &IngestArgs {
                    input,
                    format,
                    filters,
                    external_tag_table,
                },
            )
        }
        Command::Metrics { lexicon, weights } => cmd_metrics(
            &paths,
            &MetricsArgs {
                lexicon: config.path(lexicon.as_deref(), "lexicon"),
                weights: config.path(weights.as_deref(), "weights"),
                seed,
            },
        ),
        Command::Compare { no_svg } => {
            cmd_compare(&paths, seed, !config.flag(no_svg, "no_svg"))
        }
        Command::Rank { bins, folds } => {
            let bins = config.parsed(bins, "bins", DEFAULT_BINS)?;
            let folds = config.parsed(folds, "folds", 10)?;
            cmd_rank(&paths, bins, folds, seed)
        }
        Command::Train { model, folds, grid } => {
            let kinds = parse_model_kinds(&config.string(model.as_deref(), "model", "all"))?;
            let variant = if config.flag(cli.balanced, "balanced") && !cli.imbalanced {
                DatasetVariant::Balanced
            } else {
                DatasetVariant::Imbalanced
            };
            let feature_set =
                FeatureSetChoice::parse(&config.string(cli.features.as_deref(), "features", "all"));
            cmd_train(
                &paths,
                &TrainArgs {
                    kinds,
                    variant,
                    feature_set,
                    folds: config.parsed(folds, "folds", 10)?,
                    seed,
                    grid: config.flag(grid, "grid"),
                },
            )
        }
        Command::Predict {
            model_file,
            question,
            lexicon,
            weights,
        } => {
            let model_file = config
                .path(model_file.as_deref(), "model_file")
                .ok_or_else(|| anyhow!("--model-file (or config key model_file) is required"))?;
            let question = config
                .path(question.as_deref(), "question")
                .ok_or_else(|| anyhow!("--question (or config key question) is required"))?;
            cmd_predict(
                &paths,
                &PredictArgs {
                    model_file,
                    question,
                    lexicon: config.path(lexicon.as_deref(), "lexicon"),
                    weights: config.path(weights.as_deref(), "weights"),
                },
            )
        }
        Command::Report => cmd_report(&paths),
    }
}
