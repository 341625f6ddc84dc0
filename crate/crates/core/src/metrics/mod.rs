//! The ten objective quality metrics and the per-question metric vector.
//!
//! Text-side metrics live here; the code-side metrics (code readability,
//! parsability, API count) are delegated to [`crate::codeparse`].

pub mod entropy;
pub mod readability;
pub mod rouge;
pub mod sentiment;

pub use entropy::{metric_entropy, topic_entropy_raw, TeNormalization};
pub use readability::{rix_raw, text_readability, RIX_MAX};
pub use rouge::{rouge1_recall, tokenize};
pub use sentiment::{sentiment_polarity, Polarity, SentimentLexicon, SentimentScore};

use crate::codeparse::{
    code_readability, count_api_calls, merge_snippets, BackendRegistry, Parsability,
    ReadabilityWeights,
};
use crate::corpus::{
    extract_content, label, QualityLabel, Question, QuestionContent, TagFrequencyTable,
};
use crate::error::{Error, Result};
use crate::num::{count, Real};

/// Everything metric computation needs besides the question itself.
pub struct MetricContext<'a, F> {
    pub table: &'a TagFrequencyTable,
    pub lexicon: &'a SentimentLexicon,
    pub weights: &'a ReadabilityWeights<F>,
    pub backends: &'a BackendRegistry,
}

/// Category of the text-code ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcrCategory {
    /// Ratio <= 1: at least as much prose as code.
    AtMostOne,
    /// Ratio > 1: more code than prose.
    GreaterThanOne,
}

pub fn tcr_category<F: Real>(ratio: F) -> TcrCategory {
    if ratio <= F::one() {
        TcrCategory::AtMostOne
    } else {
        TcrCategory::GreaterThanOne
    }
}

/// Title quality: unigram recall of the title against the body prose
/// (title excluded from the system side).
pub fn title_quality<F: Real>(q: &Question, content: &QuestionContent) -> Result<F> {
    if q.title.trim().is_empty() {
        return Err(Error::EmptyTitle);
    }
    rouge1_recall(&q.title, &content.body_prose)
}

/// Code characters per prose character. `Ok(None)` when the question has
/// no code; an error when code exists but the prose is empty.
pub fn text_code_ratio<F: Real>(content: &QuestionContent) -> Result<Option<F>> {
    if content.code_blocks.is_empty() {
        return Ok(None);
    }
    if content.prose_length == 0 {
        return Err(Error::UndefinedRatio);
    }
    Ok(Some(
        count::<F>(content.code_length) / count::<F>(content.prose_length),
    ))
}

/// Unigram recall of the concatenated code blocks against the prose:
/// how much of the code's vocabulary the explanation mentions.
/// `Ok(None)` when the question has no code or no prose.
pub fn text_code_correlation<F: Real>(content: &QuestionContent) -> Result<Option<F>> {
    if content.code_blocks.is_empty() || content.prose.is_empty() {
        return Ok(None);
    }
    let code = content.code_blocks.join("\n");
    rouge1_recall(&code, &content.prose).map(Some)
}

/// The ten metric values for one question. Code-side metrics are `None`
/// when the question has no code block; any per-metric failure also
/// degrades to `None` with a note in `diagnostics` so one bad question
/// never aborts a batch.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricVector<F> {
    pub question_id: u64,
    pub label: Option<QualityLabel>,
    pub language: crate::corpus::Language,
    /// Title quality, unit interval.
    pub tq: Option<F>,
    /// Text readability score in [0, 100]; higher = harder to read.
    pub tr: Option<F>,
    /// Code readability, unit interval; 1 = highly readable.
    pub cr: Option<F>,
    /// Text-code ratio, non-negative.
    pub tcr: Option<F>,
    /// Text-code correlation, unit interval.
    pub tcc: Option<F>,
    /// Code reusability: parsability verdict.
    pub cruse: Option<Parsability>,
    /// Code understandability: API invocation count.
    pub cua: Option<u64>,
    /// Topic entropy, min-max normalized over the batch.
    pub te: Option<F>,
    /// Raw topic entropy before normalization.
    pub te_raw: Option<F>,
    /// Metric entropy, bits per character.
    pub me: Option<F>,
    /// Sentiment category.
    pub sp: Option<Polarity>,
    /// Strongest positive strength matched (1 = none).
    pub sp_pos: i8,
    /// Strongest negative strength matched, as a positive number.
    pub sp_neg: i8,
    /// Whether the question carries at least one code block; the
    /// applicability flag for cr/tcr/tcc/cruse/cua.
    pub has_code: bool,
    pub diagnostics: Vec<String>,
}

impl<F> MetricVector<F> {
    fn empty(question_id: u64, language: crate::corpus::Language) -> MetricVector<F> {
        MetricVector {
            question_id,
            label: None,
            language,
            tq: None,
            tr: None,
            cr: None,
            tcr: None,
            tcc: None,
            cruse: None,
            cua: None,
            te: None,
            te_raw: None,
            me: None,
            sp: None,
            sp_pos: 1,
            sp_neg: 1,
            has_code: false,
            diagnostics: Vec::new(),
        }
    }
}

fn note<T, F>(target: &mut Option<T>, diagnostics: &mut Vec<String>, name: &str, result: Result<F>)
where
    F: Into<Option<T>>,
{
    match result {
        Ok(v) => *target = v.into(),
        Err(e) => diagnostics.push(format!("{name}: {e}")),
    }
}

/// Compute the full metric vector of one question. Topic entropy is left
/// raw; batch normalization happens in [`compute_vectors`] or via a stored
/// [`TeNormalization`].
pub fn compute_vector<F: Real>(
    q: &Question,
    content: &QuestionContent,
    ctx: &MetricContext<'_, F>,
) -> MetricVector<F> {
    let mut v = MetricVector::empty(q.id, q.language);
    v.label = label(q).ok();
    v.has_code = !content.code_blocks.is_empty();

    note(&mut v.tq, &mut v.diagnostics, "tq", title_quality(q, content).map(Some));
    note(&mut v.tr, &mut v.diagnostics, "tr", text_readability(content).map(Some));
    note(&mut v.me, &mut v.diagnostics, "me", metric_entropy(&content.prose).map(Some));
    note(
        &mut v.te_raw,
        &mut v.diagnostics,
        "te",
        topic_entropy_raw(&q.tags, ctx.table).map(Some),
    );
    match sentiment_polarity(&content.prose, ctx.lexicon) {
        Ok(score) => {
            v.sp = Some(score.polarity);
            v.sp_pos = score.positive;
            v.sp_neg = score.negative;
        }
        Err(e) => v.diagnostics.push(format!("sp: {e}")),
    }

    note(&mut v.tcr, &mut v.diagnostics, "tcr", text_code_ratio(content));
    note(&mut v.tcc, &mut v.diagnostics, "tcc", text_code_correlation(content));

    if v.has_code {
        match merge_snippets(content, q.language) {
            Ok(snippet) => {
                match ctx.backends.check_parsable(&snippet) {
                    Ok(verdict) => v.cruse = Some(verdict.parsability),
                    Err(e) => v.diagnostics.push(format!("cruse: {e}")),
                }
                match code_readability(&snippet, ctx.weights) {
                    Ok(score) => v.cr = Some(score),
                    Err(e) => v.diagnostics.push(format!("cr: {e}")),
                }
                v.cua = Some(count_api_calls(&snippet.source));
            }
            Err(e) => v.diagnostics.push(format!("merge: {e}")),
        }
    }
    v
}

/// Compute metric vectors for a whole corpus and apply the batch min-max
/// normalization pass to topic entropy. Returns the vectors in corpus
/// order plus the fitted normalization bounds.
pub fn compute_vectors<F: Real>(
    corpus: &[Question],
    ctx: &MetricContext<'_, F>,
) -> (Vec<MetricVector<F>>, TeNormalization<F>) {
    let mut vectors: Vec<MetricVector<F>> = corpus
        .iter()
        .map(|q| {
            let content = extract_content(q);
            compute_vector(q, &content, ctx)
        })
        .collect();
    let norm = TeNormalization::fit(vectors.iter().filter_map(|v| v.te_raw));
    for v in &mut vectors {
        v.te = v.te_raw.map(|raw| norm.apply(raw));
    }
    (vectors, norm)
}
