//! Corpus ingestion: loading question dumps, filtering, labeling,
//! content extraction, tag frequencies, and undersampling.

pub mod dump;
pub mod html;
pub mod records;
pub mod synthetic;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::num::{count, Real};

/// Programming-language partition of the corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Language {
    CSharp,
    Java,
    JavaScript,
    Python,
    Other,
}

impl Language {
    /// The four analyzed languages, in reporting order.
    pub const ANALYZED: [Language; 4] = [
        Language::CSharp,
        Language::Java,
        Language::JavaScript,
        Language::Python,
    ];

    /// First matching tag wins; questions matching none are `Other`.
    pub fn from_tags<S: AsRef<str>>(tags: &[S]) -> Language {
        for tag in tags {
            match tag.as_ref() {
                "c#" => return Language::CSharp,
                "java" => return Language::Java,
                "javascript" => return Language::JavaScript,
                "python" => return Language::Python,
                _ => {}
            }
        }
        Language::Other
    }

    pub fn name(&self) -> &'static str {
        match self {
            Language::CSharp => "CSharp",
            Language::Java => "Java",
            Language::JavaScript => "JavaScript",
            Language::Python => "Python",
            Language::Other => "Other",
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Language {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csharp" | "c#" => Ok(Language::CSharp),
            "java" => Ok(Language::Java),
            "javascript" | "js" => Ok(Language::JavaScript),
            "python" => Ok(Language::Python),
            "other" => Ok(Language::Other),
            other => Err(format!("unknown language {other:?}")),
        }
    }
}

/// Calendar date; only the fields needed for the cutoff-year filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Date {
    pub year: i32,
    pub month: u32,
    pub day: u32,
}

impl Date {
    pub fn new(year: i32, month: u32, day: u32) -> Date {
        Date { year, month, day }
    }
}

impl fmt::Display for Date {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}-{:02}", self.year, self.month, self.day)
    }
}

impl FromStr for Date {
    type Err = String;

    /// Accepts `YYYY-MM-DD` with an optional `T...` time suffix.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let date_part = s.split('T').next().unwrap_or(s);
        let mut parts = date_part.splitn(3, '-');
        let year = parts
            .next()
            .and_then(|p| p.parse::<i32>().ok())
            .ok_or_else(|| format!("bad date {s:?}"))?;
        let month = parts
            .next()
            .and_then(|p| p.parse::<u32>().ok())
            .ok_or_else(|| format!("bad date {s:?}"))?;
        let day = parts
            .next()
            .and_then(|p| p.parse::<u32>().ok())
            .ok_or_else(|| format!("bad date {s:?}"))?;
        if !(1..=12).contains(&month) || !(1..=31).contains(&day) {
            return Err(format!("bad date {s:?}"));
        }
        Ok(Date { year, month, day })
    }
}

/// One Q&A post of type "question".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Question {
    pub id: u64,
    pub title: String,
    /// HTML-fragment body as stored in the dump.
    pub body: String,
    /// Lowercase tag names, 1..=5 after validation.
    pub tags: Vec<String>,
    /// Net votes: upvotes - downvotes.
    pub score: i64,
    pub answer_count: u32,
    pub creation_date: Date,
    pub language: Language,
}

/// Vote polarity of a question.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QualityLabel {
    Promoted,
    Discouraged,
}

impl QualityLabel {
    pub fn name(&self) -> &'static str {
        match self {
            QualityLabel::Promoted => "Promoted",
            QualityLabel::Discouraged => "Discouraged",
        }
    }
}

impl fmt::Display for QualityLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for QualityLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "Promoted" => Ok(QualityLabel::Promoted),
            "Discouraged" => Ok(QualityLabel::Discouraged),
            other => Err(format!("unknown label {other:?}")),
        }
    }
}

/// Label a question by the sign of its score.
pub fn label(q: &Question) -> Result<QualityLabel> {
    match q.score {
        s if s > 0 => Ok(QualityLabel::Promoted),
        s if s < 0 => Ok(QualityLabel::Discouraged),
        _ => Err(Error::Unlabelable { id: q.id }),
    }
}

/// Extracted prose and code content of one question.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuestionContent {
    /// Title + " " + body prose, whitespace-collapsed.
    pub prose: String,
    /// Body prose without the title, for title-quality scoring.
    pub body_prose: String,
    /// Raw code strings from `<code>` under `<pre>`, document order.
    pub code_blocks: Vec<String>,
    /// Character count of `prose`.
    pub prose_length: usize,
    /// Total character count of all code blocks.
    pub code_length: usize,
}

/// Extract prose and code blocks from a question body.
pub fn extract_content(q: &Question) -> QuestionContent {
    let extracted = html::extract(&q.body);
    let title = html::collapse_whitespace(&html::decode_entities(&q.title));
    let prose = if extracted.prose.is_empty() {
        title.clone()
    } else if title.is_empty() {
        extracted.prose.clone()
    } else {
        format!("{} {}", title, extracted.prose)
    };
    let prose_length = prose.chars().count();
    let code_length = extracted
        .code_blocks
        .iter()
        .map(|b| b.chars().count())
        .sum();
    QuestionContent {
        prose,
        body_prose: extracted.prose,
        code_blocks: extracted.code_blocks,
        prose_length,
        code_length,
    }
}

/// Global tag -> frequency table backing topic-entropy probabilities.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TagFrequencyTable {
    counts: BTreeMap<String, u64>,
    total: u64,
}

impl TagFrequencyTable {
    pub fn from_counts(counts: BTreeMap<String, u64>) -> TagFrequencyTable {
        let total = counts.values().sum();
        TagFrequencyTable { counts, total }
    }

    pub fn count(&self, tag: &str) -> Option<u64> {
        self.counts.get(tag).copied()
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// P(tag) = F_tag / total, in (0, 1] for present tags.
    pub fn probability<F: Real>(&self, tag: &str) -> Result<F> {
        let c = self.count(tag).ok_or_else(|| Error::TagNotInTable {
            tag: tag.to_string(),
        })?;
        Ok(F::from_u64(c).expect("count fits scalar") / F::from_u64(self.total).expect("total"))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(t, c)| (t.as_str(), *c))
    }
}

/// Count question-tag occurrences across a corpus.
pub fn build_tag_table(corpus: &[Question]) -> Result<TagFrequencyTable> {
    if corpus.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for q in corpus {
        for tag in &q.tags {
            *counts.entry(tag.clone()).or_insert(0) += 1;
        }
    }
    Ok(TagFrequencyTable::from_counts(counts))
}

/// Ingestion filters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterSpec {
    /// Keep only questions with at least this many answers.
    pub min_answers: u32,
    /// Drop score-0 questions (they cannot be labeled).
    pub exclude_zero_score: bool,
    /// Keep only questions created in this year or earlier.
    pub max_year: i32,
    /// Keep only questions whose detected language is in this set.
    pub languages: Vec<Language>,
}

impl Default for FilterSpec {
    fn default() -> FilterSpec {
        FilterSpec {
            min_answers: 1,
            exclude_zero_score: true,
            max_year: 2017,
            languages: Language::ANALYZED.to_vec(),
        }
    }
}

impl FilterSpec {
    pub fn accepts(&self, q: &Question) -> bool {
        q.answer_count >= self.min_answers
            && (!self.exclude_zero_score || q.score != 0)
            && q.creation_date.year <= self.max_year
            && self.languages.contains(&q.language)
    }
}

/// Input format of a corpus file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    /// Rows of the standard data-dump Posts file.
    DumpPosts,
    /// One key=value record per line; see [`records`].
    RecordLines,
}

impl FromStr for CorpusFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "dump_posts" => Ok(CorpusFormat::DumpPosts),
            "record_lines" => Ok(CorpusFormat::RecordLines),
            other => Err(format!("unknown corpus format {other:?}")),
        }
    }
}

/// A skipped row, reported but not fatal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowWarning {
    /// 1-based line number in the source file.
    pub row: usize,
    pub message: String,
}

/// Outcome of loading a corpus file.
#[derive(Debug, Clone)]
pub struct CorpusLoad {
    pub questions: Vec<Question>,
    pub warnings: Vec<RowWarning>,
}

/// Load a corpus file, keeping only rows that are questions, pass all
/// filters, and carry a recognized language tag. Appearance order is
/// preserved; malformed rows are skipped with a warning. One streaming
/// pass: rows are parsed and filtered as they are read.
pub fn load_corpus(path: &Path, format: CorpusFormat, filters: &FilterSpec) -> Result<CorpusLoad> {
    use std::io::BufRead;
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = std::io::BufReader::new(file);
    let mut questions = Vec::new();
    let mut warnings = Vec::new();
    let mut seen_ids = std::collections::BTreeSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let row = idx + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed = match format {
            CorpusFormat::DumpPosts => dump::parse_row(&line),
            CorpusFormat::RecordLines => records::parse_line(&line).map(Some),
        };
        match parsed {
            Ok(None) => {} // not a question row
            Ok(Some(q)) => {
                if !seen_ids.insert(q.id) {
                    warnings.push(RowWarning {
                        row,
                        message: format!("duplicate question id {}", q.id),
                    });
                } else if filters.accepts(&q) {
                    questions.push(q);
                }
            }
            Err(message) => warnings.push(RowWarning { row, message }),
        }
    }
    if questions.is_empty() {
        return Err(Error::EmptyCorpus {
            path: path.display().to_string(),
        });
    }
    Ok(CorpusLoad {
        questions,
        warnings,
    })
}

/// Validate raw question fields shared by both input formats.
pub(crate) fn validate_question(q: Question) -> std::result::Result<Question, String> {
    if q.id == 0 {
        return Err("id must be a positive integer".to_string());
    }
    if q.tags.is_empty() || q.tags.len() > 5 {
        return Err(format!("question {} has {} tags, need 1..=5", q.id, q.tags.len()));
    }
    Ok(q)
}

/// Randomly reduce the majority class to the minority-class size.
/// Returns the retained indices in original order; deterministic for a
/// fixed seed; the minority class is untouched.
pub fn undersample_indices(labels: &[QualityLabel], seed: u64) -> Result<Vec<usize>> {
    let promoted: Vec<usize> = (0..labels.len())
        .filter(|&i| labels[i] == QualityLabel::Promoted)
        .collect();
    let discouraged: Vec<usize> = (0..labels.len())
        .filter(|&i| labels[i] == QualityLabel::Discouraged)
        .collect();
    if promoted.is_empty() {
        return Err(Error::MissingClass(QualityLabel::Promoted));
    }
    if discouraged.is_empty() {
        return Err(Error::MissingClass(QualityLabel::Discouraged));
    }
    let (majority, minority) = if promoted.len() >= discouraged.len() {
        (&promoted, &discouraged)
    } else {
        (&discouraged, &promoted)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chosen = rand::seq::index::sample(&mut rng, majority.len(), minority.len());
    let mut keep: Vec<usize> = chosen.iter().map(|i| majority[i]).collect();
    keep.extend(minority.iter().copied());
    keep.sort_unstable();
    Ok(keep)
}

/// Undersample labeled rows; see [`undersample_indices`].
pub fn undersample<T: Clone>(
    rows: &[(T, QualityLabel)],
    seed: u64,
) -> Result<Vec<(T, QualityLabel)>> {
    let labels: Vec<QualityLabel> = rows.iter().map(|(_, l)| *l).collect();
    let keep = undersample_indices(&labels, seed)?;
    Ok(keep.into_iter().map(|i| rows[i].clone()).collect())
}

/// Promoted/discouraged/total counts per language, reporting layout.
pub fn summarize_by_language(
    questions: &[Question],
    labels: &[QualityLabel],
) -> Vec<(Language, usize, usize)> {
    let mut per: BTreeMap<Language, (usize, usize)> = BTreeMap::new();
    for (q, l) in questions.iter().zip(labels) {
        let entry = per.entry(q.language).or_insert((0, 0));
        match l {
            QualityLabel::Promoted => entry.0 += 1,
            QualityLabel::Discouraged => entry.1 += 1,
        }
    }
    per.into_iter().map(|(lang, (p, d))| (lang, p, d)).collect()
}

/// Parsability-style helper: fraction of a slice as a percentage.
pub fn percentage<F: Real>(part: usize, whole: usize) -> F {
    count::<F>(part) / count::<F>(whole) * count::<F>(100)
}
