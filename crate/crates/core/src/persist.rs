//! CSV persistence for corpora, tag tables, and metric tables, plus the
//! per-run metadata file.
//!
//! All files are UTF-8 with LF endings and a fixed header row. Metric
//! cells that are not applicable are written as empty cells. Floats use
//! the shortest round-trip representation, so rereading a table restores
//! the exact values.

use std::path::Path;
use std::str::FromStr;

use crate::corpus::{Date, Language, QualityLabel, Question, TagFrequencyTable};
use crate::error::{Error, Result};
use crate::metrics::{MetricVector, Polarity, TeNormalization};
use crate::num::{real, Real};

pub const CORPUS_HEADER: [&str; 9] = [
    "id",
    "label",
    "language",
    "title",
    "body",
    "tags",
    "score",
    "answer_count",
    "creation_date",
];

pub const METRICS_HEADER: [&str; 18] = [
    "id",
    "label",
    "language",
    "has_code",
    "tq",
    "tr",
    "cr",
    "tcr",
    "tcc",
    "cruse",
    "cua",
    "te",
    "me",
    "sp",
    "sp_pos",
    "sp_neg",
    "te_raw",
    "diagnostics",
];

pub const TAG_TABLE_HEADER: [&str; 2] = ["tag", "count"];

fn csv_error(path: &Path, e: csv::Error) -> Error {
    Error::Malformed {
        what: "csv",
        line: 0,
        message: format!("{}: {e}", path.display()),
    }
}

/// Write the filtered, labeled corpus.
pub fn write_corpus_csv(
    path: &Path,
    questions: &[Question],
    labels: &[QualityLabel],
) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    writer
        .write_record(CORPUS_HEADER)
        .map_err(|e| csv_error(path, e))?;
    for (q, label) in questions.iter().zip(labels) {
        writer
            .write_record([
                q.id.to_string(),
                label.to_string(),
                q.language.to_string(),
                q.title.clone(),
                q.body.clone(),
                q.tags.join(";"),
                q.score.to_string(),
                q.answer_count.to_string(),
                q.creation_date.to_string(),
            ])
            .map_err(|e| csv_error(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Read a persisted corpus back.
pub fn read_corpus_csv(path: &Path) -> Result<(Vec<Question>, Vec<QualityLabel>)> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    expect_header(path, &mut reader, &CORPUS_HEADER)?;
    let mut questions = Vec::new();
    let mut labels = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let field = |i: usize| -> &str { record.get(i).unwrap_or("") };
        let malformed = |message: String| Error::Malformed {
            what: "corpus csv",
            line: row + 2,
            message,
        };
        let tags: Vec<String> = field(5)
            .split(';')
            .filter(|t| !t.is_empty())
            .map(str::to_string)
            .collect();
        questions.push(Question {
            id: field(0).parse().map_err(|e| malformed(format!("id: {e}")))?,
            title: field(3).to_string(),
            body: field(4).to_string(),
            tags,
            score: field(6)
                .parse()
                .map_err(|e| malformed(format!("score: {e}")))?,
            answer_count: field(7)
                .parse()
                .map_err(|e| malformed(format!("answer_count: {e}")))?,
            creation_date: Date::from_str(field(8)).map_err(malformed)?,
            language: Language::from_str(field(2)).map_err(malformed)?,
        });
        labels.push(QualityLabel::from_str(field(1)).map_err(malformed)?);
    }
    Ok((questions, labels))
}

/// Write the tag frequency table, sorted by tag.
pub fn write_tag_table_csv(path: &Path, table: &TagFrequencyTable) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    writer
        .write_record(TAG_TABLE_HEADER)
        .map_err(|e| csv_error(path, e))?;
    for (tag, count) in table.iter() {
        writer
            .write_record([tag, &count.to_string()])
            .map_err(|e| csv_error(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

pub fn read_tag_table_csv(path: &Path) -> Result<TagFrequencyTable> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    expect_header(path, &mut reader, &TAG_TABLE_HEADER)?;
    let mut counts = std::collections::BTreeMap::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let tag = record.get(0).unwrap_or("").to_string();
        let count: u64 = record
            .get(1)
            .unwrap_or("")
            .parse()
            .map_err(|e| Error::Malformed {
                what: "tag table csv",
                line: row + 2,
                message: format!("count: {e}"),
            })?;
        counts.insert(tag, count);
    }
    Ok(TagFrequencyTable::from_counts(counts))
}

fn opt_to_cell<F: Real>(v: Option<F>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn cell_to_opt<F: Real>(s: &str, line: usize) -> Result<Option<F>> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse::<f64>()
        .map(|v| Some(real(v)))
        .map_err(|e| Error::Malformed {
            what: "metrics csv",
            line,
            message: format!("bad number {s:?}: {e}"),
        })
}

/// Write the per-question metric table; one row per question id, N/A as
/// empty cells.
pub fn write_metrics_csv<F: Real>(path: &Path, vectors: &[MetricVector<F>]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    writer
        .write_record(METRICS_HEADER)
        .map_err(|e| csv_error(path, e))?;
    for v in vectors {
        writer
            .write_record([
                v.question_id.to_string(),
                v.label.map(|l| l.to_string()).unwrap_or_default(),
                v.language.to_string(),
                if v.has_code { "1" } else { "0" }.to_string(),
                opt_to_cell(v.tq),
                opt_to_cell(v.tr),
                opt_to_cell(v.cr),
                opt_to_cell(v.tcr),
                opt_to_cell(v.tcc),
                v.cruse.map(|p| p.to_string()).unwrap_or_default(),
                v.cua.map(|c| c.to_string()).unwrap_or_default(),
                opt_to_cell(v.te),
                opt_to_cell(v.me),
                v.sp.map(|p| p.to_string()).unwrap_or_default(),
                v.sp_pos.to_string(),
                v.sp_neg.to_string(),
                opt_to_cell(v.te_raw),
                v.diagnostics.join("; "),
            ])
            .map_err(|e| csv_error(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

pub fn read_metrics_csv<F: Real>(path: &Path) -> Result<Vec<MetricVector<F>>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    expect_header(path, &mut reader, &METRICS_HEADER)?;
    let mut vectors = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = row + 2;
        let field = |i: usize| -> &str { record.get(i).unwrap_or("") };
        let malformed = |message: String| Error::Malformed {
            what: "metrics csv",
            line,
            message,
        };
        let label = match field(1) {
            "" => None,
            s => Some(QualityLabel::from_str(s).map_err(malformed)?),
        };
        let sp = match field(13) {
            "" => None,
            s => Some(Polarity::from_str(s).map_err(malformed)?),
        };
        let cruse = match field(9) {
            "" => None,
            s => Some(s.parse().map_err(malformed)?),
        };
        let cua = match field(10) {
            "" => None,
            s => Some(s.parse::<u64>().map_err(|e| malformed(format!("cua: {e}")))?),
        };
        let diagnostics = match field(17) {
            "" => Vec::new(),
            s => s.split("; ").map(str::to_string).collect(),
        };
        vectors.push(MetricVector {
            question_id: field(0)
                .parse()
                .map_err(|e| malformed(format!("id: {e}")))?,
            label,
            language: Language::from_str(field(2)).map_err(malformed)?,
            tq: cell_to_opt(field(4), line)?,
            tr: cell_to_opt(field(5), line)?,
            cr: cell_to_opt(field(6), line)?,
            tcr: cell_to_opt(field(7), line)?,
            tcc: cell_to_opt(field(8), line)?,
            cruse,
            cua,
            te: cell_to_opt(field(11), line)?,
            me: cell_to_opt(field(12), line)?,
            sp,
            sp_pos: field(14)
                .parse()
                .map_err(|e| malformed(format!("sp_pos: {e}")))?,
            sp_neg: field(15)
                .parse()
                .map_err(|e| malformed(format!("sp_neg: {e}")))?,
            te_raw: cell_to_opt(field(16), line)?,
            has_code: field(3) == "1",
            diagnostics,
        });
    }
    Ok(vectors)
}

/// Metadata of one metrics run, needed to reproduce single-question
/// predictions: the topic-entropy normalization bounds and the seed.
#[derive(Debug, Clone, PartialEq)]
pub struct RunMeta<F> {
    pub te_norm: TeNormalization<F>,
    pub seed: u64,
    pub rows: usize,
}

pub fn write_run_meta<F: Real>(path: &Path, meta: &RunMeta<F>) -> Result<()> {
    let text = format!(
        "te_min={}\nte_max={}\nseed={}\nrows={}\n",
        meta.te_norm.min, meta.te_norm.max, meta.seed, meta.rows
    );
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_run_meta<F: Real>(path: &Path) -> Result<RunMeta<F>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut te_min = None;
    let mut te_max = None;
    let mut seed = None;
    let mut rows = None;
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let malformed = |message: String| Error::Malformed {
            what: "run meta",
            line: idx + 1,
            message,
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| malformed("expected key=value".to_string()))?;
        match key {
            "te_min" => {
                te_min = Some(
                    value
                        .parse::<f64>()
                        .map_err(|e| malformed(format!("te_min: {e}")))?,
                )
            }
            "te_max" => {
                te_max = Some(
                    value
                        .parse::<f64>()
                        .map_err(|e| malformed(format!("te_max: {e}")))?,
                )
            }
            "seed" => {
                seed = Some(
                    value
                        .parse::<u64>()
                        .map_err(|e| malformed(format!("seed: {e}")))?,
                )
            }
            "rows" => {
                rows = Some(
                    value
                        .parse::<usize>()
                        .map_err(|e| malformed(format!("rows: {e}")))?,
                )
            }
            other => return Err(malformed(format!("unknown key {other:?}"))),
        }
    }
    match (te_min, te_max, seed, rows) {
        (Some(min), Some(max), Some(seed), Some(rows)) => Ok(RunMeta {
            te_norm: TeNormalization {
                min: real(min),
                max: real(max),
            },
            seed,
            rows,
        }),
        _ => Err(Error::Malformed {
            what: "run meta",
            line: 0,
            message: "missing te_min/te_max/seed/rows".to_string(),
        }),
    }
}

fn expect_header<R: std::io::Read>(
    path: &Path,
    reader: &mut csv::Reader<R>,
    expected: &[&str],
) -> Result<()> {
    let headers = reader.headers().map_err(|e| csv_error(path, e))?;
    let got: Vec<&str> = headers.iter().collect();
    if got != expected {
        return Err(Error::Malformed {
            what: "csv",
            line: 1,
            message: format!(
                "{}: header mismatch: expected [{}], got [{}]",
                path.display(),
                expected.join(","),
                got.join(",")
            ),
        });
    }
    Ok(())
}
