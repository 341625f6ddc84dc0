//! The `record_lines` corpus format.
//!
//! One question per line: tab-separated `key=value` pairs with fields named
//! exactly `id`, `title`, `body`, `tags` (semicolon-joined), `score`,
//! `answer_count`, `creation_date`. Values escape `\\`, `\t`, `\n` as
//! backslash sequences. UTF-8 with LF line endings.

use super::{validate_question, Date, Language, Question};

const REQUIRED: [&str; 7] = [
    "id",
    "title",
    "body",
    "tags",
    "score",
    "answer_count",
    "creation_date",
];

/// Parse one record line into a question.
pub fn parse_line(line: &str) -> Result<Question, String> {
    let mut id = None;
    let mut title = None;
    let mut body = None;
    let mut tags: Option<Vec<String>> = None;
    let mut score = None;
    let mut answer_count = None;
    let mut creation_date = None;

    for field in line.split('\t') {
        let (key, raw) = field
            .split_once('=')
            .ok_or_else(|| format!("field {field:?} is not key=value"))?;
        let value = unescape(raw)?;
        match key {
            "id" => id = Some(value.parse::<u64>().map_err(|e| format!("id: {e}"))?),
            "title" => title = Some(value),
            "body" => body = Some(value),
            "tags" => {
                tags = Some(
                    value
                        .split(';')
                        .filter(|t| !t.is_empty())
                        .map(|t| t.to_lowercase())
                        .collect(),
                )
            }
            "score" => score = Some(value.parse::<i64>().map_err(|e| format!("score: {e}"))?),
            "answer_count" => {
                answer_count = Some(
                    value
                        .parse::<u32>()
                        .map_err(|e| format!("answer_count: {e}"))?,
                )
            }
            "creation_date" => creation_date = Some(value.parse::<Date>()?),
            other => return Err(format!("unknown field {other:?}")),
        }
    }

    for key in REQUIRED {
        let present = match key {
            "id" => id.is_some(),
            "title" => title.is_some(),
            "body" => body.is_some(),
            "tags" => tags.is_some(),
            "score" => score.is_some(),
            "answer_count" => answer_count.is_some(),
            "creation_date" => creation_date.is_some(),
            _ => unreachable!(),
        };
        if !present {
            return Err(format!("missing field {key:?}"));
        }
    }

    let tags = tags.expect("checked");
    let language = Language::from_tags(&tags);
    validate_question(Question {
        id: id.expect("checked"),
        title: title.expect("checked"),
        body: body.expect("checked"),
        tags,
        score: score.expect("checked"),
        answer_count: answer_count.expect("checked"),
        creation_date: creation_date.expect("checked"),
        language,
    })
}

/// Render a question as one record line.
pub fn format_line(q: &Question) -> String {
    format!(
        "id={}\ttitle={}\tbody={}\ttags={}\tscore={}\tanswer_count={}\tcreation_date={}",
        q.id,
        escape(&q.title),
        escape(&q.body),
        escape(&q.tags.join(";")),
        q.score,
        q.answer_count,
        q.creation_date,
    )
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(s: &str) -> Result<String, String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(ch) = chars.next() {
        if ch != '\\' {
            out.push(ch);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some(other) => return Err(format!("bad escape \\{other}")),
            None => return Err("dangling backslash".to_string()),
        }
    }
    Ok(out)
}
