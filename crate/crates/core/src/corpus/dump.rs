//! The `dump_posts` corpus format: rows of the standard data-dump Posts
//! file.
//!
//! Each row is an XML element `<row .../>`. Only the attributes `Id`,
//! `PostTypeId` (must equal 1), `Title`, `Body`, `Tags`, `Score`,
//! `AnswerCount`, and `CreationDate` are read. The `Tags` attribute uses
//! the `&lt;tag1&gt;&lt;tag2&gt;` encoding.

use super::html::decode_entities;
use super::{validate_question, Date, Language, Question};

/// Parse one dump row. Returns `Ok(None)` for rows that are valid but not
/// questions (wrapper elements, answers), and `Err` for malformed rows.
pub fn parse_row(line: &str) -> Result<Option<Question>, String> {
    let trimmed = line.trim();
    if !trimmed.starts_with('<') {
        return Err("row does not start with '<'".to_string());
    }
    // wrapper elements of the dump file are not rows
    if !trimmed.starts_with("<row") {
        return Ok(None);
    }

    let attrs = Attrs::parse(trimmed)?;
    match attrs.get("PostTypeId") {
        Some("1") => {}
        Some(_) => return Ok(None), // answers, wiki entries, ...
        None => return Err("row has no PostTypeId".to_string()),
    }

    let id = attrs
        .required("Id")?
        .parse::<u64>()
        .map_err(|e| format!("Id: {e}"))?;
    let title = decode_entities(attrs.get("Title").unwrap_or(""));
    let body = decode_entities(attrs.get("Body").unwrap_or(""));
    let tags = parse_tags(attrs.get("Tags").unwrap_or(""));
    let score = attrs
        .required("Score")?
        .parse::<i64>()
        .map_err(|e| format!("Score: {e}"))?;
    let answer_count = attrs
        .get("AnswerCount")
        .unwrap_or("0")
        .parse::<u32>()
        .map_err(|e| format!("AnswerCount: {e}"))?;
    let creation_date = attrs.required("CreationDate")?.parse::<Date>()?;

    let language = Language::from_tags(&tags);
    validate_question(Question {
        id,
        title,
        body,
        tags,
        score,
        answer_count,
        creation_date,
        language,
    })
    .map(Some)
}

/// `Tags` attribute: XML-unescape, then split the `<a><b>` list.
fn parse_tags(raw: &str) -> Vec<String> {
    let decoded = decode_entities(raw);
    let mut tags = Vec::new();
    let mut rest = decoded.as_str();
    while let Some(open) = rest.find('<') {
        let Some(close) = rest[open..].find('>') else {
            break;
        };
        let tag = &rest[open + 1..open + close];
        if !tag.is_empty() {
            tags.push(tag.to_lowercase());
        }
        rest = &rest[open + close + 1..];
    }
    tags
}

struct Attrs<'a> {
    pairs: Vec<(&'a str, &'a str)>,
}

impl<'a> Attrs<'a> {
    /// Minimal XML attribute scanner for a single `<row .../>` element.
    fn parse(row: &'a str) -> Result<Attrs<'a>, String> {
        let inner = row
            .strip_prefix("<row")
            .ok_or_else(|| "not a row element".to_string())?;
        let mut pairs = Vec::new();
        let mut rest = inner;
        loop {
            rest = rest.trim_start();
            if rest.is_empty() || rest.starts_with("/>") || rest.starts_with('>') {
                break;
            }
            let eq = rest
                .find('=')
                .ok_or_else(|| format!("attribute without '=' near {:?}", truncate(rest)))?;
            let name = rest[..eq].trim();
            let after = &rest[eq + 1..];
            let mut chars = after.chars();
            let quote = chars
                .next()
                .filter(|c| *c == '"' || *c == '\'')
                .ok_or_else(|| format!("unquoted attribute value near {:?}", truncate(after)))?;
            let value_start = 1;
            let end = after[value_start..]
                .find(quote)
                .ok_or_else(|| format!("unterminated attribute near {:?}", truncate(after)))?;
            pairs.push((name, &after[value_start..value_start + end]));
            rest = &after[value_start + end + 1..];
        }
        Ok(Attrs { pairs })
    }

    fn get(&self, name: &str) -> Option<&'a str> {
        self.pairs
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| *v)
    }

    fn required(&self, name: &str) -> Result<&'a str, String> {
        self.get(name)
            .ok_or_else(|| format!("missing attribute {name:?}"))
    }
}

fn truncate(s: &str) -> String {
    s.chars().take(24).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const ROW: &str = r#"<row Id="9" PostTypeId="1" CreationDate="2013-05-02T10:00:00.000" Score="12" Title="How do I sort a list?" Body="&lt;p&gt;I have a list&lt;/p&gt;&lt;pre&gt;&lt;code&gt;xs.sort()&lt;/code&gt;&lt;/pre&gt;" Tags="&lt;python&gt;&lt;list&gt;" AnswerCount="3" />"#;

    #[test]
    fn question_row_parses() {
        let q = parse_row(ROW).unwrap().unwrap();
        assert_eq!(q.id, 9);
        assert_eq!(q.title, "How do I sort a list?");
        assert_eq!(q.body, "<p>I have a list</p><pre><code>xs.sort()</code></pre>");
        assert_eq!(q.tags, vec!["python", "list"]);
        assert_eq!(q.score, 12);
        assert_eq!(q.answer_count, 3);
        assert_eq!(q.creation_date, Date::new(2013, 5, 2));
        assert_eq!(q.language, Language::Python);
    }

    #[test]
    fn answer_rows_are_skipped_without_warning() {
        let row = r#"<row Id="10" PostTypeId="2" CreationDate="2013-05-02T10:05:00" Score="4" Body="use sort" />"#;
        assert_eq!(parse_row(row).unwrap(), None);
    }

    #[test]
    fn wrapper_elements_are_not_rows() {
        assert_eq!(parse_row("<posts>").unwrap(), None);
        assert_eq!(parse_row(r#"<?xml version="1.0"?>"#), Ok(None));
    }

    #[test]
    fn malformed_rows_error() {
        assert!(parse_row(r#"<row Id="x" PostTypeId="1" Score="1" CreationDate="2013-05-02" Tags="&lt;java&gt;" />"#).is_err());
        assert!(parse_row(r#"<row Id="3" PostTypeId="1" Score="1" CreationDate="2013-05-02" Tags="&lt;java&gt;" AnswerCount="oops" />"#).is_err());
        assert!(parse_row("no tag").is_err());
    }

    #[test]
    fn body_entities_decode_once() {
        // dump attribute "&amp;lt;" is the body text "&lt;", i.e. a literal
        // "<" once the body HTML itself is scanned
        let row = r#"<row Id="4" PostTypeId="1" CreationDate="2014-01-01T00:00:00" Score="2" Title="t" Body="a &amp;lt; b" Tags="&lt;java&gt;" AnswerCount="1" />"#;
        let q = parse_row(row).unwrap().unwrap();
        assert_eq!(q.body, "a &lt; b");
    }
}
