//! Tolerant single-pass HTML scanner for question bodies.
//!
//! Dump bodies are frequently malformed, so this is not a strict parser:
//! unclosed tags auto-close at end of input, a `<` that does not open a
//! plausible tag is treated as literal text, and quotes inside tags are
//! honored so `>` inside an attribute value does not end the tag.
//!
//! Code blocks are the contents of `<code>` elements nested inside `<pre>`
//! blocks, in document order. Inline `<code>` (outside `<pre>`) stays in
//! the prose. Entities are decoded after tag scanning, so `&lt;b&gt;`
//! comes out as literal text and never as a tag.

/// Prose text and extracted code blocks of one body fragment.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Extracted {
    /// Body text with block code removed, tags stripped, entities decoded,
    /// whitespace collapsed to single spaces.
    pub prose: String,
    /// Entity-decoded contents of `<code>` under `<pre>`, document order.
    pub code_blocks: Vec<String>,
}

#[derive(Debug, PartialEq, Eq)]
enum Tag {
    Open(String),
    Close(String),
    SelfClose(String),
}

/// Scan one HTML fragment into prose and code blocks.
pub fn extract(body: &str) -> Extracted {
    let mut prose = String::with_capacity(body.len());
    let mut code_blocks = Vec::new();
    let mut code_buf = String::new();

    let mut pre_depth: usize = 0;
    // Depth of <code> nesting while inside a <pre>; outermost starts a block.
    let mut code_depth: usize = 0;

    let bytes = body.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'<' {
            if let Some((tag, next)) = scan_tag(body, i) {
                match tag {
                    Tag::Open(name) => match name.as_str() {
                        "pre" => pre_depth += 1,
                        "code" if pre_depth > 0 => {
                            code_depth += 1;
                        }
                        _ => {}
                    },
                    Tag::Close(name) => match name.as_str() {
                        "pre" => {
                            if code_depth > 0 {
                                // unclosed <code> auto-closes with its <pre>
                                code_depth = 0;
                                flush_code(&mut code_buf, &mut code_blocks);
                            }
                            pre_depth = pre_depth.saturating_sub(1);
                        }
                        "code" if code_depth > 0 => {
                            code_depth -= 1;
                            if code_depth == 0 {
                                flush_code(&mut code_buf, &mut code_blocks);
                            }
                        }
                        _ => {}
                    },
                    Tag::SelfClose(_) => {}
                }
                // a tag boundary separates words in the prose
                prose.push(' ');
                i = next;
                continue;
            }
        }
        let ch = body[i..].chars().next().expect("in-bounds char");
        if pre_depth > 0 && code_depth > 0 {
            code_buf.push(ch);
        } else {
            prose.push(ch);
        }
        i += ch.len_utf8();
    }
    if code_depth > 0 {
        flush_code(&mut code_buf, &mut code_blocks);
    }

    Extracted {
        prose: collapse_whitespace(&decode_entities(&prose)),
        code_blocks,
    }
}

fn flush_code(buf: &mut String, blocks: &mut Vec<String>) {
    blocks.push(decode_entities(buf));
    buf.clear();
}

/// Try to read a tag starting at `start` (which must index a `<`).
/// Returns the parsed tag and the index just past the closing `>`.
/// Returns `None` when the text is not a plausible tag, in which case
/// the `<` is literal text.
fn scan_tag(s: &str, start: usize) -> Option<(Tag, usize)> {
    let rest = &s[start + 1..];
    let mut chars = rest.char_indices();
    let (_, first) = chars.next()?;

    // comments and doctype-ish constructs: skip to the closing '>'
    if first == '!' {
        if let Some(stripped) = rest.strip_prefix("!--") {
            let end = stripped.find("-->")?;
            return Some((Tag::SelfClose(String::new()), start + 1 + 3 + end + 3));
        }
        let end = rest.find('>')?;
        return Some((Tag::SelfClose(String::new()), start + 1 + end + 1));
    }

    let closing = first == '/';
    let name_start = if closing { 1 } else { 0 };
    let name_first = rest[name_start..].chars().next()?;
    if !name_first.is_ascii_alphabetic() {
        return None;
    }

    let mut name = String::new();
    let mut pos = name_start;
    for ch in rest[name_start..].chars() {
        if ch.is_ascii_alphanumeric() {
            name.push(ch.to_ascii_lowercase());
            pos += ch.len_utf8();
        } else {
            break;
        }
    }

    // scan to the closing '>' honoring quoted attribute values
    let mut quote: Option<char> = None;
    let mut self_close = false;
    for (off, ch) in rest[pos..].char_indices() {
        match quote {
            Some(q) => {
                if ch == q {
                    quote = None;
                }
            }
            None => match ch {
                '"' | '\'' => quote = Some(ch),
                '/' => self_close = true,
                '>' => {
                    let end = start + 1 + pos + off + 1;
                    let tag = if closing {
                        Tag::Close(name)
                    } else if self_close {
                        Tag::SelfClose(name)
                    } else {
                        Tag::Open(name)
                    };
                    return Some((tag, end));
                }
                c if !c.is_whitespace() => self_close = false,
                _ => {}
            },
        }
    }
    // unterminated tag: swallow the rest of the input as tag text
    Some((
        if closing {
            Tag::Close(name)
        } else {
            Tag::Open(name)
        },
        s.len(),
    ))
}

/// Decode HTML entities: the named set used by the dump format plus
/// decimal and hexadecimal character references. Unknown entities are
/// left untouched.
pub fn decode_entities(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(amp) = rest.find('&') {
        out.push_str(&rest[..amp]);
        let tail = &rest[amp..];
        match decode_one(tail) {
            Some((decoded, used)) => {
                out.push(decoded);
                rest = &tail[used..];
            }
            None => {
                out.push('&');
                rest = &tail[1..];
            }
        }
    }
    out.push_str(rest);
    out
}

fn decode_one(s: &str) -> Option<(char, usize)> {
    debug_assert!(s.starts_with('&'));
    let semi = s[..s.len().min(12)].find(';')?;
    let body = &s[1..semi];
    let ch = match body {
        "lt" => '<',
        "gt" => '>',
        "amp" => '&',
        "quot" => '"',
        "apos" => '\'',
        "nbsp" => '\u{a0}',
        _ => {
            let num = body.strip_prefix('#')?;
            let code = if let Some(hex) = num.strip_prefix('x').or_else(|| num.strip_prefix('X')) {
                u32::from_str_radix(hex, 16).ok()?
            } else {
                num.parse::<u32>().ok()?
            };
            char::from_u32(code)?
        }
    };
    Some((ch, semi + 1))
}

/// Collapse every whitespace run to a single space and trim the ends.
pub fn collapse_whitespace(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut in_ws = true; // leading whitespace is dropped
    for ch in s.chars() {
        if ch.is_whitespace() {
            if !in_ws {
                out.push(' ');
                in_ws = true;
            }
        } else {
            out.push(ch);
            in_ws = false;
        }
    }
    if out.ends_with(' ') {
        out.pop();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_code_is_extracted_and_removed_from_prose() {
        let e = extract("<p>hi</p><pre><code>x=1</code></pre>");
        assert_eq!(e.prose, "hi");
        assert_eq!(e.code_blocks, vec!["x=1".to_string()]);
    }

    #[test]
    fn inline_code_stays_in_prose() {
        let e = extract("use <code>foo()</code> here");
        assert!(e.prose.contains("foo()"));
        assert_eq!(e.prose, "use foo() here");
        assert!(e.code_blocks.is_empty());
    }

    #[test]
    fn entities_decode_to_literal_text() {
        let e = extract("&lt;b&gt;");
        assert_eq!(e.prose, "<b>");
        assert!(e.code_blocks.is_empty());
    }

    #[test]
    fn entities_inside_code_blocks_decode() {
        let e = extract("<pre><code>if (a &lt; b &amp;&amp; c) {}</code></pre>");
        assert_eq!(e.code_blocks, vec!["if (a < b && c) {}".to_string()]);
    }

    #[test]
    fn multiple_blocks_keep_document_order() {
        let e = extract("<pre><code>first</code></pre><p>mid</p><pre><code>second</code></pre>");
        assert_eq!(e.code_blocks, vec!["first", "second"]);
        assert_eq!(e.prose, "mid");
    }

    #[test]
    fn two_code_elements_in_one_pre_are_two_blocks() {
        let e = extract("<pre><code>a</code><code>b</code></pre>");
        assert_eq!(e.code_blocks, vec!["a", "b"]);
    }

    #[test]
    fn unclosed_pre_code_auto_closes_at_end() {
        let e = extract("<p>text</p><pre><code>dangling");
        assert_eq!(e.prose, "text");
        assert_eq!(e.code_blocks, vec!["dangling"]);
    }

    #[test]
    fn pre_without_code_keeps_text_in_prose() {
        let e = extract("<pre>shown as-is</pre>");
        assert_eq!(e.prose, "shown as-is");
        assert!(e.code_blocks.is_empty());
    }

    #[test]
    fn literal_less_than_is_kept() {
        let e = extract("a < b and x <3 y");
        assert_eq!(e.prose, "a < b and x <3 y");
    }

    #[test]
    fn quoted_gt_inside_attribute_does_not_end_tag() {
        let e = extract(r#"<a href="q?x>1">link</a> tail"#);
        assert_eq!(e.prose, "link tail");
    }

    #[test]
    fn comments_are_dropped() {
        let e = extract("before<!-- <pre><code>not code</code></pre> -->after");
        assert_eq!(e.prose, "before after");
        assert!(e.code_blocks.is_empty());
    }

    #[test]
    fn numeric_entities_decode() {
        assert_eq!(decode_entities("&#65;&#x42;"), "AB");
        assert_eq!(decode_entities("&bogus; &"), "&bogus; &");
        assert_eq!(decode_entities("&amp;lt;"), "&lt;");
    }

    #[test]
    fn whitespace_collapses_to_single_spaces() {
        assert_eq!(collapse_whitespace("  a\n\n b\tc  "), "a b c");
        assert_eq!(collapse_whitespace("\u{a0}x\u{a0}\u{a0}y"), "x y");
    }

    #[test]
    fn nested_code_inside_block_is_one_block() {
        let e = extract("<pre><code>outer <code>inner</code> tail</code></pre>");
        assert_eq!(e.code_blocks, vec!["outer inner tail"]);
    }
}
