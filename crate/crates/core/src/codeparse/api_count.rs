//! API-usage count as a proxy for code understandability.
//!
//! Counts total occurrences of the qualified-invocation pattern
//! `identifier . identifier (`; bare calls like `foo(` are usually local
//! functions and are deliberately not counted.

use std::sync::OnceLock;

use regex::Regex;

fn pattern() -> &'static Regex {
    static PATTERN: OnceLock<Regex> = OnceLock::new();
    PATTERN.get_or_init(|| {
        Regex::new(r"[A-Za-z_][A-Za-z0-9_]*\s*\.\s*[A-Za-z_][A-Za-z0-9_]*\s*\(")
            .expect("static regex compiles")
    })
}

/// Total qualified invocations in a source text.
///
/// The left identifier must start a maximal alphanumeric-underscore run,
/// checked against the preceding character since the pattern itself
/// cannot look behind. A preceding '.' is fine: of a qualifier chain
/// `x.y.z(` exactly the trailing `y.z(` counts.
pub fn count_api_calls(source: &str) -> u64 {
    pattern()
        .find_iter(source)
        .filter(|m| {
            source[..m.start()]
                .chars()
                .next_back()
                .is_none_or(|c| !(c.is_alphanumeric() || c == '_'))
        })
        .count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_qualified_invocations() {
        assert_eq!(count_api_calls("list.add(x); map.get(k);"), 2);
    }

    #[test]
    fn plain_code_has_none() {
        assert_eq!(count_api_calls("x = 5"), 0);
        assert_eq!(count_api_calls("foo(bar)"), 0);
    }

    #[test]
    fn nested_invocations_both_count() {
        assert_eq!(count_api_calls("a.b(c.d())"), 2);
    }

    #[test]
    fn total_occurrences_not_distinct() {
        assert_eq!(count_api_calls("a.b(); a.b(); a.b();"), 3);
    }

    #[test]
    fn chained_qualifiers_count_once_per_invocation_pattern() {
        // only "y.z(" fits identifier.identifier(
        assert_eq!(count_api_calls("x.y.z()"), 1);
    }

    #[test]
    fn whitespace_between_parts_is_allowed() {
        assert_eq!(count_api_calls("obj . method ()"), 1);
        assert_eq!(count_api_calls("obj.\n    method()"), 1);
    }

    #[test]
    fn additive_over_joined_snippets() {
        let a = "list.add(x);";
        let b = "map.get(k); set.has(v);";
        let joined = format!("{a}\n{b}");
        assert_eq!(
            count_api_calls(&joined),
            count_api_calls(a) + count_api_calls(b)
        );
    }

    #[test]
    fn digit_prefixed_runs_are_not_identifiers() {
        assert_eq!(count_api_calls("9x.y("), 0);
    }
}
