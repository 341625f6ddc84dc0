//! Code-side metrics: snippet merging, per-language parsability,
//! feature-based code readability, and API-count understandability.

pub mod api_count;
pub mod backend;
pub mod features;

pub use api_count::count_api_calls;
pub use backend::{csharp_backend, java_backend, javascript_backend, python_backend};
pub use features::{
    code_readability, extract_readability_features, readability_from_features,
    ReadabilityFeatures, ReadabilityWeights, FEATURE_NAMES,
};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::corpus::{Language, QuestionContent};
use crate::error::{Error, Result};
use crate::num::Real;

/// All code blocks of one question merged into a single source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergedSnippet {
    pub language: Language,
    /// Blocks joined by single newlines, document order. Trailing newline
    /// runs are trimmed from each block so no blank line is introduced.
    pub source: String,
    pub block_count: usize,
}

/// Merge a question's code blocks; errors when there are none.
pub fn merge_snippets(content: &QuestionContent, language: Language) -> Result<MergedSnippet> {
    if content.code_blocks.is_empty() {
        return Err(Error::NoCodeBlocks);
    }
    let source = content
        .code_blocks
        .iter()
        .map(|b| b.trim_end_matches(['\n', '\r']))
        .collect::<Vec<_>>()
        .join("\n");
    Ok(MergedSnippet {
        language,
        source,
        block_count: content.code_blocks.len(),
    })
}

/// Parse verdict of a snippet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parsability {
    Parsable,
    Unparsable,
}

impl Parsability {
    pub fn name(&self) -> &'static str {
        match self {
            Parsability::Parsable => "parsable",
            Parsability::Unparsable => "unparsable",
        }
    }
}

impl fmt::Display for Parsability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Parsability {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "parsable" => Ok(Parsability::Parsable),
            "unparsable" => Ok(Parsability::Unparsable),
            other => Err(format!("unknown parsability {other:?}")),
        }
    }
}

/// One syntax problem found by a backend.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseIssue {
    /// 1-based line of the problem.
    pub line: usize,
    pub message: String,
}

/// Outcome of a strict parse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseVerdict {
    pub parsability: Parsability,
    pub issues: Vec<ParseIssue>,
}

impl ParseVerdict {
    pub fn is_parsable(&self) -> bool {
        self.parsability == Parsability::Parsable
    }
}

/// A pluggable strict parser for one language. Implementations must be
/// callable from many threads concurrently.
pub trait ParserBackend: Send + Sync {
    fn language(&self) -> Language;

    /// Full-translation-unit parse: parsable iff the parse is complete
    /// with zero syntax errors. Must be deterministic per (language,
    /// source).
    fn check(&self, source: &str) -> ParseVerdict;
}

/// Backend registry keyed by language.
#[derive(Default)]
pub struct BackendRegistry {
    backends: BTreeMap<Language, Box<dyn ParserBackend>>,
}

impl BackendRegistry {
    pub fn new() -> BackendRegistry {
        BackendRegistry::default()
    }

    /// Registry with the shipped backend for each of the four languages.
    pub fn with_default_backends() -> BackendRegistry {
        let mut registry = BackendRegistry::new();
        registry.register(Box::new(csharp_backend()));
        registry.register(Box::new(java_backend()));
        registry.register(Box::new(javascript_backend()));
        registry.register(Box::new(python_backend()));
        registry
    }

    pub fn register(&mut self, backend: Box<dyn ParserBackend>) {
        self.backends.insert(backend.language(), backend);
    }

    pub fn get(&self, language: Language) -> Option<&dyn ParserBackend> {
        self.backends.get(&language).map(|b| b.as_ref())
    }

    /// Strict parse of a merged snippet via the registered backend.
    pub fn check_parsable(&self, snippet: &MergedSnippet) -> Result<ParseVerdict> {
        let backend = self
            .get(snippet.language)
            .ok_or(Error::NoBackend(snippet.language))?;
        Ok(backend.check(&snippet.source))
    }
}

/// Parsable share of a slice of verdicts, as a percentage.
pub fn parsability_rate<F: Real>(verdicts: &[Parsability]) -> Result<F> {
    if verdicts.is_empty() {
        return Err(Error::EmptySample { which: "verdicts" });
    }
    let parsable = verdicts
        .iter()
        .filter(|v| **v == Parsability::Parsable)
        .count();
    Ok(crate::corpus::percentage(parsable, verdicts.len()))
}
