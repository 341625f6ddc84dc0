//! Shipped parser backends, one per language, built on tree-sitter
//! grammars driven in strict mode.
//!
//! A snippet is parsable only when the grammar produces a complete tree
//! with no error and no missing node. Two strictness rules tighten the
//! grammars where they are laxer than the languages' reference parsers:
//!
//! * Java: the grammar accepts bare statements at the top level; a
//!   compilation unit only allows declarations, so anything else at the
//!   top level is reported as a syntax error. (C# is not restricted this
//!   way: top-level statements are part of the language.)
//! * Python: the grammar accepts `def f():` followed by an unindented
//!   line by producing an empty block; an empty block is a syntax error.
//!
//! A fresh parser is created per call, so every backend is safe to use
//! from many threads concurrently.

use tree_sitter::{Node, Parser};

use super::{ParseIssue, ParseVerdict, Parsability, ParserBackend};
use crate::corpus::Language;

enum StrictRule {
    None,
    /// Only declaration kinds allowed as top-level children.
    DeclarationsOnly(&'static [&'static str]),
    /// Blocks must contain at least one non-comment statement.
    NonEmptyBlocks,
}

pub struct TreeSitterBackend {
    language: Language,
    grammar: tree_sitter::Language,
    rule: StrictRule,
}

const JAVA_TOP_LEVEL: [&str; 9] = [
    "package_declaration",
    "import_declaration",
    "class_declaration",
    "interface_declaration",
    "enum_declaration",
    "annotation_type_declaration",
    "record_declaration",
    "module_declaration",
    ";",
];

pub fn csharp_backend() -> TreeSitterBackend {
    TreeSitterBackend {
        language: Language::CSharp,
        grammar: tree_sitter_c_sharp::LANGUAGE.into(),
        rule: StrictRule::None,
    }
}

pub fn java_backend() -> TreeSitterBackend {
    TreeSitterBackend {
        language: Language::Java,
        grammar: tree_sitter_java::LANGUAGE.into(),
        rule: StrictRule::DeclarationsOnly(&JAVA_TOP_LEVEL),
    }
}

pub fn javascript_backend() -> TreeSitterBackend {
    TreeSitterBackend {
        language: Language::JavaScript,
        grammar: tree_sitter_javascript::LANGUAGE.into(),
        rule: StrictRule::None,
    }
}

pub fn python_backend() -> TreeSitterBackend {
    TreeSitterBackend {
        language: Language::Python,
        grammar: tree_sitter_python::LANGUAGE.into(),
        rule: StrictRule::NonEmptyBlocks,
    }
}

impl ParserBackend for TreeSitterBackend {
    fn language(&self) -> Language {
        self.language
    }

    fn check(&self, source: &str) -> ParseVerdict {
        let mut parser = Parser::new();
        parser
            .set_language(&self.grammar)
            .expect("shipped grammar matches the linked tree-sitter version");
        let mut issues = Vec::new();
        match parser.parse(source, None) {
            Some(tree) => {
                collect_issues(tree.root_node(), &mut issues);
                apply_rule(&self.rule, tree.root_node(), &mut issues);
            }
            None => issues.push(ParseIssue {
                line: 1,
                message: "parser produced no tree".to_string(),
            }),
        }
        ParseVerdict {
            parsability: if issues.is_empty() {
                Parsability::Parsable
            } else {
                Parsability::Unparsable
            },
            issues,
        }
    }
}

fn collect_issues(root: Node<'_>, issues: &mut Vec<ParseIssue>) {
    let mut cursor = root.walk();
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        if node.is_error() {
            issues.push(ParseIssue {
                line: node.start_position().row + 1,
                message: "syntax error".to_string(),
            });
            continue; // children of an error region add no information
        }
        if node.is_missing() {
            issues.push(ParseIssue {
                line: node.start_position().row + 1,
                message: format!("missing {}", node.kind()),
            });
            continue;
        }
        if node.has_error() {
            for child in node.children(&mut cursor) {
                stack.push(child);
            }
        }
    }
}

fn apply_rule(rule: &StrictRule, root: Node<'_>, issues: &mut Vec<ParseIssue>) {
    match rule {
        StrictRule::None => {}
        StrictRule::DeclarationsOnly(allowed) => {
            let mut cursor = root.walk();
            for child in root.named_children(&mut cursor) {
                let kind = child.kind();
                if kind.ends_with("comment") || allowed.contains(&kind) {
                    continue;
                }
                issues.push(ParseIssue {
                    line: child.start_position().row + 1,
                    message: format!("{kind} is not allowed at the top level of a compilation unit"),
                });
            }
        }
        StrictRule::NonEmptyBlocks => {
            let mut cursor = root.walk();
            let mut stack = vec![root];
            while let Some(node) = stack.pop() {
                if node.kind() == "block" {
                    let statements = node
                        .named_children(&mut cursor)
                        .filter(|c| !c.kind().ends_with("comment"))
                        .count();
                    if statements == 0 {
                        issues.push(ParseIssue {
                            line: node.start_position().row + 1,
                            message: "expected an indented block".to_string(),
                        });
                    }
                }
                for child in node.children(&mut cursor) {
                    stack.push(child);
                }
            }
        }
    }
}
