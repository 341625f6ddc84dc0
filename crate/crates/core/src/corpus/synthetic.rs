//! Deterministic synthetic corpus generator for demos and tests.
//!
//! The generated corpus carries the contrasts the analyses look for:
//! promoted questions use rare, specific tags and long explanatory prose;
//! discouraged questions use very common tags and short, hasty prose.
//! A small share of rows deliberately fails the default ingestion filters.

use rand::prelude::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Date, Language, Question};

#[derive(Debug, Clone)]
pub struct SyntheticConfig {
    pub rows: usize,
    pub seed: u64,
    /// Fraction of labelable rows that are promoted.
    pub promoted_fraction: f64,
    /// Fraction of rows carrying at least one code block.
    pub code_fraction: f64,
    /// Fraction of rows constructed to fail the default filters.
    pub rejected_fraction: f64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            rows: 1000,
            seed: 42,
            promoted_fraction: 0.7,
            code_fraction: 0.75,
            rejected_fraction: 0.03,
        }
    }
}

const LANG_TAGS: [(&str, Language); 4] = [
    ("c#", Language::CSharp),
    ("java", Language::Java),
    ("javascript", Language::JavaScript),
    ("python", Language::Python),
];

const COMMON_TAGS: [&str; 6] = ["arrays", "string", "loops", "debugging", "performance", "list"];

const TOPIC_HEADS: [&str; 10] = [
    "async", "cache", "stream", "socket", "regexp", "parser", "queue", "thread", "matrix",
    "widget",
];
const TOPIC_TAILS: [&str; 10] = [
    "pool", "index", "buffer", "merge", "alloc", "sync", "batch", "guard", "trace", "probe",
];

const DETAIL_SENTENCES: [&str; 8] = [
    "The serializer emits a malformed payload whenever the buffer wraps around its capacity boundary.",
    "I traced the allocation path through the profiler and the retained set keeps growing between checkpoints.",
    "The scheduler promotes stale entries because the comparator treats equal timestamps as unordered.",
    "After refactoring the iterator adapter the downstream consumer observes duplicated batches.",
    "The connection pool saturates under load and the watchdog restarts workers mid-transaction.",
    "Escaping the delimiter works locally but the continuous integration runner normalizes line endings first.",
    "The cache invalidation hook fires twice because the observer registers itself during replay.",
    "Profiling shows the quadratic merge dominating runtime once the partition exceeds the page size.",
];

const HASTY_BODIES: [&str; 6] = [
    "plz help my code dont work",
    "urgent!! why error here",
    "how fix this fast",
    "it not working help",
    "why broken? need answer now",
    "som1 fix dis 4 me quick",
];

const VALID_SNIPPETS: [(Language, &str); 8] = [
    (Language::CSharp, "using System;\nclass Demo {\n    static void Main() {\n        Console.WriteLine(\"ok\");\n    }\n}"),
    (Language::CSharp, "class Holder {\n    int count;\n    public int Next() { return count++; }\n}"),
    (Language::Java, "public class Demo {\n    public static void main(String[] args) {\n        System.out.println(\"ok\");\n    }\n}"),
    (Language::Java, "class Counter {\n    private int count;\n    int next() { return count++; }\n}"),
    (Language::JavaScript, "function demo(xs) {\n    return xs.map(function (x) { return x + 1; });\n}"),
    (Language::JavaScript, "const counter = { n: 0, next() { return this.n++; } };\nconsole.log(counter.next());"),
    (Language::Python, "def demo(xs):\n    return [x + 1 for x in xs]\n"),
    (Language::Python, "class Counter:\n    def __init__(self):\n        self.n = 0\n    def next(self):\n        self.n += 1\n        return self.n\n"),
];

const BROKEN_SNIPPETS: [(Language, &str); 8] = [
    (Language::CSharp, "class Demo {\n    static void Main( {\n        Console.WriteLine(\"ok\");\n}"),
    (Language::CSharp, "class Holder {\n    int Next() { return count +; }\n}"),
    (Language::Java, "public class Demo {\n    void run() {\n        int x = ;\n    }\n}"),
    (Language::Java, "System.out.println(\"bare statement\");"),
    (Language::JavaScript, "function demo(xs {\n    return xs.length;\n}"),
    (Language::JavaScript, "const x = { a: 1,, b: 2 };"),
    (Language::Python, "def demo(xs):\nreturn xs"),
    (Language::Python, "for x in range(3)\n    print(x)"),
];

/// Generate a deterministic corpus.
pub fn generate(config: &SyntheticConfig) -> Vec<Question> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let topics: Vec<String> = TOPIC_HEADS
        .iter()
        .flat_map(|h| TOPIC_TAILS.iter().map(move |t| format!("{h}-{t}")))
        .collect();

    let mut questions = Vec::with_capacity(config.rows);
    for i in 0..config.rows {
        let id = (i as u64) + 1;
        let (lang_tag, language) = LANG_TAGS[i % LANG_TAGS.len()];
        let rejected = rng.random::<f64>() < config.rejected_fraction;
        let promoted = rng.random::<f64>() < config.promoted_fraction;

        let mut tags = vec![lang_tag.to_string()];
        if promoted {
            while tags.len() < 3 {
                let t = topics.choose(&mut rng).expect("topic pool");
                if !tags.contains(t) {
                    tags.push(t.clone());
                }
            }
        } else {
            while tags.len() < 3 {
                let t = COMMON_TAGS.choose(&mut rng).expect("common pool");
                if !tags.iter().any(|x| x == t) {
                    tags.push(t.to_string());
                }
            }
        }

        let with_code = rng.random::<f64>() < config.code_fraction;
        let (title, body) = if promoted {
            promoted_content(&mut rng, language, with_code, &tags)
        } else {
            discouraged_content(&mut rng, language, with_code)
        };

        let score = if promoted {
            1 + rng.random_range(0..40)
        } else {
            -1 - rng.random_range(0..8)
        };
        let mut answer_count = 1 + rng.random_range(0..4);
        let mut creation_date = Date::new(2009 + (i as i32 % 9), 1 + (i as u32 % 12), 1 + (i as u32 % 28));
        let mut score = score;
        if rejected {
            match i % 3 {
                0 => score = 0,
                1 => answer_count = 0,
                _ => creation_date = Date::new(2019, 1, 1),
            }
        }

        questions.push(Question {
            id,
            title,
            body,
            tags,
            score,
            answer_count,
            creation_date,
            language,
        });
    }
    questions
}

fn promoted_content(
    rng: &mut ChaCha8Rng,
    language: Language,
    with_code: bool,
    tags: &[String],
) -> (String, String) {
    let topic = tags.get(1).cloned().unwrap_or_else(|| "buffer".to_string());
    let title = format!(
        "How should the {} handle {} overflow during {}?",
        topic.replace('-', " "),
        ["serializer", "scheduler", "iterator", "comparator"][rng.random_range(0..4)],
        ["replay", "startup", "shutdown", "compaction"][rng.random_range(0..4)],
    );
    let mut paragraphs = Vec::new();
    let n_sentences = 6 + rng.random_range(0..5);
    let mut body_text = String::new();
    for _ in 0..n_sentences {
        body_text.push_str(DETAIL_SENTENCES.choose(rng).expect("sentence pool"));
        body_text.push(' ');
    }
    if rng.random::<f64>() < 0.25 {
        body_text.push_str("Thanks, this community is great. ");
    }
    paragraphs.push(format!("<p>{}</p>", body_text.trim_end()));
    if with_code {
        let snippet = pick_snippet(rng, language, 0.5);
        paragraphs.push(format!("<pre><code>{}</code></pre>", encode(snippet)));
        let explained: Vec<&str> = snippet
            .split(|c: char| !c.is_alphanumeric())
            .filter(|t| t.len() > 2)
            .take(8)
            .collect();
        paragraphs.push(format!(
            "<p>The snippet above defines {} and I expected the call to {} to succeed.</p>",
            explained.first().copied().unwrap_or("it"),
            explained.get(1).copied().unwrap_or("run"),
        ));
    }
    (title, paragraphs.join(""))
}

fn discouraged_content(
    rng: &mut ChaCha8Rng,
    language: Language,
    with_code: bool,
) -> (String, String) {
    let title = ["help plz", "error", "not working", "urgent question"][rng.random_range(0..4)];
    let mut body = format!("<p>{}</p>", HASTY_BODIES.choose(rng).expect("hasty pool"));
    if rng.random::<f64>() < 0.2 {
        body.push_str("<p>this is terrible</p>");
    }
    if with_code {
        let snippet = pick_snippet(rng, language, 0.55);
        body.push_str(&format!("<pre><code>{}</code></pre>", encode(snippet)));
    }
    (title.to_string(), body)
}

fn pick_snippet(rng: &mut ChaCha8Rng, language: Language, valid_fraction: f64) -> &'static str {
    let pool: Vec<&'static str> = if rng.random::<f64>() < valid_fraction {
        VALID_SNIPPETS
            .iter()
            .filter(|(l, _)| *l == language)
            .map(|(_, s)| *s)
            .collect()
    } else {
        BROKEN_SNIPPETS
            .iter()
            .filter(|(l, _)| *l == language)
            .map(|(_, s)| *s)
            .collect()
    };
    pool.choose(rng).expect("snippet pool")
}

fn encode(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::FilterSpec;

    #[test]
    fn generation_is_deterministic() {
        let cfg = SyntheticConfig::default();
        let a = generate(&cfg);
        let b = generate(&cfg);
        assert_eq!(a, b);
        assert_eq!(a.len(), 1000);
    }

    #[test]
    fn both_classes_and_all_languages_survive_filters() {
        let qs = generate(&SyntheticConfig::default());
        let f = FilterSpec::default();
        let kept: Vec<_> = qs.iter().filter(|q| f.accepts(q)).collect();
        assert!(kept.len() > 900);
        assert!(kept.len() < 1000, "some rows must fail the filters");
        for lang in Language::ANALYZED {
            assert!(kept.iter().any(|q| q.language == lang && q.score > 0));
            assert!(kept.iter().any(|q| q.language == lang && q.score < 0));
        }
    }

    #[test]
    fn code_blocks_roundtrip_through_the_body_markup() {
        let qs = generate(&SyntheticConfig {
            rows: 40,
            ..SyntheticConfig::default()
        });
        let with_code = qs
            .iter()
            .map(crate::corpus::extract_content)
            .filter(|c| !c.code_blocks.is_empty())
            .count();
        assert!(with_code > 10);
    }
}
