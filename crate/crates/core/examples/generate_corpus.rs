//! Write a synthetic demo corpus in the record_lines format.
//!
//! Usage: generate_corpus [PATH] [ROWS] [SEED]

use qscope_core::corpus::records::format_line;
use qscope_core::corpus::synthetic::{generate, SyntheticConfig};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let path = args
        .get(1)
        .map(String::as_str)
        .unwrap_or("synthetic_1000.records");
    let rows = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(1000);
    let seed = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(42);

    let config = SyntheticConfig {
        rows,
        seed,
        ..SyntheticConfig::default()
    };
    let mut out = String::with_capacity(rows * 400);
    for question in generate(&config) {
        out.push_str(&format_line(&question));
        out.push('\n');
    }
    std::fs::write(path, out).expect("write corpus file");
    println!("wrote {rows} records to {path}");
}
