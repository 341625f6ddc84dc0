//! Report emission: comparison tables, feature rankings, classifier
//! performance tables, per-language summaries, and static SVG boxplots.

use std::fmt::Write as _;
use std::path::Path;

use crate::corpus::Language;
use crate::error::{Error, Result};
use crate::ml::{EvalReport, FeatureRanking};
use crate::num::Real;
use crate::stats::{quartile_boundaries, ComparisonResult, QuartileOutcome};

pub const COMPARISON_HEADER: [&str; 14] = [
    "metric",
    "scope",
    "n_promoted",
    "n_discouraged",
    "median_promoted",
    "median_discouraged",
    "u",
    "z",
    "p",
    "cliffs_d",
    "magnitude",
    "significant",
    "dropped_na",
    "comparable",
];

pub const EVAL_HEADER: [&str; 10] = [
    "model",
    "features",
    "dataset",
    "promoted_precision",
    "promoted_recall",
    "promoted_f1",
    "discouraged_precision",
    "discouraged_recall",
    "discouraged_f1",
    "accuracy",
];

pub const FOLD_HEADER: [&str; 11] = [
    "model",
    "features",
    "dataset",
    "fold",
    "promoted_precision",
    "promoted_recall",
    "promoted_f1",
    "discouraged_precision",
    "discouraged_recall",
    "discouraged_f1",
    "accuracy",
];

pub const SUMMARY_HEADER: [&str; 4] = ["language", "promoted", "discouraged", "total"];

fn csv_error(path: &Path, e: csv::Error) -> Error {
    Error::Malformed {
        what: "csv",
        line: 0,
        message: format!("{}: {e}", path.display()),
    }
}

/// One row per metric for the overall test plus one per quartile band.
pub fn write_comparison_csv<F: Real>(
    path: &Path,
    results: &[ComparisonResult<F>],
) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    writer
        .write_record(COMPARISON_HEADER)
        .map_err(|e| csv_error(path, e))?;
    for r in results {
        writer
            .write_record([
                r.metric_name.clone(),
                "overall".to_string(),
                r.n_a.to_string(),
                r.n_b.to_string(),
                r.median_a.to_string(),
                r.median_b.to_string(),
                r.u.to_string(),
                r.z.to_string(),
                r.p.to_string(),
                r.cliffs_d.to_string(),
                r.magnitude.to_string(),
                if r.significant() { "1" } else { "0" }.to_string(),
                r.dropped_na.to_string(),
                "1".to_string(),
            ])
            .map_err(|e| csv_error(path, e))?;
        for (band, outcome) in r.quartiles.iter().enumerate() {
            let scope = format!("Q{}", band + 1);
            let record = match outcome {
                QuartileOutcome::Compared {
                    p,
                    d,
                    magnitude,
                    n_a,
                    n_b,
                } => [
                    r.metric_name.clone(),
                    scope,
                    n_a.to_string(),
                    n_b.to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    p.to_string(),
                    d.to_string(),
                    magnitude.to_string(),
                    if crate::stats::is_significant(*p) { "1" } else { "0" }.to_string(),
                    String::new(),
                    "1".to_string(),
                ],
                QuartileOutcome::NotComparable { n_a, n_b } => [
                    r.metric_name.clone(),
                    scope,
                    n_a.to_string(),
                    n_b.to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    "0".to_string(),
                ],
            };
            writer.write_record(record).map_err(|e| csv_error(path, e))?;
        }
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// rank,feature,<score_label>
pub fn write_ranking_csv<F: Real>(
    path: &Path,
    ranking: &FeatureRanking<F>,
    score_label: &str,
) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    writer
        .write_record(["rank", "feature", score_label])
        .map_err(|e| csv_error(path, e))?;
    for (position, (feature, score)) in ranking.entries.iter().enumerate() {
        writer
            .write_record([
                (position + 1).to_string(),
                feature.clone(),
                score.to_string(),
            ])
            .map_err(|e| csv_error(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Classifier performance table: one row per model x feature-set x
/// dataset-variant with per-class precision/recall/F1 and accuracy.
pub fn write_eval_csv<F: Real>(path: &Path, reports: &[(String, EvalReport<F>)]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    writer
        .write_record(EVAL_HEADER)
        .map_err(|e| csv_error(path, e))?;
    for (model, report) in reports {
        writer
            .write_record([
                model.clone(),
                report.feature_set.clone(),
                report.variant.to_string(),
                report.promoted.precision.to_string(),
                report.promoted.recall.to_string(),
                report.promoted.f1.to_string(),
                report.discouraged.precision.to_string(),
                report.discouraged.recall.to_string(),
                report.discouraged.f1.to_string(),
                report.accuracy.to_string(),
            ])
            .map_err(|e| csv_error(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Per-fold breakdown of the same reports.
pub fn write_fold_csv<F: Real>(path: &Path, reports: &[(String, EvalReport<F>)]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    writer
        .write_record(FOLD_HEADER)
        .map_err(|e| csv_error(path, e))?;
    for (model, report) in reports {
        for fold in &report.folds {
            writer
                .write_record([
                    model.clone(),
                    report.feature_set.clone(),
                    report.variant.to_string(),
                    fold.fold.to_string(),
                    fold.promoted.precision.to_string(),
                    fold.promoted.recall.to_string(),
                    fold.promoted.f1.to_string(),
                    fold.discouraged.precision.to_string(),
                    fold.discouraged.recall.to_string(),
                    fold.discouraged.f1.to_string(),
                    fold.accuracy.to_string(),
                ])
                .map_err(|e| csv_error(path, e))?;
        }
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Question counts per language and label, with a total row.
pub fn write_summary_csv(path: &Path, rows: &[(Language, usize, usize)]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    writer
        .write_record(SUMMARY_HEADER)
        .map_err(|e| csv_error(path, e))?;
    let mut total_promoted = 0usize;
    let mut total_discouraged = 0usize;
    for (language, promoted, discouraged) in rows {
        total_promoted += promoted;
        total_discouraged += discouraged;
        writer
            .write_record([
                language.to_string(),
                promoted.to_string(),
                discouraged.to_string(),
                (promoted + discouraged).to_string(),
            ])
            .map_err(|e| csv_error(path, e))?;
    }
    writer
        .write_record([
            "Total".to_string(),
            total_promoted.to_string(),
            total_discouraged.to_string(),
            (total_promoted + total_discouraged).to_string(),
        ])
        .map_err(|e| csv_error(path, e))?;
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

struct FiveNumber {
    min: f64,
    q1: f64,
    median: f64,
    q3: f64,
    max: f64,
}

fn five_number<F: Real>(values: &[F]) -> Option<FiveNumber> {
    if values.is_empty() {
        return None;
    }
    let mut sorted: Vec<f64> = values.iter().map(|v| v.to_f64().expect("finite")).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let (q1, median, q3) = if sorted.len() >= 4 {
        quartile_boundaries(&sorted)
    } else {
        let mid = sorted[sorted.len() / 2];
        (sorted[0], mid, sorted[sorted.len() - 1])
    };
    Some(FiveNumber {
        min: sorted[0],
        q1,
        median,
        q3,
        max: sorted[sorted.len() - 1],
    })
}

/// Render a static self-contained boxplot with one box per series.
/// No timestamps or external references, so output is reproducible.
pub fn boxplot_svg<F: Real>(title: &str, series: &[(&str, &[F])]) -> String {
    const WIDTH: f64 = 480.0;
    const HEIGHT: f64 = 320.0;
    const MARGIN_LEFT: f64 = 60.0;
    const MARGIN_RIGHT: f64 = 20.0;
    const MARGIN_TOP: f64 = 40.0;
    const MARGIN_BOTTOM: f64 = 50.0;

    let summaries: Vec<(&str, Option<FiveNumber>)> = series
        .iter()
        .map(|(name, values)| (*name, five_number(values)))
        .collect();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (_, s) in &summaries {
        if let Some(s) = s {
            lo = lo.min(s.min);
            hi = hi.max(s.max);
        }
    }
    if !lo.is_finite() || !hi.is_finite() {
        lo = 0.0;
        hi = 1.0;
    }
    if hi - lo < 1e-12 {
        hi = lo + 1.0;
    }
    let span = hi - lo;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let y = |v: f64| MARGIN_TOP + plot_h * (1.0 - (v - lo) / span);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="22" text-anchor="middle" font-family="sans-serif" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape_xml(title)
    );
    // y axis with four ticks
    let _ = writeln!(
        svg,
        r#"<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP}" x2="{MARGIN_LEFT}" y2="{}" stroke="black"/>"#,
        MARGIN_TOP + plot_h
    );
    for tick in 0..=4 {
        let value = lo + span * (tick as f64) / 4.0;
        let ty = y(value);
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{ty:.2}" x2="{MARGIN_LEFT}" y2="{ty:.2}" stroke="black"/>"#,
            MARGIN_LEFT - 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="10">{}</text>"#,
            MARGIN_LEFT - 8.0,
            ty + 3.5,
            format_tick(value)
        );
    }

    let slot = plot_w / series.len().max(1) as f64;
    for (i, (name, summary)) in summaries.iter().enumerate() {
        let cx = MARGIN_LEFT + slot * (i as f64 + 0.5);
        let half_box = (slot * 0.25).min(40.0);
        if let Some(s) = summary {
            let _ = writeln!(
                svg,
                r#"<line x1="{cx:.2}" y1="{:.2}" x2="{cx:.2}" y2="{:.2}" stroke="black"/>"#,
                y(s.min),
                y(s.q1)
            );
            let _ = writeln!(
                svg,
                r#"<line x1="{cx:.2}" y1="{:.2}" x2="{cx:.2}" y2="{:.2}" stroke="black"/>"#,
                y(s.q3),
                y(s.max)
            );
            for value in [s.min, s.max] {
                let _ = writeln!(
                    svg,
                    r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
                    cx - half_box / 2.0,
                    y(value),
                    cx + half_box / 2.0,
                    y(value)
                );
            }
            let _ = writeln!(
                svg,
                r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#d8d8d8" stroke="black"/>"##,
                cx - half_box,
                y(s.q3),
                half_box * 2.0,
                (y(s.q1) - y(s.q3)).max(0.5)
            );
            let _ = writeln!(
                svg,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="2"/>"#,
                cx - half_box,
                y(s.median),
                cx + half_box,
                y(s.median)
            );
        } else {
            let _ = writeln!(
                svg,
                r#"<text x="{cx:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="10">no data</text>"#,
                MARGIN_TOP + plot_h / 2.0
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{cx:.2}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="11">{}</text>"#,
            HEIGHT - MARGIN_BOTTOM + 18.0,
            escape_xml(name)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn write_boxplot_svg<F: Real>(
    path: &Path,
    title: &str,
    series: &[(&str, &[F])],
) -> Result<()> {
    std::fs::write(path, boxplot_svg(title, series)).map_err(|e| Error::io(path, e))
}

fn format_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let magnitude = v.abs();
    if magnitude >= 100.0 {
        format!("{v:.0}")
    } else if magnitude >= 1.0 {
        format!("{v:.2}")
    } else {
        format!("{v:.4}")
    }
}

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
