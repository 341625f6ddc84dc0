//! Command-line behavior: exit codes, error messages, config handling.

use std::path::{Path, PathBuf};
use std::process::Output;

fn qscope(args: &[&str]) -> Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_qscope"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../assets/fixtures/synthetic_1000.records")
}

fn ingest_and_metrics(out: &Path) {
    let out = out.to_str().unwrap();
    let fixture = fixture();
    let status = qscope(&[
        "--out",
        out,
        "ingest",
        "--input",
        fixture.to_str().unwrap(),
        "--format",
        "record_lines",
    ]);
    assert!(status.status.success());
    assert!(qscope(&["--out", out, "metrics"]).status.success());
}

#[test]
fn empty_result_after_filters_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("zero.records");
    std::fs::write(
        &corpus,
        "id=1\ttitle=a\tbody=b\ttags=java\tscore=0\tanswer_count=1\tcreation_date=2015-01-01\n",
    )
    .unwrap();
    let output = qscope(&[
        "--out",
        dir.path().join("out").to_str().unwrap(),
        "ingest",
        "--input",
        corpus.to_str().unwrap(),
        "--format",
        "record_lines",
    ]);
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("no questions survived"), "{stderr}");
}

#[test]
fn row_warnings_do_not_change_the_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("warn.records");
    std::fs::write(
        &corpus,
        "id=1\ttitle=a\tbody=b\ttags=java\tscore=2\tanswer_count=1\tcreation_date=2015-01-01\n\
         garbage row\n",
    )
    .unwrap();
    let output = qscope(&[
        "--out",
        dir.path().join("out").to_str().unwrap(),
        "ingest",
        "--input",
        corpus.to_str().unwrap(),
        "--format",
        "record_lines",
    ]);
    assert!(output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("warning"), "{stderr}");
}

#[test]
fn metrics_before_ingest_fails_with_guidance() {
    let dir = tempfile::tempdir().unwrap();
    let output = qscope(&["--out", dir.path().to_str().unwrap(), "metrics"]);
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("ingest"), "{stderr}");
}

#[test]
fn predict_with_mismatched_features_names_both_sets() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    ingest_and_metrics(&out);
    // train on top4, then doctor the model file to claim different columns
    let status = qscope(&[
        "--out",
        out.to_str().unwrap(),
        "--features",
        "top4",
        "train",
        "--model",
        "gnb",
        "--folds",
        "5",
    ]);
    assert!(status.status.success());
    let model_path = out.join("model_gaussiannb.qsm");
    let doctored = std::fs::read_to_string(&model_path)
        .unwrap()
        .replace("features=te,tr,me,tcr", "features=te,tr");
    std::fs::write(&model_path, doctored).unwrap();

    let question = dir.path().join("question.records");
    std::fs::write(
        &question,
        "id=9\ttitle=sorting a vector\tbody=<p>how</p>\ttags=java\tscore=1\tanswer_count=1\tcreation_date=2015-01-01\n",
    )
    .unwrap();
    let output = qscope(&[
        "--out",
        out.to_str().unwrap(),
        "predict",
        "--model-file",
        model_path.to_str().unwrap(),
        "--question",
        question.to_str().unwrap(),
    ]);
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    // the dimension check fires with both sizes visible
    assert!(
        stderr.contains("model expects") || stderr.contains("features"),
        "{stderr}"
    );
}

#[test]
fn train_then_predict_returns_the_training_label() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    ingest_and_metrics(&out);
    let status = qscope(&[
        "--out",
        out.to_str().unwrap(),
        "--features",
        "top4",
        "train",
        "--model",
        "dt",
        "--folds",
        "5",
    ]);
    assert!(status.status.success());

    // row 2 of the fixture is a promoted training question
    let fixture_text = std::fs::read_to_string(fixture()).unwrap();
    let line = fixture_text.lines().nth(1).unwrap();
    let question = dir.path().join("question.records");
    std::fs::write(&question, format!("{line}\n")).unwrap();

    let output = qscope(&[
        "--out",
        out.to_str().unwrap(),
        "predict",
        "--model-file",
        out.join("model_decisiontree.qsm").to_str().unwrap(),
        "--question",
        question.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("predicted=Promoted"), "{stdout}");
    assert!(out.join("prediction.csv").exists());
}

#[test]
fn predict_handles_tags_missing_from_the_saved_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    ingest_and_metrics(&out);
    let status = qscope(&[
        "--out",
        out.to_str().unwrap(),
        "--features",
        "top4",
        "train",
        "--model",
        "dt",
        "--folds",
        "5",
    ]);
    assert!(status.status.success());
    let question = dir.path().join("question.records");
    std::fs::write(
        &question,
        "id=77\ttitle=some new frontier\tbody=<p>nothing seen before. totally new words here.</p>\ttags=java;never-seen-tag\tscore=1\tanswer_count=1\tcreation_date=2016-01-01\n",
    )
    .unwrap();
    let output = qscope(&[
        "--out",
        out.to_str().unwrap(),
        "predict",
        "--model-file",
        out.join("model_decisiontree.qsm").to_str().unwrap(),
        "--question",
        question.to_str().unwrap(),
    ]);
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("warning"), "missing-tag diagnostic expected: {stderr}");
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("predicted="), "{stdout}");
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("from_config");
    let config = dir.path().join("run.conf");
    std::fs::write(
        &config,
        format!(
            "out={}\ninput={}\nformat=record_lines\nseed=42\n",
            out.display(),
            fixture().display()
        ),
    )
    .unwrap();
    let output = qscope(&["--config", config.to_str().unwrap(), "ingest"]);
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    assert!(out.join("corpus.csv").exists());

    // a flag overrides the config value
    let other = dir.path().join("flag_wins");
    let output = qscope(&[
        "--config",
        config.to_str().unwrap(),
        "--out",
        other.to_str().unwrap(),
        "ingest",
    ]);
    assert!(output.status.success());
    assert!(other.join("corpus.csv").exists());
}

#[test]
fn language_filter_restricts_the_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let output = qscope(&[
        "--out",
        out.to_str().unwrap(),
        "--languages",
        "java,python",
        "ingest",
        "--input",
        fixture().to_str().unwrap(),
        "--format",
        "record_lines",
    ]);
    assert!(output.status.success());
    let summary = std::fs::read_to_string(out.join("ingest_summary.csv")).unwrap();
    assert!(summary.contains("Java"));
    assert!(!summary.contains("CSharp"));
}

#[test]
fn grid_search_emits_per_combination_scores() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    ingest_and_metrics(&out);
    let output = qscope(&[
        "--out",
        out.to_str().unwrap(),
        "--features",
        "top4",
        "--balanced",
        "train",
        "--model",
        "dt",
        "--folds",
        "5",
        "--grid",
    ]);
    assert!(
        output.status.success(),
        "{}",
        String::from_utf8_lossy(&output.stderr)
    );
    let scores = std::fs::read_to_string(out.join("grid_scores.csv")).unwrap();
    // 4 depths x 2 split minimums, plus the header
    assert_eq!(scores.lines().count(), 9);
    assert!(scores.starts_with("model,params,accuracy\n"));
    assert!(out.join("model_decisiontree.qsm").exists());
}

#[test]
fn ingest_summary_matches_a_hand_count() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("tiny.records");
    // 2 promoted + 1 discouraged java, 1 promoted python
    std::fs::write(
        &corpus,
        "id=1\ttitle=a\tbody=b\ttags=java\tscore=2\tanswer_count=1\tcreation_date=2015-01-01\n\
         id=2\ttitle=b\tbody=b\ttags=java;swing\tscore=4\tanswer_count=2\tcreation_date=2015-01-02\n\
         id=3\ttitle=c\tbody=b\ttags=java\tscore=-1\tanswer_count=1\tcreation_date=2015-01-03\n\
         id=4\ttitle=d\tbody=b\ttags=python\tscore=9\tanswer_count=1\tcreation_date=2015-01-04\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let output = qscope(&[
        "--out",
        out.to_str().unwrap(),
        "ingest",
        "--input",
        corpus.to_str().unwrap(),
        "--format",
        "record_lines",
    ]);
    assert!(output.status.success());
    let summary = std::fs::read_to_string(out.join("ingest_summary.csv")).unwrap();
    assert_eq!(
        summary,
        "language,promoted,discouraged,total\nJava,2,1,3\nPython,1,0,1\nTotal,3,1,4\n"
    );
}

#[test]
fn outputs_stay_inside_the_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("only_here");
    ingest_and_metrics(&out);
    let entries: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    assert_eq!(entries, vec!["only_here".to_string()]);
}
