use std::path::Path;
use std::process::{Command, Output};

fn sdscan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdscan")).args(args).output().expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn simulate_search_score_stats() {
    let dir = tempfile::tempdir().unwrap();
    let fasta = dir.path().join("g.fa");
    let truth = dir.path().join("truth.bedpe");
    let calls = dir.path().join("calls.bedpe");

    let out = sdscan(&[
        "simulate",
        "--fasta",
        p(&fasta),
        "--truth",
        p(&truth),
        "--total-len",
        "200000",
        "--sds",
        "4",
        "--max-len",
        "4000",
        "--max-delta",
        "0.1",
        "--seed",
        "3",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(std::fs::read_to_string(&truth).unwrap().lines().count(), 4);

    let out = sdscan(&["search", p(&fasta), "--threads", "2", "--out", p(&calls)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!std::fs::read_to_string(&calls).unwrap().is_empty());

    let out = sdscan(&["score", p(&calls), p(&truth), "--width", "0.1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows.len(), 1, "{text}");
    assert_eq!(rows[0][2], "4");
    assert!(rows[0][3].parse::<usize>().unwrap() >= 3, "{text}");

    let out = sdscan(&["stats", p(&calls)]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("metric\tvalue\n"));
    let covered: u64 = text.lines().find_map(|l| l.strip_prefix("covered_bp\t")).unwrap().parse().unwrap();
    assert!(covered > 0);
    assert!(text.contains("error_lo\terror_hi\ttotal\tmutation\tgap"));
}

#[test]
fn search_writes_to_stdout_without_out() {
    let dir = tempfile::tempdir().unwrap();
    let fasta = dir.path().join("g.fa");
    std::fs::write(&fasta, ">a\nACGTACGTTGCA\n").unwrap();
    let out = sdscan(&["search", p(&fasta)]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
}

#[test]
fn missing_input_fails_with_diagnostic() {
    let out = sdscan(&["search", "/nonexistent/genome.fa"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("sdscan:") && err.contains("genome.fa"), "{err}");
}

#[test]
fn invalid_model_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let fasta = dir.path().join("g.fa");
    std::fs::write(&fasta, ">a\nACGT\n").unwrap();
    let out = sdscan(&["search", p(&fasta), "--delta", "0.1", "--delta-m", "0.3"]);
    assert!(!out.status.success());
    assert!(!out.stderr.is_empty());
}

#[test]
fn malformed_bedpe_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let calls = dir.path().join("bad.bedpe");
    std::fs::write(&calls, "chr1\t10\n").unwrap();
    let out = sdscan(&["stats", p(&calls)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("sdscan:"));
}
