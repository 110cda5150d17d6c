use std::fs;
use std::path::Path;

use super::{score_detection, TruthRecord};
use crate::error::{Error, Result};
use crate::genome_io::{Interval, SdRecord, Strand};

/// Truth pairs as BEDPE: chrom1 start1 end1 chrom2 start2 end2 name score
/// strand1 strand2, then the scripted δ, δ_M and δ_G. Mutation scripts are
/// not written.
pub fn render_truth(truths: &[TruthRecord]) -> String {
    let mut out = String::new();
    for (i, t) in truths.iter().enumerate() {
        let (a, b) = (&t.original, &t.copy);
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\ttruth{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            a.seq_name,
            a.start,
            a.end,
            b.seq_name,
            b.start,
            b.end,
            i + 1,
            (1000.0 * (1.0 - t.scripted_delta())).round() as i64,
            a.strand.as_char(),
            b.strand.as_char(),
            t.scripted_delta(),
            t.scripted_delta_m,
            t.scripted_delta_g,
        ));
    }
    out
}

/// Parses [`render_truth`] output; the returned records have empty scripts.
pub fn parse_truth(text: &str) -> Result<Vec<TruthRecord>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::Bedpe { line: i + 1, msg };
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() < 13 {
            return Err(err(format!("expected 13 truth columns, found {}", cols.len())));
        }
        let num = |c: usize| -> Result<usize> {
            cols[c].parse().map_err(|_| err(format!("column {}: bad integer {:?}", c + 1, cols[c])))
        };
        let frac = |c: usize| -> Result<f64> {
            cols[c].parse().map_err(|_| err(format!("column {}: bad number {:?}", c + 1, cols[c])))
        };
        let strand = |c: usize| -> Result<Strand> {
            cols[c]
                .chars()
                .next()
                .and_then(Strand::from_char)
                .ok_or_else(|| err(format!("column {}: bad strand {:?}", c + 1, cols[c])))
        };
        out.push(TruthRecord {
            original: Interval::new(cols[0], num(1)?, num(2)?, strand(8)?),
            copy: Interval::new(cols[3], num(4)?, num(5)?, strand(9)?),
            scripted_delta_m: frac(11)?,
            scripted_delta_g: frac(12)?,
            mutation_script: Vec::new(),
        });
    }
    Ok(out)
}

pub fn write_truth(truths: &[TruthRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, render_truth(truths)).map_err(|e| Error::io(path, e))
}

pub fn read_truth(path: impl AsRef<Path>) -> Result<Vec<TruthRecord>> {
    let path = path.as_ref();
    parse_truth(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
}

/// Detection counts for truths whose scripted δ falls in `(lo, hi]`
/// (the first bucket also takes δ = 0).
#[derive(Clone, Debug, PartialEq)]
pub struct BucketScore {
    pub lo: f64,
    pub hi: f64,
    pub total: usize,
    pub detected: usize,
}

impl BucketScore {
    pub fn sensitivity(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.detected as f64 / self.total as f64
        }
    }
}

/// Sensitivity per δ bucket of width `width`; empty buckets are omitted.
pub fn score_by_delta(truths: &[TruthRecord], calls: &[SdRecord], width: f64) -> Vec<BucketScore> {
    let bucket = |d: f64| ((d - 1e-9) / width).ceil().max(1.0) as usize - 1;
    let n = truths.iter().map(|t| bucket(t.scripted_delta()) + 1).max().unwrap_or(0);
    let mut rows: Vec<BucketScore> = (0..n)
        .map(|b| BucketScore { lo: b as f64 * width, hi: (b + 1) as f64 * width, total: 0, detected: 0 })
        .collect();
    for t in truths {
        let row = &mut rows[bucket(t.scripted_delta())];
        row.total += 1;
        if score_detection(t, calls) {
            row.detected += 1;
        }
    }
    rows.retain(|r| r.total > 0);
    rows
}
