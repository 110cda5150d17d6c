use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{Interval, SdRecord, Strand};
use crate::error::{Error, Result};

/// Renders records as BEDPE text, sorted by `(mate1, mate2)`.
///
/// Columns: chrom1 start1 end1 chrom2 start2 end2 name score strand1 strand2,
/// then alignment_length edit_distance error_total error_mutation error_gap
/// kimura jukes_cantor cigar masked_fraction1 masked_fraction2.
pub fn render_bedpe(records: &[SdRecord]) -> String {
    let mut sorted: Vec<&SdRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.cmp_key(b));
    let mut out = String::new();
    for (i, r) in sorted.iter().enumerate() {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\tsd{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            r.mate1.seq_name,
            r.mate1.start,
            r.mate1.end,
            r.mate2.seq_name,
            r.mate2.start,
            r.mate2.end,
            i + 1,
            r.score(),
            r.mate1.strand.as_char(),
            r.mate2.strand.as_char(),
            r.alignment_length,
            r.edit_distance,
            r.error_total,
            r.error_mutation,
            r.error_gap,
            r.kimura,
            r.jukes_cantor,
            r.cigar,
            r.masked_fraction1,
            r.masked_fraction2,
        ));
    }
    out
}

pub fn write_bedpe(records: &[SdRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    w.write_all(render_bedpe(records).as_bytes()).and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

/// Reads records written by [`write_bedpe`]. Lines starting with `#` are skipped.
pub fn read_bedpe(path: impl AsRef<Path>) -> Result<Vec<SdRecord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(parse_line(&line, i + 1)?);
    }
    Ok(out)
}

fn parse_line(line: &str, lineno: usize) -> Result<SdRecord> {
    let cols: Vec<&str> = line.split('\t').collect();
    let err = |msg: String| Error::Bedpe { line: lineno, msg };
    if cols.len() < 18 {
        return Err(err(format!("expected at least 18 columns, found {}", cols.len())));
    }
    let num = |i: usize| -> Result<usize> {
        cols[i].parse().map_err(|_| err(format!("column {}: bad integer {:?}", i + 1, cols[i])))
    };
    let frac = |i: usize| -> Result<f64> {
        cols[i].parse().map_err(|_| err(format!("column {}: bad number {:?}", i + 1, cols[i])))
    };
    let strand = |i: usize| -> Result<Strand> {
        cols[i]
            .chars()
            .next()
            .and_then(Strand::from_char)
            .ok_or_else(|| err(format!("column {}: bad strand {:?}", i + 1, cols[i])))
    };
    let mate1 = Interval::new(cols[0], num(1)?, num(2)?, strand(8)?);
    let mate2 = Interval::new(cols[3], num(4)?, num(5)?, strand(9)?);
    if mate1.start >= mate1.end || mate2.start >= mate2.end {
        return Err(err("empty interval".into()));
    }
    let cigar = cols[17].parse().map_err(|e| err(format!("cigar: {e}")))?;
    let (mf1, mf2) = if cols.len() >= 20 { (frac(18)?, frac(19)?) } else { (0.0, 0.0) };
    Ok(SdRecord {
        mate1,
        mate2,
        alignment_length: num(10)?,
        edit_distance: num(11)?,
        error_total: frac(12)?,
        error_mutation: frac(13)?,
        error_gap: frac(14)?,
        kimura: frac(15)?,
        jukes_cantor: frac(16)?,
        cigar,
        masked_fraction1: mf1,
        masked_fraction2: mf2,
    })
}
