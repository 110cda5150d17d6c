//! Potential-region checkpoints: a tab-separated region dump plus a
//! fingerprint of the parameters that produced it.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::genome_io::{Interval, Strand};
use crate::search::PotentialRegion;

const REGIONS: &str = "regions.tsv";
const FINGERPRINT: &str = "params.txt";

pub fn write_regions(out: &mut impl Write, regions: &[PotentialRegion]) -> std::io::Result<()> {
    for r in regions {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.region1.seq_name,
            r.region1.start,
            r.region1.end,
            r.region2.seq_name,
            r.region2.start,
            r.region2.end,
            r.strand.as_char(),
            r.estimate
        )?;
    }
    Ok(())
}

pub fn parse_regions(input: impl BufRead) -> Result<Vec<PotentialRegion>> {
    let mut out = Vec::new();
    for (n, line) in input.lines().enumerate() {
        let line = line.map_err(|e| Error::Checkpoint(e.to_string()))?;
        if line.is_empty() {
            continue;
        }
        let bad = || Error::Checkpoint(format!("malformed region on line {}", n + 1));
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 8 {
            return Err(bad());
        }
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
        let strand = f[6].chars().next().and_then(Strand::from_char).ok_or_else(bad)?;
        out.push(PotentialRegion {
            region1: Interval::new(f[0], num(f[1])?, num(f[2])?, Strand::Forward),
            region2: Interval::new(f[3], num(f[4])?, num(f[5])?, strand),
            strand,
            estimate: f[7].parse().map_err(|_| bad())?,
            padded: true,
        });
    }
    Ok(out)
}

/// Regions saved under `dir` for exactly this `fingerprint`, if any.
pub fn load(dir: &Path, fingerprint: &str) -> Result<Option<Vec<PotentialRegion>>> {
    let (fp, regions) = (dir.join(FINGERPRINT), dir.join(REGIONS));
    if !fp.exists() || !regions.exists() {
        return Ok(None);
    }
    let saved = fs::read_to_string(&fp).map_err(|e| Error::io(&fp, e))?;
    if saved != fingerprint {
        log::info!("checkpoint in {} has different parameters; recomputing", dir.display());
        return Ok(None);
    }
    let file = fs::File::open(&regions).map_err(|e| Error::io(&regions, e))?;
    parse_regions(BufReader::new(file)).map(Some)
}

pub fn save(dir: &Path, fingerprint: &str, regions: &[PotentialRegion]) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join(REGIONS);
    let tmp = dir.join(format!("{REGIONS}.tmp"));
    let file = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    let mut w = BufWriter::new(file);
    write_regions(&mut w, regions).and_then(|_| w.flush()).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))?;
    let fp = dir.join(FINGERPRINT);
    fs::write(&fp, fingerprint).map_err(|e| Error::io(&fp, e))
}
