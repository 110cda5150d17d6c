use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use flate2::read::MultiGzDecoder;

use super::{Genome, Sequence};
use crate::error::{Error, Result};

const LINE_WIDTH: usize = 60;

/// Parses a (optionally gzip-compressed) FASTA file. Lowercase bases are
/// soft-masked; non-ACGT letters become `N`.
pub fn parse_fasta(path: impl AsRef<Path>) -> Result<Genome> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = BufReader::new(file);
    let gz = {
        let head = reader.fill_buf().map_err(|e| Error::io(path, e))?;
        head.starts_with(&[0x1f, 0x8b]) || path.extension().is_some_and(|e| e == "gz" || e == "bgz")
    };
    let input: Box<dyn BufRead> =
        if gz { Box::new(BufReader::new(MultiGzDecoder::new(reader))) } else { Box::new(reader) };
    parse_reader(input).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn parse_fasta_str(text: &str) -> Result<Genome> {
    parse_reader(text.as_bytes())
}

struct Pending {
    name: String,
    header_line: usize,
    bases: Vec<u8>,
    mask: Vec<bool>,
}

fn finish(p: Pending, out: &mut Vec<Sequence>) -> Result<()> {
    if p.bases.is_empty() {
        return Err(Error::Fasta { line: p.header_line, msg: format!("sequence `{}` is empty", p.name) });
    }
    out.push(Sequence { name: p.name, bases: p.bases, mask: p.mask });
    Ok(())
}

fn parse_reader<R: Read>(reader: R) -> Result<Genome> {
    let mut reader = BufReader::new(reader);
    let mut sequences = Vec::new();
    let mut seen = HashSet::new();
    let mut current: Option<Pending> = None;
    let mut line = Vec::new();
    let mut lineno = 0usize;
    loop {
        line.clear();
        let n = reader.read_until(b'\n', &mut line).map_err(|e| Error::io("<fasta>", e))?;
        if n == 0 {
            break;
        }
        lineno += 1;
        while matches!(line.last(), Some(b'\n' | b'\r')) {
            line.pop();
        }
        if line.is_empty() {
            continue;
        }
        if line[0] == b'>' {
            if let Some(p) = current.take() {
                finish(p, &mut sequences)?;
            }
            let header = std::str::from_utf8(&line[1..])
                .map_err(|_| Error::Fasta { line: lineno, msg: "header is not valid UTF-8".into() })?;
            let name = header.split_whitespace().next().unwrap_or("");
            if name.is_empty() {
                return Err(Error::Fasta { line: lineno, msg: "empty sequence name".into() });
            }
            if !seen.insert(name.to_string()) {
                return Err(Error::DuplicateName(name.to_string()));
            }
            current = Some(Pending {
                name: name.to_string(),
                header_line: lineno,
                bases: Vec::new(),
                mask: Vec::new(),
            });
            continue;
        }
        let Some(p) = current.as_mut() else {
            return Err(Error::Fasta { line: lineno, msg: "sequence data before first header".into() });
        };
        for &c in &line {
            if c.is_ascii_whitespace() {
                continue;
            }
            if !c.is_ascii_alphabetic() {
                return Err(Error::Fasta { line: lineno, msg: format!("invalid character {:?}", c as char) });
            }
            p.mask.push(c.is_ascii_lowercase());
            p.bases.push(match c.to_ascii_uppercase() {
                b @ (b'A' | b'C' | b'G' | b'T') => b,
                _ => b'N',
            });
        }
    }
    if let Some(p) = current.take() {
        finish(p, &mut sequences)?;
    }
    Genome::new(sequences)
}

/// Writes `genome` as FASTA, lowercasing masked bases.
pub fn write_fasta(genome: &Genome, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let io = |e| Error::io(path, e);
    for seq in genome.sequences() {
        writeln!(w, ">{}", seq.name).map_err(io)?;
        let text: Vec<u8> = seq
            .bases
            .iter()
            .zip(&seq.mask)
            .map(|(&b, &m)| if m { b.to_ascii_lowercase() } else { b })
            .collect();
        for chunk in text.chunks(LINE_WIDTH) {
            w.write_all(chunk).map_err(io)?;
            w.write_all(b"\n").map_err(io)?;
        }
    }
    w.flush().map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn soft_mask_from_lowercase() {
        let g = parse_fasta_str(">s\nACgtN").unwrap();
        let s = g.sequence(0);
        assert_eq!(s.bases, b"ACGTN");
        assert_eq!(s.mask, vec![false, false, true, true, false]);
    }

    #[test]
    fn duplicate_names_rejected() {
        assert!(matches!(
            parse_fasta_str(">a\nAC\n>a\nGT"),
            Err(Error::DuplicateName(n)) if n == "a"
        ));
    }

    #[test]
    fn iupac_codes_become_n() {
        let g = parse_fasta_str(">s\nRYK").unwrap();
        assert_eq!(g.sequence(0).bases, b"NNN");
        assert_eq!(g.sequence(0).mask, vec![false; 3]);
        let g = parse_fasta_str(">s\nryk").unwrap();
        assert_eq!(g.sequence(0).bases, b"NNN");
        assert_eq!(g.sequence(0).mask, vec![true; 3]);
    }

    #[test]
    fn empty_sequence_names_line() {
        match parse_fasta_str(">a\nAC\n>b\n>c\nGG") {
            Err(Error::Fasta { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_header_and_orphan_data() {
        assert!(matches!(parse_fasta_str(">\nAC"), Err(Error::Fasta { line: 1, .. })));
        assert!(matches!(parse_fasta_str("AC\n>a\nA"), Err(Error::Fasta { line: 1, .. })));
        assert!(matches!(parse_fasta_str(">a\nA-C"), Err(Error::Fasta { line: 2, .. })));
    }

    #[test]
    fn multiline_and_crlf() {
        let g = parse_fasta_str(">x desc\r\nAC\r\n\r\ngt\r\n>y\nA\n").unwrap();
        assert_eq!(g.num_sequences(), 2);
        assert_eq!(g.sequence(0).name, "x");
        assert_eq!(g.sequence(0).bases, b"ACGT");
    }

    #[test]
    fn gzip_and_roundtrip() {
        use flate2::write::GzEncoder;
        use flate2::Compression;
        let dir = tempfile::tempdir().unwrap();
        let g = parse_fasta_str(">a\nACGTacgtNN\n>b\nttGG\n").unwrap();
        let plain = dir.path().join("g.fa");
        write_fasta(&g, &plain).unwrap();
        assert_eq!(parse_fasta(&plain).unwrap(), g);

        let gz = dir.path().join("g.fa.gz");
        let mut enc = GzEncoder::new(File::create(&gz).unwrap(), Compression::default());
        enc.write_all(&std::fs::read(&plain).unwrap()).unwrap();
        enc.finish().unwrap();
        assert_eq!(parse_fasta(&gz).unwrap(), g);
    }
}
