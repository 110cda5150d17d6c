use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use rayon::prelude::*;

use super::winnow::winnow_masked;
use super::SketchParams;
use crate::error::{Error, Result};
use crate::genome_io::Genome;

const MAGIC: &[u8; 4] = b"SDIX";
const VERSION: u32 = 1;

/// Forward list of `(position, hash)` in global coordinates plus its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimizerIndex {
    positions: Vec<u64>,
    hashes: Vec<u64>,
    /// `(hash, position)` pairs sorted lexicographically.
    reverse: Vec<(u64, u64)>,
    params: SketchParams,
    seed_mode: bool,
}

/// Winnows every sequence and concatenates the results in global coordinates.
/// With `seed_mode`, minimizers whose k-mer is fully soft-masked are dropped.
pub fn build_index(genome: &Genome, params: &SketchParams, seed_mode: bool) -> MinimizerIndex {
    let per_seq: Vec<Vec<(u64, u64)>> = genome
        .sequences()
        .par_iter()
        .enumerate()
        .map(|(idx, seq)| {
            let offset = genome.offset(idx) as u64;
            winnow_masked(&seq.bases, &seq.mask, params)
                .into_iter()
                .filter(|m| !(seed_mode && m.masked))
                .map(|m| (offset + m.position as u64, m.hash))
                .collect()
        })
        .collect();
    let total = per_seq.iter().map(Vec::len).sum();
    let mut positions = Vec::with_capacity(total);
    let mut hashes = Vec::with_capacity(total);
    for (p, h) in per_seq.into_iter().flatten() {
        positions.push(p);
        hashes.push(h);
    }
    MinimizerIndex::from_parts(positions, hashes, *params, seed_mode)
}

impl MinimizerIndex {
    fn from_parts(positions: Vec<u64>, hashes: Vec<u64>, params: SketchParams, seed_mode: bool) -> Self {
        let mut reverse: Vec<(u64, u64)> = hashes.iter().copied().zip(positions.iter().copied()).collect();
        reverse.par_sort_unstable();
        MinimizerIndex { positions, hashes, reverse, params, seed_mode }
    }

    pub fn params(&self) -> &SketchParams {
        &self.params
    }

    pub fn seed_mode(&self) -> bool {
        self.seed_mode
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Forward entries as `(position, hash)`, sorted by position.
    pub fn forward(&self) -> impl ExactSizeIterator<Item = (usize, u64)> + '_ {
        self.positions.iter().zip(&self.hashes).map(|(&p, &h)| (p as usize, h))
    }

    pub fn entry(&self, i: usize) -> (usize, u64) {
        (self.positions[i] as usize, self.hashes[i])
    }

    /// Index of the first forward entry with position `>= pos`.
    pub fn lower_bound(&self, pos: usize) -> usize {
        self.positions.partition_point(|&p| (p as usize) < pos)
    }

    /// Hash of the minimizer starting exactly at `pos`, if any.
    pub fn at(&self, pos: usize) -> Option<u64> {
        let i = self.lower_bound(pos);
        (i < self.len() && self.positions[i] as usize == pos).then(|| self.hashes[i])
    }

    /// Forward entries with position in `[start, end)`.
    pub fn range(&self, start: usize, end: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        let a = self.lower_bound(start);
        let b = self.lower_bound(end).max(a);
        (a..b).map(move |i| self.entry(i))
    }

    /// Sorted positions at which `hash` was selected.
    pub fn lookup(&self, hash: u64) -> impl Iterator<Item = usize> + '_ {
        let a = self.reverse.partition_point(|&(h, _)| h < hash);
        let b = self.reverse.partition_point(|&(h, _)| h <= hash);
        self.reverse[a..b].iter().map(|&(_, p)| p as usize)
    }

    pub fn occurrences(&self, hash: u64) -> usize {
        let a = self.reverse.partition_point(|&(h, _)| h < hash);
        let b = self.reverse.partition_point(|&(h, _)| h <= hash);
        b - a
    }

    /// Little-endian: magic, version, k, w, hash_seed, seed_mode, count,
    /// then `count` positions and `count` hashes.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let io = |e| Error::io(path, e);
        let mut w = BufWriter::new(File::create(path).map_err(io)?);
        w.write_all(MAGIC).map_err(io)?;
        w.write_u32::<LittleEndian>(VERSION).map_err(io)?;
        w.write_u32::<LittleEndian>(self.params.k as u32).map_err(io)?;
        w.write_u32::<LittleEndian>(self.params.w as u32).map_err(io)?;
        w.write_u64::<LittleEndian>(self.params.hash_seed).map_err(io)?;
        w.write_u8(self.seed_mode as u8).map_err(io)?;
        w.write_u64::<LittleEndian>(self.positions.len() as u64).map_err(io)?;
        for &p in &self.positions {
            w.write_u64::<LittleEndian>(p).map_err(io)?;
        }
        for &h in &self.hashes {
            w.write_u64::<LittleEndian>(h).map_err(io)?;
        }
        w.flush().map_err(io)
    }

    /// Loads an index, failing if its header does not match `params`/`seed_mode`.
    pub fn load(path: impl AsRef<Path>, params: &SketchParams, seed_mode: bool) -> Result<Self> {
        let path = path.as_ref();
        let io = |e| Error::io(path, e);
        let mut r = BufReader::new(File::open(path).map_err(io)?);
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic).map_err(io)?;
        if &magic != MAGIC {
            return Err(Error::Index("bad magic".into()));
        }
        let version = r.read_u32::<LittleEndian>().map_err(io)?;
        if version != VERSION {
            return Err(Error::Index(format!("unsupported version {version}")));
        }
        let k = r.read_u32::<LittleEndian>().map_err(io)? as usize;
        let w = r.read_u32::<LittleEndian>().map_err(io)? as usize;
        let hash_seed = r.read_u64::<LittleEndian>().map_err(io)?;
        let stored_seed_mode = r.read_u8().map_err(io)? != 0;
        let found = SketchParams { k, w, hash_seed };
        if found != *params || stored_seed_mode != seed_mode {
            return Err(Error::Index(format!(
                "header {found:?} (seed_mode={stored_seed_mode}) does not match requested {params:?} (seed_mode={seed_mode})"
            )));
        }
        let count = r.read_u64::<LittleEndian>().map_err(io)? as usize;
        let mut positions = vec![0u64; count];
        r.read_u64_into::<LittleEndian>(&mut positions).map_err(io)?;
        let mut hashes = vec![0u64; count];
        r.read_u64_into::<LittleEndian>(&mut hashes).map_err(io)?;
        if positions.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::Index("positions not strictly increasing".into()));
        }
        Ok(Self::from_parts(positions, hashes, found, seed_mode))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genome_io::{parse_fasta_str, Sequence};
    use rand::{Rng, SeedableRng};

    fn random_genome(len: usize, seed: u64) -> Genome {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let bases: Vec<u8> = (0..len).map(|_| b"ACGT"[rng.gen_range(0..4)]).collect();
        Genome::new(vec![Sequence::unmasked("r", bases).unwrap()]).unwrap()
    }

    #[test]
    fn fully_masked_sequence_and_seed_mode() {
        let g = parse_fasta_str(">m\nacgtacgtacgtttgacgatcgatcgatgctagctagctagcatcgatcga\n").unwrap();
        let p = SketchParams::new(5, 4).unwrap();
        assert!(build_index(&g, &p, true).is_empty());
        assert!(!build_index(&g, &p, false).is_empty());
    }

    #[test]
    fn global_offsets_across_sequences() {
        let g = parse_fasta_str(">a\nACGTTGCAAC\n>b\nACGTTGCAAC\n").unwrap();
        let p = SketchParams::new(3, 2).unwrap();
        let idx = build_index(&g, &p, false);
        let a: Vec<_> = idx.range(0, 10).collect();
        let b: Vec<_> = idx.range(10, 20).map(|(p, h)| (p - 10, h)).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn reverse_is_inverse_of_forward_on_1mbp() {
        let g = random_genome(1_000_000, 5);
        let idx = build_index(&g, &SketchParams::seeding(), true);
        let mut prev = None;
        for (pos, hash) in idx.forward() {
            assert!(prev.is_none_or(|p| p < pos));
            prev = Some(pos);
            assert!(idx.lookup(hash).any(|p| p == pos));
        }
        let mut distinct: Vec<u64> = idx.reverse.iter().map(|&(h, _)| h).collect();
        distinct.dedup();
        let total: usize = distinct.iter().map(|&h| idx.occurrences(h)).sum();
        assert_eq!(total, idx.len());
        for &(h, p) in idx.reverse.iter().step_by(97) {
            assert_eq!(idx.at(p as usize), Some(h));
        }
    }

    #[test]
    fn save_load_roundtrip_and_header_check() {
        let g = random_genome(20_000, 9);
        let p = SketchParams::seeding();
        let idx = build_index(&g, &p, true);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.sdix");
        idx.save(&path).unwrap();
        assert_eq!(MinimizerIndex::load(&path, &p, true).unwrap(), idx);
        assert!(matches!(
            MinimizerIndex::load(&path, &SketchParams::anchoring(), true),
            Err(Error::Index(_))
        ));
        assert!(MinimizerIndex::load(&path, &p, false).is_err());
    }
}
