//! Assembly input and duplication-record output.
//!
//! Sequences live in one global coordinate space: sequence `s` occupies
//! `[offset(s), offset(s) + len(s))`. All intervals are 0-based half-open.

mod bedpe;
mod fasta;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

pub use bedpe::{read_bedpe, render_bedpe, write_bedpe};
pub use fasta::{parse_fasta, parse_fasta_str, write_fasta};

use crate::align::Cigar;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequence {
    pub name: String,
    /// Upper-case bases over `{A, C, G, T, N}`.
    pub bases: Vec<u8>,
    /// `true` marks a soft-masked (common repeat) base.
    pub mask: Vec<bool>,
}

impl Sequence {
    pub fn new(name: impl Into<String>, bases: Vec<u8>, mask: Vec<bool>) -> Result<Self> {
        let name = name.into();
        if bases.len() != mask.len() {
            return Err(Error::InvalidParam(format!(
                "sequence `{name}`: mask length {} != bases length {}",
                mask.len(),
                bases.len()
            )));
        }
        if let Some(b) = bases.iter().find(|b| !matches!(b, b'A' | b'C' | b'G' | b'T' | b'N')) {
            return Err(Error::InvalidParam(format!(
                "sequence `{name}`: unnormalized base {:?}",
                *b as char
            )));
        }
        Ok(Sequence { name, bases, mask })
    }

    /// Unmasked sequence from upper-case text.
    pub fn unmasked(name: impl Into<String>, bases: Vec<u8>) -> Result<Self> {
        let mask = vec![false; bases.len()];
        Self::new(name, bases, mask)
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }
}

/// An immutable, indexed assembly.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Genome {
    sequences: Vec<Sequence>,
    offsets: Vec<usize>,
    by_name: HashMap<String, usize>,
}

impl Genome {
    pub fn new(sequences: Vec<Sequence>) -> Result<Self> {
        let mut by_name = HashMap::with_capacity(sequences.len());
        let mut offsets = Vec::with_capacity(sequences.len() + 1);
        let mut acc = 0usize;
        for (idx, seq) in sequences.iter().enumerate() {
            if by_name.insert(seq.name.clone(), idx).is_some() {
                return Err(Error::DuplicateName(seq.name.clone()));
            }
            offsets.push(acc);
            acc += seq.len();
        }
        offsets.push(acc);
        Ok(Genome { sequences, offsets, by_name })
    }

    pub fn sequences(&self) -> &[Sequence] {
        &self.sequences
    }

    pub fn num_sequences(&self) -> usize {
        self.sequences.len()
    }

    pub fn sequence(&self, idx: usize) -> &Sequence {
        &self.sequences[idx]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    /// Total length of all sequences.
    pub fn total_len(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    /// Global coordinate of the first base of sequence `idx`.
    pub fn offset(&self, idx: usize) -> usize {
        self.offsets[idx]
    }

    /// Maps a global coordinate to `(sequence index, local offset)`.
    pub fn locate(&self, global: usize) -> Option<(usize, usize)> {
        if global >= self.total_len() {
            return None;
        }
        let idx = self.offsets.partition_point(|&o| o <= global) - 1;
        Some((idx, global - self.offsets[idx]))
    }

    /// Global `[start, end)` of sequence `idx`.
    pub fn bounds(&self, idx: usize) -> (usize, usize) {
        (self.offsets[idx], self.offsets[idx + 1])
    }

    /// Every sequence reverse-complemented in place; names and order kept.
    pub fn reverse_complement(&self) -> Genome {
        let sequences = self
            .sequences
            .iter()
            .map(|s| Sequence {
                name: s.name.clone(),
                bases: reverse_complement(&s.bases),
                mask: s.mask.iter().rev().copied().collect(),
            })
            .collect();
        Genome { sequences, offsets: self.offsets.clone(), by_name: self.by_name.clone() }
    }

    /// Bases of `iv`, reverse-complemented when the interval is on the minus strand.
    pub fn extract(&self, iv: &Interval) -> Result<Vec<u8>> {
        let seq = self.checked_seq(iv)?;
        let slice = &seq.bases[iv.start..iv.end];
        Ok(match iv.strand {
            Strand::Forward => slice.to_vec(),
            Strand::Reverse => reverse_complement(slice),
        })
    }

    /// Number of soft-masked bases inside `iv`.
    pub fn masked_count(&self, iv: &Interval) -> Result<usize> {
        let seq = self.checked_seq(iv)?;
        Ok(seq.mask[iv.start..iv.end].iter().filter(|&&m| m).count())
    }

    fn checked_seq(&self, iv: &Interval) -> Result<&Sequence> {
        let idx = self
            .index_of(&iv.seq_name)
            .ok_or_else(|| Error::InvalidParam(format!("unknown sequence `{}`", iv.seq_name)))?;
        let seq = &self.sequences[idx];
        if iv.start >= iv.end || iv.end > seq.len() {
            return Err(Error::InvalidParam(format!("interval {iv} out of bounds")));
        }
        Ok(seq)
    }
}

pub fn complement(b: u8) -> u8 {
    match b {
        b'A' => b'T',
        b'C' => b'G',
        b'G' => b'C',
        b'T' => b'A',
        _ => b'N',
    }
}

pub fn reverse_complement(seq: &[u8]) -> Vec<u8> {
    seq.iter().rev().map(|&b| complement(b)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Strand {
    #[default]
    Forward,
    Reverse,
}

impl Strand {
    pub fn as_char(self) -> char {
        match self {
            Strand::Forward => '+',
            Strand::Reverse => '-',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '+' => Some(Strand::Forward),
            '-' => Some(Strand::Reverse),
            _ => None,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Strand::Forward => Strand::Reverse,
            Strand::Reverse => Strand::Forward,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub seq_name: String,
    pub start: usize,
    pub end: usize,
    pub strand: Strand,
}

impl Interval {
    pub fn new(seq_name: impl Into<String>, start: usize, end: usize, strand: Strand) -> Self {
        debug_assert!(start <= end);
        Interval { seq_name: seq_name.into(), start, end, strand }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    /// Bases shared with `other` (0 on different sequences).
    pub fn overlap(&self, other: &Interval) -> usize {
        if self.seq_name != other.seq_name {
            return 0;
        }
        self.end.min(other.end).saturating_sub(self.start.max(other.start))
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.seq_name == other.seq_name && self.start <= other.start && other.end <= self.end
    }

    /// Ordering by `(name, start, end)`; strand is not part of the key.
    pub fn cmp_position(&self, other: &Interval) -> Ordering {
        self.seq_name.cmp(&other.seq_name).then(self.start.cmp(&other.start)).then(self.end.cmp(&other.end))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}-{}({})", self.seq_name, self.start, self.end, self.strand.as_char())
    }
}

/// One reported duplication: a BEDPE row plus alignment annotations.
///
/// `cigar` aligns mate1 (reference) against mate2 (query); when mate2 is on
/// the minus strand the query is its reverse complement.
#[derive(Clone, Debug, PartialEq)]
pub struct SdRecord {
    pub mate1: Interval,
    pub mate2: Interval,
    pub alignment_length: usize,
    pub edit_distance: usize,
    pub error_total: f64,
    pub error_mutation: f64,
    pub error_gap: f64,
    pub cigar: Cigar,
    pub kimura: f64,
    pub jukes_cantor: f64,
    pub masked_fraction1: f64,
    pub masked_fraction2: f64,
}

impl SdRecord {
    /// `round(1000 * (1 - error_total))`, the BEDPE score column.
    pub fn score(&self) -> i64 {
        (1000.0 * (1.0 - self.error_total)).round() as i64
    }

    pub fn cmp_key(&self, other: &SdRecord) -> Ordering {
        self.mate1
            .cmp_position(&other.mate1)
            .then(self.mate1.strand.cmp(&other.mate1.strand))
            .then(self.mate2.cmp_position(&other.mate2))
            .then(self.mate2.strand.cmp(&other.mate2.strand))
    }

    pub fn is_canonical(&self) -> bool {
        self.mate1.cmp_position(&self.mate2) == Ordering::Less
    }

    /// Swaps mates if needed so that mate1 sorts before mate2, rewriting the
    /// CIGAR for the new reference/query roles.
    pub fn canonicalize(&mut self) {
        if self.mate1.cmp_position(&self.mate2) != Ordering::Greater {
            return;
        }
        std::mem::swap(&mut self.mate1, &mut self.mate2);
        std::mem::swap(&mut self.masked_fraction1, &mut self.masked_fraction2);
        // The relative strand is stored on mate2; mate1 stays forward.
        if self.mate1.strand == Strand::Reverse {
            self.mate1.strand = Strand::Forward;
            self.mate2.strand = Strand::Reverse;
            // A vs rc(B) becomes B vs rc(A): reverse the columns, swap roles.
            self.cigar = self.cigar.swap_indels().reversed();
        } else {
            self.cigar = self.cigar.swap_indels();
        }
    }

    /// Unmasked bases of each mate.
    pub fn unmasked_bases(&self) -> (usize, usize) {
        let un = |iv: &Interval, frac: f64| {
            let masked = (frac * iv.len() as f64).round() as usize;
            iv.len().saturating_sub(masked)
        };
        (un(&self.mate1, self.masked_fraction1), un(&self.mate2, self.masked_fraction2))
    }
}
