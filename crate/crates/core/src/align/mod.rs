//! Affine-gap alignment of chains, CIGAR bookkeeping and evolutionary
//! distances.

mod cigar;
mod distance;
mod gotoh;

pub use cigar::{Cigar, CigarOp, ParseCigarError};
pub use distance::{jukes_cantor, jukes_cantor_from_p, kimura_distance, kimura_from_pq, Substitutions};

use crate::chain::Chain;
use crate::error::{Error, Result};
use gotoh::{corridor_dp, Mode, Scores};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlignParams {
    pub match_score: i32,
    /// Penalties are positive numbers subtracted from the score.
    pub mismatch: i32,
    pub gap_open: i32,
    pub gap_extend: i32,
    /// Half-width of the diagonal corridor; `None` aligns the full matrix.
    pub band: Option<usize>,
    /// Refuse (or stop widening a band) past this many DP cells.
    pub max_cells: usize,
    /// Chain ends are extended until the score falls this far below its best.
    pub x_drop: i32,
    /// Corridor half-width used by end extension.
    pub extension_band: usize,
    /// Gap runs up to this length count as small mutations.
    pub short_gap_max: usize,
    /// Chain alignments start and end on a run of at least this many
    /// identical columns.
    pub end_run: usize,
}

impl Default for AlignParams {
    fn default() -> Self {
        AlignParams {
            match_score: 5,
            mismatch: 4,
            gap_open: 40,
            gap_extend: 1,
            band: None,
            max_cells: 1 << 28,
            x_drop: 500,
            extension_band: 64,
            short_gap_max: 5,
            end_run: 5,
        }
    }
}

impl AlignParams {
    pub fn validate(&self) -> Result<()> {
        if self.match_score <= 0 {
            return Err(Error::InvalidParam("match score must be positive".into()));
        }
        if self.mismatch < 0 || self.gap_open < 0 || self.gap_extend < 0 || self.x_drop < 0 {
            return Err(Error::InvalidParam("penalties must be non-negative".into()));
        }
        Ok(())
    }

    fn scores(&self) -> Scores {
        Scores {
            matched: self.match_score,
            mismatch: self.mismatch,
            open: self.gap_open,
            extend: self.gap_extend,
        }
    }

    /// Cost of a gap run of `len` bases.
    pub fn gap_cost(&self, len: usize) -> i64 {
        self.gap_open as i64 + self.gap_extend as i64 * len as i64
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alignment {
    pub cigar: Cigar,
    pub score: i64,
    /// Offset of the first aligned base of the reference (`s1`).
    pub start1: usize,
    /// Offset of the first aligned base of the query (`s2`).
    pub start2: usize,
    pub matches: usize,
    pub mismatches: usize,
    pub gap_bases: usize,
    pub gap_opens: usize,
    /// Gap bases in runs no longer than the short-gap cutoff.
    pub short_gap_bases: usize,
    pub aligned_length: usize,
}

impl Alignment {
    /// Tallies and rescores `cigar` placed at `(start1, start2)`.
    pub fn from_cigar(
        cigar: Cigar,
        s1: &[u8],
        s2: &[u8],
        start1: usize,
        start2: usize,
        params: &AlignParams,
    ) -> Self {
        let sc = params.scores();
        let (mut i, mut j) = (start1, start2);
        let mut aln = Alignment {
            score: 0,
            start1,
            start2,
            matches: 0,
            mismatches: 0,
            gap_bases: 0,
            gap_opens: 0,
            short_gap_bases: 0,
            aligned_length: cigar.len(),
            cigar: Cigar::new(),
        };
        for &(op, count) in cigar.runs() {
            let count = count as usize;
            match op {
                CigarOp::Match => {
                    for k in 0..count {
                        let v = sc.pair(s1[i + k], s2[j + k]);
                        aln.score += v as i64;
                        if v > 0 {
                            aln.matches += 1;
                        } else {
                            aln.mismatches += 1;
                        }
                    }
                    i += count;
                    j += count;
                }
                CigarOp::Del | CigarOp::Ins => {
                    aln.score -= params.gap_cost(count);
                    aln.gap_bases += count;
                    aln.gap_opens += 1;
                    if count <= params.short_gap_max {
                        aln.short_gap_bases += count;
                    }
                    if op == CigarOp::Del {
                        i += count;
                    } else {
                        j += count;
                    }
                }
            }
        }
        aln.cigar = cigar;
        aln
    }

    pub fn end1(&self) -> usize {
        self.start1 + self.cigar.reference_len()
    }

    pub fn end2(&self) -> usize {
        self.start2 + self.cigar.query_len()
    }

    pub fn edit_distance(&self) -> usize {
        self.mismatches + self.gap_bases
    }

    fn fraction(&self, count: usize) -> f64 {
        if self.aligned_length == 0 {
            0.0
        } else {
            count as f64 / self.aligned_length as f64
        }
    }

    pub fn error_total(&self) -> f64 {
        self.fraction(self.edit_distance())
    }

    pub fn error_mutation(&self) -> f64 {
        self.fraction(self.mismatches + self.short_gap_bases)
    }

    pub fn error_gap(&self) -> f64 {
        self.fraction(self.gap_bases - self.short_gap_bases)
    }

    /// Number of columns that are `M`.
    pub fn match_columns(&self) -> usize {
        self.matches + self.mismatches
    }
}

fn gap_only(len1: usize, len2: usize) -> Cigar {
    let mut c = Cigar::new();
    c.push(CigarOp::Del, len1 as u32);
    c.push(CigarOp::Ins, len2 as u32);
    c
}

/// Corridor covering both diagonals 0 and `m - n` plus `band` on each side,
/// clipped to the matrix.
fn corridor(n: usize, m: usize, band: usize) -> (isize, isize) {
    let diff = m as isize - n as isize;
    let dmin = (diff.min(0) - band as isize).max(-(n as isize));
    let dmax = (diff.max(0) + band as isize).min(m as isize);
    (dmin, dmax)
}

fn cells(n: usize, dmin: isize, dmax: isize) -> usize {
    (n + 1).saturating_mul((dmax - dmin + 1) as usize)
}

fn global_cigar(s1: &[u8], s2: &[u8], params: &AlignParams) -> Result<Cigar> {
    let (n, m) = (s1.len(), s2.len());
    if n == 0 || m == 0 {
        return Ok(gap_only(n, m));
    }
    let sc = params.scores();
    let too_large = |dmin, dmax| Error::AlignmentTooLarge {
        rows: n + 1,
        cols: (dmax - dmin + 1) as usize,
        limit: params.max_cells,
    };
    let Some(mut band) = params.band else {
        let (dmin, dmax) = (-(n as isize), m as isize);
        if (n + 1).saturating_mul(m + 1) > params.max_cells {
            return Err(too_large(dmin, dmax));
        }
        return Ok(corridor_dp(s1, s2, &sc, dmin, dmax, Mode::Global).cigar);
    };
    let mut last: Option<Cigar> = None;
    loop {
        let (dmin, dmax) = corridor(n, m, band);
        if cells(n, dmin, dmax) > params.max_cells {
            return last.ok_or_else(|| too_large(dmin, dmax));
        }
        let out = corridor_dp(s1, s2, &sc, dmin, dmax, Mode::Global);
        let full = dmin == -(n as isize) && dmax == m as isize;
        if !out.touched || full {
            return Ok(out.cigar);
        }
        last = Some(out.cigar);
        band = band.max(1) * 2;
    }
}

/// Optimal global alignment of `s1` (reference) against `s2` (query).
///
/// With a band set, the corridor doubles until the optimal path no longer
/// runs along its edge or the cell budget is exhausted, in which case the
/// widest completed corridor is returned.
pub fn global_align(s1: &[u8], s2: &[u8], params: &AlignParams) -> Result<Alignment> {
    params.validate()?;
    let cigar = global_cigar(s1, s2, params)?;
    Ok(Alignment::from_cigar(cigar, s1, s2, 0, 0, params))
}

/// Extends from the start of both slices with x-drop; returns the CIGAR.
fn extend(s1: &[u8], s2: &[u8], params: &AlignParams) -> Cigar {
    if s1.is_empty() || s2.is_empty() {
        return Cigar::new();
    }
    let b = params.extension_band as isize;
    let out = corridor_dp(
        s1,
        s2,
        &params.scores(),
        (-b).max(-(s1.len() as isize)),
        b.min(s2.len() as isize),
        Mode::Extend(params.x_drop),
    );
    out.cigar
}

/// Alignment through the anchors of `chain`, where anchor coordinates are
/// offsets into `s1` and `s2`. Anchors become `M` runs, the space between
/// them is aligned globally, and both ends are extended with x-drop.
pub fn align_chain(chain: &Chain, s1: &[u8], s2: &[u8], params: &AlignParams) -> Result<Alignment> {
    params.validate()?;
    let first = chain.anchors.first().ok_or_else(|| Error::InvalidParam("empty chain".into()))?;
    let last = chain.anchors.last().expect("nonempty");
    let inner = AlignParams { band: Some(params.band.unwrap_or(params.extension_band)), ..*params };

    let rev = |s: &[u8]| s.iter().rev().copied().collect::<Vec<u8>>();
    let left = extend(&rev(&s1[..first.pos1]), &rev(&s2[..first.pos2]), params).reversed();
    let start1 = first.pos1 - left.reference_len();
    let start2 = first.pos2 - left.query_len();

    let mut cigar = left;
    let mut prev: Option<&crate::chain::Anchor> = None;
    for a in &chain.anchors {
        if let Some(p) = prev {
            let g1 = &s1[p.end1()..a.pos1];
            let g2 = &s2[p.end2()..a.pos2];
            cigar.extend(&global_cigar(g1, g2, &inner)?);
        }
        cigar.push(CigarOp::Match, a.length as u32);
        prev = Some(a);
    }
    cigar.extend(&extend(&s1[last.end1()..], &s2[last.end2()..], params));
    let (cigar, start1, start2) = trim_to_best(&cigar, s1, s2, start1, start2, params);
    Ok(Alignment::from_cigar(cigar, s1, s2, start1, start2, params))
}

/// Cuts the alignment down to its maximum-scoring contiguous stretch of
/// columns. Chains can pick up chance anchors near their ends; the columns
/// that join them score negatively and are removed here. Gap runs are kept
/// or dropped whole. The ends then move inward to the outermost runs of
/// `end_run` identical columns.
fn trim_to_best(
    cigar: &Cigar,
    s1: &[u8],
    s2: &[u8],
    start1: usize,
    start2: usize,
    params: &AlignParams,
) -> (Cigar, usize, usize) {
    let sc = params.scores();
    // Unit = one M column or one whole gap run.
    let mut units: Vec<(CigarOp, u32, i64)> = Vec::new();
    let (mut i, mut j) = (start1, start2);
    for &(op, count) in cigar.runs() {
        match op {
            CigarOp::Match => {
                for _ in 0..count {
                    units.push((op, 1, sc.pair(s1[i], s2[j]) as i64));
                    i += 1;
                    j += 1;
                }
            }
            CigarOp::Del => {
                units.push((op, count, -params.gap_cost(count as usize)));
                i += count as usize;
            }
            CigarOp::Ins => {
                units.push((op, count, -params.gap_cost(count as usize)));
                j += count as usize;
            }
        }
    }
    // Maximum subarray; ties keep the earliest start and the longest end.
    let (mut best, mut best_range) = (i64::MIN, (0, 0));
    let (mut run, mut run_start) = (0i64, 0usize);
    for (u, &(_, _, v)) in units.iter().enumerate() {
        if run < 0 {
            run = 0;
            run_start = u;
        }
        run += v;
        if run >= best {
            best = run;
            best_range = (run_start, u + 1);
        }
    }
    let (mut a, mut b) = best_range;
    // A short positive tail can be chance agreement with flanking sequence.
    let exact = |u: &(CigarOp, u32, i64)| u.0 == CigarOp::Match && u.2 == sc.matched as i64;
    let r = params.end_run.max(1);
    if b - a >= r {
        if let Some(first) = (a..=b - r).find(|&x| units[x..x + r].iter().all(exact)) {
            let last = (first..=b - r).rev().find(|&x| units[x..x + r].iter().all(exact)).unwrap_or(first);
            a = first;
            b = last + r;
        }
    }
    let (mut s1_off, mut s2_off) = (start1, start2);
    for &(op, n, _) in &units[..a] {
        match op {
            CigarOp::Match => {
                s1_off += 1;
                s2_off += 1;
            }
            CigarOp::Del => s1_off += n as usize,
            CigarOp::Ins => s2_off += n as usize,
        }
    }
    let mut out = Cigar::new();
    for &(op, n, _) in &units[a..b] {
        out.push(op, n);
    }
    (out, s1_off, s2_off)
}
