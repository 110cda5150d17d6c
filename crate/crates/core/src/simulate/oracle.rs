//! Quadratic and exhaustive reference implementations. They deliberately
//! share no code with the optimized modules and refuse inputs beyond the
//! documented limits.

#![allow(clippy::needless_range_loop)]

use std::collections::{BTreeSet, HashSet};

use crate::align::{AlignParams, Cigar, CigarOp};
use crate::chain::{Anchor, ChainScoring};
use crate::error::{Error, Result};
use crate::genome_io::{Genome, SdRecord, Strand};

/// Anchor count accepted by [`chain_brute`].
pub const CHAIN_BRUTE_MAX_ANCHORS: usize = 2_000;
/// Per-sequence length accepted by [`align_brute`].
pub const ALIGN_BRUTE_MAX_LEN: usize = 5_000;
/// Per-sequence length accepted by the string oracles.
pub const STRING_BRUTE_MAX_LEN: usize = 200_000;

fn refuse(what: &str, size: usize, limit: usize) -> Error {
    Error::OracleLimit(format!("{what}: size {size} exceeds limit {limit}"))
}

/// Same mixer as the index hash, written out independently.
pub fn hash_brute(kmer: &[u8], seed: u64) -> Option<u64> {
    let mut v = 0u64;
    for &b in kmer {
        let code = b"ACGT".iter().position(|&c| c == b)? as u64;
        v = v * 4 + code;
    }
    let mut x = v ^ seed;
    x ^= x >> 30;
    x = x.wrapping_mul(0xbf58476d1ce4e5b9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94d049bb133111eb);
    Some(x ^ (x >> 31))
}

/// Winnowing by scanning every window: `(position, hash)` of the rightmost
/// minimal valid k-mer of each window of `w` consecutive k-mer starts. A
/// sequence with fewer than `w` k-mers forms a single window.
pub fn winnow_brute(seq: &[u8], k: usize, w: usize, seed: u64) -> Result<Vec<(usize, u64)>> {
    if seq.len() > STRING_BRUTE_MAX_LEN {
        return Err(refuse("winnow_brute", seq.len(), STRING_BRUTE_MAX_LEN));
    }
    if seq.len() < k {
        return Ok(Vec::new());
    }
    let starts = seq.len() - k + 1;
    let hashes: Vec<Option<u64>> = (0..starts).map(|p| hash_brute(&seq[p..p + k], seed)).collect();
    let mut picked = BTreeSet::new();
    let windows = if starts < w { 1 } else { starts - w + 1 };
    for s in 0..windows {
        let mut best: Option<(u64, usize)> = None;
        for p in s..(s + w).min(starts) {
            if let Some(h) = hashes[p] {
                if best.is_none_or(|(bh, _)| h <= bh) {
                    best = Some((h, p));
                }
            }
        }
        if let Some((h, p)) = best {
            picked.insert((p, h));
        }
    }
    Ok(picked.into_iter().collect())
}

/// Winnowed MinHash from scratch: with `s = |own|` distinct hashes, the
/// number of hashes among the `s` smallest of `own ∪ other` that lie in
/// both, returned as `(shared, s)`.
pub fn minhash_brute(own: &[u64], other: &[u64]) -> (usize, usize) {
    let a: BTreeSet<u64> = own.iter().copied().collect();
    let b: BTreeSet<u64> = other.iter().copied().collect();
    let s = a.len();
    let union: BTreeSet<u64> = a.union(&b).copied().collect();
    let shared = union.iter().take(s).filter(|h| a.contains(h) && b.contains(h)).count();
    (shared, s)
}

/// Exact Jaccard similarity of the k-mer sets of two windows (k-mers with
/// `N` excluded); 1 when both are empty.
pub fn jaccard_brute(a: &[u8], b: &[u8], k: usize) -> Result<f64> {
    let limit = STRING_BRUTE_MAX_LEN;
    if a.len().max(b.len()) > limit {
        return Err(refuse("jaccard_brute", a.len().max(b.len()), limit));
    }
    let set = |s: &[u8]| -> HashSet<Vec<u8>> {
        if s.len() < k {
            return HashSet::new();
        }
        s.windows(k).filter(|km| !km.contains(&b'N')).map(|km| km.to_vec()).collect()
    };
    let (sa, sb) = (set(a), set(b));
    let union = sa.union(&sb).count();
    if union == 0 {
        return Ok(1.0);
    }
    Ok(sa.intersection(&sb).count() as f64 / union as f64)
}

/// Every maximal exact match of length `>= k`, by scanning all diagonals.
/// `N` never matches.
pub fn mems_brute(s1: &[u8], s2: &[u8], k: usize) -> Result<Vec<Anchor>> {
    let limit = 20_000;
    if s1.len().max(s2.len()) > limit {
        return Err(refuse("mems_brute", s1.len().max(s2.len()), limit));
    }
    let mut out = Vec::new();
    let (n, m) = (s1.len() as i64, s2.len() as i64);
    for d in -(m - 1)..n {
        let (mut i, mut j) = if d >= 0 { (d as usize, 0usize) } else { (0usize, (-d) as usize) };
        let mut run = 0usize;
        loop {
            let inside = i < s1.len() && j < s2.len();
            if inside && s1[i] == s2[j] && s1[i] != b'N' {
                run += 1;
            } else {
                if run >= k {
                    out.push(Anchor::new(i - run, j - run, run));
                }
                run = 0;
            }
            if !inside {
                break;
            }
            i += 1;
            j += 1;
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteChain {
    pub score: i64,
    pub anchors: Vec<Anchor>,
}

/// Best first-tier chain by the quadratic DP over all predecessor pairs.
pub fn chain_brute(anchors: &[Anchor], gap_cap: usize, scoring: &ChainScoring) -> Result<BruteChain> {
    if anchors.len() > CHAIN_BRUTE_MAX_ANCHORS {
        return Err(refuse("chain_brute", anchors.len(), CHAIN_BRUTE_MAX_ANCHORS));
    }
    let mut a: Vec<Anchor> = anchors.to_vec();
    a.sort_by_key(|x| (x.pos1, x.pos2, x.length));
    a.dedup();
    let n = a.len();
    let mut f = vec![0i64; n];
    let mut back = vec![usize::MAX; n];
    for b in 0..n {
        f[b] = a[b].length as i64 * scoring.match_per_bp;
        for p in 0..b {
            let (pe1, pe2) = (a[p].pos1 + a[p].length, a[p].pos2 + a[p].length);
            if pe1 > a[b].pos1 || pe2 > a[b].pos2 {
                continue;
            }
            let (g1, g2) = (a[b].pos1 - pe1, a[b].pos2 - pe2);
            if g1 > gap_cap || g2 > gap_cap {
                continue;
            }
            let gap_cost = scoring.initial_gap_per_bp * (g1 + g2) as i64;
            let cand = a[b].length as i64 * scoring.match_per_bp + f[p] - gap_cost;
            if cand > f[b] {
                f[b] = cand;
                back[b] = p;
            }
        }
    }
    let Some(end) = (0..n).max_by_key(|&i| (f[i], std::cmp::Reverse(i))) else {
        return Ok(BruteChain { score: 0, anchors: Vec::new() });
    };
    let mut path = vec![a[end]];
    let mut cur = end;
    while back[cur] != usize::MAX {
        cur = back[cur];
        path.push(a[cur]);
    }
    path.reverse();
    Ok(BruteChain { score: f[end], anchors: path })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteAlignment {
    pub score: i64,
    pub cigar: Cigar,
}

/// Textbook Gotoh over full matrices, traced back by recomputation.
pub fn align_brute(s1: &[u8], s2: &[u8], p: &AlignParams) -> Result<BruteAlignment> {
    let (n, m) = (s1.len(), s2.len());
    if n.max(m) > ALIGN_BRUTE_MAX_LEN {
        return Err(refuse("align_brute", n.max(m), ALIGN_BRUTE_MAX_LEN));
    }
    let inf = i64::MIN / 4;
    let (go, ge) = (p.gap_open as i64, p.gap_extend as i64);
    let sub = |i: usize, j: usize| -> i64 {
        let (a, b) = (s1[i - 1], s2[j - 1]);
        if a == b && a != b'N' {
            p.match_score as i64
        } else {
            -(p.mismatch as i64)
        }
    };
    // mm: ends in a substitution column; del: consumes s1; ins: consumes s2.
    let mut mm = vec![vec![inf; m + 1]; n + 1];
    let mut del = vec![vec![inf; m + 1]; n + 1];
    let mut ins = vec![vec![inf; m + 1]; n + 1];
    mm[0][0] = 0;
    for i in 1..=n {
        del[i][0] = -(go + ge * i as i64);
    }
    for j in 1..=m {
        ins[0][j] = -(go + ge * j as i64);
    }
    for i in 1..=n {
        for j in 1..=m {
            let best_prev = mm[i - 1][j - 1].max(del[i - 1][j - 1]).max(ins[i - 1][j - 1]);
            mm[i][j] = best_prev + sub(i, j);
            del[i][j] = (mm[i - 1][j] - go - ge).max(del[i - 1][j] - ge).max(ins[i - 1][j] - go - ge);
            ins[i][j] = (mm[i][j - 1] - go - ge).max(ins[i][j - 1] - ge).max(del[i][j - 1] - go - ge);
        }
    }
    let score = mm[n][m].max(del[n][m]).max(ins[n][m]);

    let mut ops = Vec::new();
    let (mut i, mut j) = (n, m);
    let mut state = if mm[n][m] == score {
        0
    } else if del[n][m] == score {
        1
    } else {
        2
    };
    while i > 0 || j > 0 {
        match state {
            0 => {
                let v = mm[i][j] - sub(i, j);
                ops.push(CigarOp::Match);
                i -= 1;
                j -= 1;
                state = if mm[i][j] == v {
                    0
                } else if del[i][j] == v {
                    1
                } else {
                    2
                };
            }
            1 => {
                let v = del[i][j];
                ops.push(CigarOp::Del);
                i -= 1;
                state = if (i == 0 && j == 0) || mm[i][j] - go - ge == v {
                    0
                } else if del[i][j] - ge == v {
                    1
                } else {
                    2
                };
            }
            _ => {
                let v = ins[i][j];
                ops.push(CigarOp::Ins);
                j -= 1;
                state = if (i == 0 && j == 0) || mm[i][j] - go - ge == v {
                    0
                } else if ins[i][j] - ge == v {
                    2
                } else {
                    1
                };
            }
        }
    }
    let mut cigar = Cigar::new();
    for op in ops.into_iter().rev() {
        cigar.push(op, 1);
    }
    Ok(BruteAlignment { score, cigar })
}

/// Checks a reported pair against the duplication conditions by walking its
/// CIGAR over freshly extracted mate bases: the CIGAR consumes both mates
/// exactly, the stored counts match, the pair is at least `min_len` columns
/// long with error at most `delta`, and the mates overlap by at most
/// `delta` times the shorter one.
pub fn revalidate(
    genome: &Genome,
    rec: &SdRecord,
    delta: f64,
    min_len: usize,
) -> std::result::Result<(), String> {
    let a = genome.extract(&rec.mate1).map_err(|e| e.to_string())?;
    let b = genome.extract(&rec.mate2).map_err(|e| e.to_string())?;
    if rec.mate1.strand != Strand::Forward {
        return Err("mate1 not on the forward strand".into());
    }
    let (mut i, mut j, mut columns, mut edits) = (0usize, 0usize, 0usize, 0usize);
    for &(op, count) in rec.cigar.runs() {
        for _ in 0..count {
            columns += 1;
            match op {
                CigarOp::Match => {
                    let (x, y) =
                        (*a.get(i).ok_or("CIGAR overruns mate1")?, *b.get(j).ok_or("CIGAR overruns mate2")?);
                    if x != y || x == b'N' {
                        edits += 1;
                    }
                    i += 1;
                    j += 1;
                }
                CigarOp::Del => {
                    edits += 1;
                    i += 1;
                }
                CigarOp::Ins => {
                    edits += 1;
                    j += 1;
                }
            }
        }
    }
    if i != a.len() || j != b.len() {
        return Err(format!("CIGAR consumes {i}/{j} bases of mates of length {}/{}", a.len(), b.len()));
    }
    if columns != rec.alignment_length || edits != rec.edit_distance {
        return Err(format!(
            "stored length/edits {}/{} but CIGAR gives {columns}/{edits}",
            rec.alignment_length, rec.edit_distance
        ));
    }
    if columns < min_len {
        return Err(format!("alignment of {columns} columns is shorter than {min_len}"));
    }
    let error = edits as f64 / columns as f64;
    if error > delta + 1e-12 || (error - rec.error_total).abs() > 1e-12 {
        return Err(format!("error {error} (stored {}) against bound {delta}", rec.error_total));
    }
    let shorter = rec.mate1.len().min(rec.mate2.len());
    let overlap = if rec.mate1.seq_name == rec.mate2.seq_name {
        rec.mate1.end.min(rec.mate2.end).saturating_sub(rec.mate1.start.max(rec.mate2.start))
    } else {
        0
    };
    if overlap as f64 > delta * shorter as f64 {
        return Err(format!("mates overlap by {overlap} bp"));
    }
    Ok(())
}
