use std::collections::VecDeque;

use super::hash::{pack_base, KmerHasher};
use super::SketchParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Minimizer {
    /// Offset of the k-mer start.
    pub position: usize,
    pub hash: u64,
    /// Every base of the k-mer is soft-masked.
    pub masked: bool,
}

/// Winnowing fingerprint of `bases` with the seeded hash of `params`.
pub fn winnow(bases: &[u8], params: &SketchParams) -> Vec<Minimizer> {
    winnow_with(bases, None, params.k, params.w, &params.hasher())
}

/// Like [`winnow`], also flagging fully masked k-mers.
pub fn winnow_masked(bases: &[u8], mask: &[bool], params: &SketchParams) -> Vec<Minimizer> {
    winnow_with(bases, Some(mask), params.k, params.w, &params.hasher())
}

/// Selects, in every window of `w` consecutive k-mers, the k-mer of minimal
/// hash (rightmost on ties). K-mers containing `N` are never selected.
/// Sequences with fewer than `w` k-mers form a single window.
pub fn winnow_with<H: KmerHasher>(
    bases: &[u8],
    mask: Option<&[bool]>,
    k: usize,
    w: usize,
    hasher: &H,
) -> Vec<Minimizer> {
    assert!((1..=31).contains(&k) && w >= 1);
    if bases.len() < k {
        return Vec::new();
    }
    let num_kmers = bases.len() - k + 1;
    let kmask = if k == 32 { u64::MAX } else { (1u64 << (2 * k)) - 1 };

    let mut out: Vec<Minimizer> = Vec::with_capacity(2 * num_kmers / (w + 1) + 2);
    let mut deque: VecDeque<Minimizer> = VecDeque::with_capacity(w + 1);
    let mut packed = 0u64;
    // Bases since the last N; the k-mer ending here is valid once this reaches k.
    let mut clean_run = 0usize;
    let mut masked_in_kmer = 0usize;
    let last_window_start = num_kmers.saturating_sub(w);

    for (i, &b) in bases.iter().enumerate() {
        match pack_base(b) {
            Some(code) => {
                packed = ((packed << 2) | code) & kmask;
                clean_run += 1;
            }
            None => {
                packed = 0;
                clean_run = 0;
            }
        }
        if let Some(m) = mask {
            if m[i] {
                masked_in_kmer += 1;
            }
            if i >= k && m[i - k] {
                masked_in_kmer -= 1;
            }
        }
        if i + 1 < k {
            continue;
        }
        let pos = i + 1 - k;
        if clean_run >= k {
            let hash = hasher.hash(packed);
            while deque.back().is_some_and(|m| m.hash >= hash) {
                deque.pop_back();
            }
            deque.push_back(Minimizer { position: pos, hash, masked: mask.is_some() && masked_in_kmer == k });
        }
        // Window `t` covers k-mers [t, t + w); it is complete once k-mer t + w - 1 is in.
        let complete = pos + 1 >= w || pos + 1 == num_kmers;
        if !complete {
            continue;
        }
        let t = (pos + 1).saturating_sub(w).min(last_window_start);
        while deque.front().is_some_and(|m| m.position < t) {
            deque.pop_front();
        }
        if let Some(&front) = deque.front() {
            if out.last().is_none_or(|last| last.position != front.position) {
                out.push(front);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sketch::MixHasher;

    fn lex(p: u64) -> u64 {
        p
    }

    fn positions(v: &[Minimizer]) -> Vec<usize> {
        v.iter().map(|m| m.position).collect()
    }

    /// Direct per-window minimum; the reference for the deque version.
    fn naive(bases: &[u8], k: usize, w: usize, h: &MixHasher) -> Vec<usize> {
        if bases.len() < k {
            return vec![];
        }
        let n = bases.len() - k + 1;
        let hashes: Vec<Option<u64>> = (0..n)
            .map(|p| {
                let mut packed = 0u64;
                for &b in &bases[p..p + k] {
                    packed = (packed << 2) | pack_base(b)?;
                }
                Some(h.hash(packed))
            })
            .collect();
        let windows: Vec<(usize, usize)> =
            if n < w { vec![(0, n)] } else { (0..=n - w).map(|t| (t, t + w)).collect() };
        let mut out: Vec<usize> = Vec::new();
        for (a, b) in windows {
            let mut best: Option<(u64, usize)> = None;
            for (p, h) in hashes.iter().enumerate().take(b).skip(a) {
                if let Some(hv) = *h {
                    if best.is_none_or(|(bh, _)| hv <= bh) {
                        best = Some((hv, p));
                    }
                }
            }
            if let Some((_, p)) = best {
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn all_ties_pick_rightmost() {
        let m = winnow_with(b"AAAA", None, 2, 2, &lex);
        assert_eq!(positions(&m), vec![1, 2]);
    }

    #[test]
    fn window_of_one_selects_every_valid_kmer() {
        let h = MixHasher::new(3);
        let m = winnow_with(b"ACGTNACGTTGCA", None, 3, 1, &h);
        assert_eq!(positions(&m), vec![0, 1, 5, 6, 7, 8, 9, 10]);
    }

    #[test]
    fn short_sequence() {
        assert!(winnow_with(b"AC", None, 3, 4, &lex).is_empty());
        assert_eq!(winnow_with(b"ACG", None, 3, 4, &lex).len(), 1);
    }

    #[test]
    fn n_runs_yield_nothing() {
        let m = winnow_with(b"NNNNNNNNNN", None, 3, 2, &lex);
        assert!(m.is_empty());
    }

    #[test]
    fn masked_flag_requires_full_mask() {
        let bases = b"ACGTACGT";
        let mask = [true, true, true, true, false, false, false, false];
        let m = winnow_with(bases, Some(&mask), 4, 1, &lex);
        let flags: Vec<bool> = m.iter().map(|m| m.masked).collect();
        assert_eq!(flags, vec![true, false, false, false, false]);
    }

    #[test]
    fn matches_naive_reference() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let h = MixHasher::new(99);
        for _ in 0..300 {
            let len = rng.gen_range(0..200);
            let seq: Vec<u8> = (0..len).map(|_| b"ACGTACGTACGTN"[rng.gen_range(0..13)]).collect();
            let k = rng.gen_range(1..8);
            let w = rng.gen_range(1..12);
            assert_eq!(positions(&winnow_with(&seq, None, k, w, &h)), naive(&seq, k, w, &h));
        }
        // Low-entropy sequences exercise ties.
        for _ in 0..300 {
            let len = rng.gen_range(0..100);
            let seq: Vec<u8> = (0..len).map(|_| b"AC"[rng.gen_range(0..2)]).collect();
            let k = rng.gen_range(1..4);
            let w = rng.gen_range(1..8);
            assert_eq!(positions(&winnow_with(&seq, None, k, w, &h)), naive(&seq, k, w, &h));
        }
    }
}
