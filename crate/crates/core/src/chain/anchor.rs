use std::collections::HashMap;

use crate::sketch::pack_base;

/// Exact match `s1[pos1..pos1+length] == s2[pos2..pos2+length]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Anchor {
    pub pos1: usize,
    pub pos2: usize,
    pub length: usize,
}

impl Anchor {
    pub fn new(pos1: usize, pos2: usize, length: usize) -> Self {
        Anchor { pos1, pos2, length }
    }

    pub fn end1(&self) -> usize {
        self.pos1 + self.length
    }

    pub fn end2(&self) -> usize {
        self.pos2 + self.length
    }

    pub fn diagonal(&self) -> i64 {
        self.pos1 as i64 - self.pos2 as i64
    }

    pub fn verify(&self, s1: &[u8], s2: &[u8]) -> bool {
        self.end1() <= s1.len()
            && self.end2() <= s2.len()
            && s1[self.pos1..self.end1()] == s2[self.pos2..self.end2()]
    }
}

/// All maximal exact matches of length `>= k` between `s1` and `s2`, found by
/// probing the k-mers of `s2` against a k-mer table of `s1` and extending
/// each hit in both directions. `N` never matches. Sorted by `(pos1, pos2)`.
pub fn find_anchors(s1: &[u8], s2: &[u8], k: usize) -> Vec<Anchor> {
    find_anchors_capped(s1, s2, k, usize::MAX)
}

/// As [`find_anchors`], skipping `s1` k-mers that occur more than `max_occ`
/// times (low-complexity sequence).
pub fn find_anchors_capped(s1: &[u8], s2: &[u8], k: usize, max_occ: usize) -> Vec<Anchor> {
    assert!((1..=31).contains(&k));
    if s1.len() < k || s2.len() < k {
        return Vec::new();
    }
    let table = kmer_table(s1, k);
    let same = |a: u8, b: u8| a == b && a != b'N';

    let mut covered: HashMap<i64, usize> = HashMap::new();
    let mut out = Vec::new();
    for (p2, kmer) in kmers(s2, k) {
        let Some(hits) = table.get(&kmer) else { continue };
        if hits.len() > max_occ {
            continue;
        }
        for &p1 in hits {
            let p1 = p1 as usize;
            let diag = p1 as i64 - p2 as i64;
            if covered.get(&diag).is_some_and(|&end| end > p1) {
                continue;
            }
            let mut left = 0;
            while p1 > left && p2 > left && same(s1[p1 - left - 1], s2[p2 - left - 1]) {
                left += 1;
            }
            let mut right = p1 + k;
            while right < s1.len() && right + p2 - p1 < s2.len() && same(s1[right], s2[right + p2 - p1]) {
                right += 1;
            }
            out.push(Anchor::new(p1 - left, p2 - left, right - (p1 - left)));
            covered.insert(diag, right);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn kmers(s: &[u8], k: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
    let mask = (1u64 << (2 * k)) - 1;
    let mut packed = 0u64;
    let mut run = 0usize;
    s.iter().enumerate().filter_map(move |(i, &b)| {
        match pack_base(b) {
            Some(c) => {
                packed = ((packed << 2) | c) & mask;
                run += 1;
            }
            None => run = 0,
        }
        (run >= k).then(|| (i + 1 - k, packed))
    })
}

fn kmer_table(s: &[u8], k: usize) -> HashMap<u64, Vec<u32>> {
    let mut table: HashMap<u64, Vec<u32>> = HashMap::with_capacity(s.len());
    for (p, kmer) in kmers(s, k) {
        table.entry(kmer).or_default().push(p as u32);
    }
    table
}
