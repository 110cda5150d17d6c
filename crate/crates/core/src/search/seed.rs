use super::{ErrorModel, SearchParams, TAU_SLACK};
use crate::genome_io::{Genome, Strand};
use crate::sketch::{MinimizerIndex, RollingEstimator, Side};

/// A pair of windows `[i, i+n)` (query) and `[j, j+m)` (target) in global
/// coordinates of their respective genomes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeedSd {
    pub i: usize,
    pub j: usize,
    pub n: usize,
    pub m: usize,
    pub estimate: f64,
    /// Numerator of `estimate`.
    pub shared: usize,
    /// Sketch size `s`, the denominator of `estimate`.
    pub sketch_size: usize,
}

/// One genome with its seed-mode and full minimizer indexes.
#[derive(Clone, Copy)]
pub struct SequenceSide<'a> {
    pub genome: &'a Genome,
    pub seed_index: &'a MinimizerIndex,
    pub full_index: &'a MinimizerIndex,
}

/// Query and target for one search direction. For [`Strand::Reverse`] the
/// query genome is the reverse complement of the target genome.
#[derive(Clone, Copy)]
pub struct SearchPass<'a> {
    pub query: SequenceSide<'a>,
    pub target: SequenceSide<'a>,
    pub strand: Strand,
}

impl<'a> SearchPass<'a> {
    pub fn k(&self) -> usize {
        self.target.seed_index.params().k
    }

    /// Maps a query global `[start, end)` to `(sequence, forward local start, end)`.
    pub fn query_to_forward(&self, start: usize, end: usize) -> (usize, usize, usize) {
        let (seq, local) = self.query.genome.locate(start).expect("query coordinate in range");
        let local_end = local + (end - start);
        match self.strand {
            Strand::Forward => (seq, local, local_end),
            Strand::Reverse => {
                let len = self.query.genome.sequence(seq).len();
                (seq, len - local_end, len - local)
            }
        }
    }

    /// Bases shared by a query window and a target window once both are in
    /// forward coordinates (0 on different sequences).
    pub fn overlap(&self, i: usize, n: usize, j: usize, m: usize) -> usize {
        let (qs, qa, qb) = self.query_to_forward(i, i + n);
        let (ts, ta) = self.target.genome.locate(j).expect("target coordinate in range");
        if qs != ts {
            return 0;
        }
        let tb = ta + m;
        qb.min(tb).saturating_sub(qa.max(ta))
    }
}

/// Global starts of the query windows: every `stride` bp along each
/// sequence, plus one window flush with the sequence end.
pub fn query_windows(genome: &Genome, window: usize, stride: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for idx in 0..genome.num_sequences() {
        let (start, end) = genome.bounds(idx);
        if end - start < window {
            continue;
        }
        let last = end - window;
        let mut i = start;
        while i <= last {
            out.push(i);
            i += stride;
        }
        if out.last() != Some(&last) {
            out.push(last);
        }
    }
    out
}

/// Seeds for the query window starting at `i`: one per candidate interval
/// whose best estimate reaches τ.
pub fn seeds_for_window(
    pass: &SearchPass<'_>,
    i: usize,
    model: &ErrorModel<f64>,
    params: &SearchParams,
) -> Vec<SeedSd> {
    let n = params.window;
    let k = pass.k();
    let tau = model.tau(k);
    let own: Vec<u64> = pass.query.seed_index.range(i, i + n + 1 - k).map(|(_, h)| h).collect();
    let mut distinct = own.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let s = distinct.len();
    if s == 0 {
        return Vec::new();
    }
    let min_shared = ((tau - TAU_SLACK) * s as f64).ceil().max(1.0) as usize;

    let mut hits: Vec<usize> = distinct.iter().flat_map(|&h| pass.target.seed_index.lookup(h)).collect();
    hits.sort_unstable();

    let target = pass.target.genome;
    let mut seeds = Vec::new();
    let mut a = 0;
    while a < hits.len() {
        let (seq, _) = target.locate(hits[a]).expect("hit in range");
        let (seq_start, seq_end) = target.bounds(seq);
        let mut b = a;
        while b + 1 < hits.len() && hits[b + 1] - hits[b] <= n && hits[b + 1] < seq_end {
            b += 1;
        }
        let (first, last, count) = (hits[a], hits[b], b - a + 1);
        a = b + 1;
        if count < min_shared || seq_end - seq_start < n {
            continue;
        }
        let j_lo = first.saturating_sub(n - k).max(seq_start);
        let j_hi = last.min(seq_end - n);
        if j_lo > j_hi {
            continue;
        }
        if let Some(seed) = roll_interval(pass, i, &own, s, j_lo, j_hi, model, n) {
            if seed.estimate >= tau - TAU_SLACK {
                seeds.push(seed);
            }
        }
    }
    seeds
}

/// Rolls the target window over `[j_lo, j_hi]` and returns the position of
/// maximal estimate (smallest such `j`), skipping target windows that
/// overlap the query window. On the forward strand any overlap is skipped:
/// shared bases inflate the estimate, and two copies of a valid duplication
/// are at least `(1-δ)·1000 >= n` bp apart anyway. Against the reverse
/// complement, overlaps up to `δ·n` are allowed.
#[allow(clippy::too_many_arguments)]
fn roll_interval(
    pass: &SearchPass<'_>,
    i: usize,
    own: &[u64],
    s: usize,
    j_lo: usize,
    j_hi: usize,
    model: &ErrorModel<f64>,
    n: usize,
) -> Option<SeedSd> {
    let k = pass.k();
    let idx = pass.target.seed_index;
    let max_overlap = match pass.strand {
        Strand::Forward => 0.0,
        Strand::Reverse => model.delta * n as f64,
    };
    let mut est = RollingEstimator::from_hashes(own.iter().copied(), std::iter::empty());
    debug_assert_eq!(est.sketch_size(), s);

    // Target window [j, j+n) holds minimizers with positions in [j, j+n-k].
    let mut lo = idx.lower_bound(j_lo);
    let mut hi = lo;
    while hi < idx.len() && idx.entry(hi).0 <= j_lo + n - k {
        est.add(idx.entry(hi).1, Side::Other);
        hi += 1;
    }

    let mut best: Option<(usize, usize)> = None;
    let mut j = j_lo;
    loop {
        let suppressed = pass.overlap(i, n, j, n) as f64 > max_overlap;
        if !suppressed {
            let shared = est.shared_in_sketch();
            if best.is_none_or(|(b, _)| shared > b) {
                best = Some((shared, j));
            }
        }
        if j == j_hi {
            break;
        }
        if lo < idx.len() && idx.entry(lo).0 == j {
            est.remove(idx.entry(lo).1, Side::Other);
            lo += 1;
        }
        j += 1;
        if hi < idx.len() && idx.entry(hi).0 == j + n - k {
            est.add(idx.entry(hi).1, Side::Other);
            hi += 1;
        }
    }
    best.map(|(shared, j)| SeedSd {
        i,
        j,
        n,
        m: n,
        estimate: shared as f64 / s as f64,
        shared,
        sketch_size: s,
    })
}

/// Forward self-search of `genome` with windows of length `n`, using the
/// seed-mode `index` for both query and target.
pub fn find_seed_sds(
    index: &MinimizerIndex,
    genome: &Genome,
    model: &ErrorModel<f64>,
    n: usize,
) -> Vec<SeedSd> {
    let params = SearchParams { window: n, ..SearchParams::default() };
    let side = SequenceSide { genome, seed_index: index, full_index: index };
    let pass = SearchPass { query: side, target: side, strand: Strand::Forward };
    let mut seeds: Vec<SeedSd> = query_windows(genome, n, params.stride)
        .into_iter()
        .flat_map(|i| seeds_for_window(&pass, i, model, &params))
        .collect();
    seeds.sort_by_key(|a| (a.i, a.j));
    seeds
}
