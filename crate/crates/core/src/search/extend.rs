use super::seed::{SearchPass, SeedSd};
use super::{ErrorModel, SearchParams, TAU_SLACK};
use crate::genome_io::{Genome, Interval, Strand};
use crate::sketch::{MinimizerIndex, RollingEstimator, Side};

/// A pair of regions likely to contain a duplication. `region1` is always on
/// the forward strand; `strand` is the orientation of `region2` relative to it.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialRegion {
    pub region1: Interval,
    pub region2: Interval,
    pub strand: Strand,
    pub estimate: f64,
    pub padded: bool,
}

impl PotentialRegion {
    /// Orders the pair so that `region1` sorts first.
    pub fn canonicalize(&mut self) {
        if self.region1.cmp_position(&self.region2).is_gt() {
            std::mem::swap(&mut self.region1, &mut self.region2);
            self.region1.strand = Strand::Forward;
            self.region2.strand = self.strand;
        }
    }
}

struct Growth<'a> {
    est: RollingEstimator,
    /// Additions since the last accepted extent, undone on termination.
    pending: Vec<(u64, Side)>,
    query: &'a MinimizerIndex,
    target: &'a MinimizerIndex,
}

impl Growth<'_> {
    fn push(&mut self, idx_side: Side, pos: usize) {
        let idx = match idx_side {
            Side::Own => self.query,
            Side::Other => self.target,
        };
        if let Some(h) = idx.at(pos) {
            self.est.add(h, idx_side);
            self.pending.push((h, idx_side));
        }
    }

    fn commit(&mut self) {
        self.pending.clear();
    }

    fn rollback(&mut self) {
        while let Some((h, side)) = self.pending.pop() {
            self.est.remove(h, side);
        }
    }
}

/// Seed extent after growth, in the coordinates of a [`SearchPass`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Extent {
    pub i: usize,
    pub n: usize,
    pub j: usize,
    pub m: usize,
    pub estimate: f64,
}

impl Extent {
    pub fn contains_seed(&self, seed: &SeedSd) -> bool {
        self.i <= seed.i
            && seed.i + seed.n <= self.i + self.n
            && self.j <= seed.j
            && seed.j + seed.m <= self.j + self.m
    }
}

/// Grows a seed forward and then backward, one base on each side per step,
/// while the winnowed MinHash estimate over the full indexes stays at or
/// above τ. Growth in a direction ends at a sequence boundary, at
/// `max_region`, when the two regions overlap by more than `δ·min(n, m)`, or
/// once the estimate has stayed below τ for `extension_lookahead` steps. The
/// largest extent whose estimate reached τ is kept.
pub fn grow_seed(
    seed: &SeedSd,
    pass: &SearchPass<'_>,
    model: &ErrorModel<f64>,
    params: &SearchParams,
) -> Extent {
    let k = pass.query.full_index.params().k;
    let tau = model.tau(k) - TAU_SLACK;
    let (qseq, _) = pass.query.genome.locate(seed.i).expect("seed in query");
    let (tseq, _) = pass.target.genome.locate(seed.j).expect("seed in target");
    let (q_start, q_end) = pass.query.genome.bounds(qseq);
    let (t_start, t_end) = pass.target.genome.bounds(tseq);

    let (mut i, mut n, mut j, mut m) = (seed.i, seed.n, seed.j, seed.m);
    let own = pass.query.full_index.range(i, i + n + 1 - k).map(|(_, h)| h);
    let other = pass.target.full_index.range(j, j + m + 1 - k).map(|(_, h)| h);
    let mut g = Growth {
        est: RollingEstimator::from_hashes(own, other),
        pending: Vec::new(),
        query: pass.query.full_index,
        target: pass.target.full_index,
    };
    let overlaps = |i: usize, n: usize, j: usize, m: usize| {
        pass.overlap(i, n, j, m) as f64 > model.delta * n.min(m) as f64
    };

    // Forward.
    let mut since_good = 0usize;
    let (mut best_n, mut best_m) = (n, m);
    while i + n < q_end && j + m < t_end && n < params.max_region && m < params.max_region {
        if overlaps(i, n + 1, j, m + 1) {
            break;
        }
        n += 1;
        m += 1;
        g.push(Side::Own, i + n - k);
        g.push(Side::Other, j + m - k);
        if g.est.estimate() >= tau {
            g.commit();
            best_n = n;
            best_m = m;
            since_good = 0;
        } else {
            since_good += 1;
            if since_good > params.extension_lookahead {
                break;
            }
        }
    }
    g.rollback();
    n = best_n;
    m = best_m;

    // Backward.
    since_good = 0;
    let (mut best_i, mut best_j) = (i, j);
    let (mut best_n, mut best_m) = (n, m);
    while i > q_start && j > t_start && n < params.max_region && m < params.max_region {
        if overlaps(i - 1, n + 1, j - 1, m + 1) {
            break;
        }
        i -= 1;
        j -= 1;
        n += 1;
        m += 1;
        g.push(Side::Own, i);
        g.push(Side::Other, j);
        if g.est.estimate() >= tau {
            g.commit();
            (best_i, best_j, best_n, best_m) = (i, j, n, m);
            since_good = 0;
        } else {
            since_good += 1;
            if since_good > params.extension_lookahead {
                break;
            }
        }
    }
    g.rollback();
    let estimate = g.est.estimate();

    Extent { i: best_i, n: best_n, j: best_j, m: best_m, estimate }
}

/// The extent as a canonical, unpadded region pair in forward coordinates.
pub fn extent_region(ext: &Extent, pass: &SearchPass<'_>) -> PotentialRegion {
    let (qs, qa, qb) = pass.query_to_forward(ext.i, ext.i + ext.n);
    let (tseq, tloc) = pass.target.genome.locate(ext.j).expect("extent in target");
    let mut region = PotentialRegion {
        region1: Interval::new(pass.query.genome.sequence(qs).name.clone(), qa, qb, Strand::Forward),
        region2: Interval::new(
            pass.target.genome.sequence(tseq).name.clone(),
            tloc,
            tloc + ext.m,
            pass.strand,
        ),
        strand: pass.strand,
        estimate: ext.estimate,
        padded: false,
    };
    region.canonicalize();
    region
}

/// [`grow_seed`] followed by [`extent_region`].
pub fn extend_seed(
    seed: &SeedSd,
    pass: &SearchPass<'_>,
    model: &ErrorModel<f64>,
    params: &SearchParams,
) -> PotentialRegion {
    extent_region(&grow_seed(seed, pass, model, params), pass)
}

/// Pads each side of both regions by `min(max_padding, ⌈fraction·len⌉)`,
/// clamped to sequence bounds and to `max_region`.
pub fn pad_region(region: &mut PotentialRegion, genome: &Genome, params: &SearchParams) {
    for iv in [&mut region.region1, &mut region.region2] {
        let seq_len = genome
            .index_of(&iv.seq_name)
            .map(|s| genome.sequence(s).len())
            .expect("region on a known sequence");
        let pad = ((params.padding_fraction * iv.len() as f64).ceil() as usize).min(params.max_padding);
        let room = params.max_region.saturating_sub(iv.len()) / 2;
        let pad = pad.min(room);
        iv.start = iv.start.saturating_sub(pad);
        iv.end = (iv.end + pad).min(seq_len);
    }
    region.padded = true;
}
