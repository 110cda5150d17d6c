//! End-to-end search: seeding, extension, q-gram filtering, chaining,
//! alignment and final filtering, on the forward strand and against the
//! reverse complement.

mod checkpoint;
mod filter;

pub use checkpoint::{parse_regions, write_regions};
pub use filter::{filter_final, is_redundant, remove_redundant};

use std::path::PathBuf;

use rayon::prelude::*;

use crate::align::{align_chain, jukes_cantor, kimura_distance, AlignParams, Alignment, Cigar, CigarOp};
use crate::chain::{find_anchors_capped, refine_chains, sparse_chain, Anchor, ChainScoring};
use crate::error::{Error, Result};
use crate::genome_io::{Genome, Interval, SdRecord, Strand};
use crate::search::{
    extent_region, grow_seed, pad_region, qgram_accept, query_windows, seeds_for_window, ErrorModel, Extent,
    PotentialRegion, SearchParams, SearchPass, SequenceSide,
};
use crate::sketch::{build_index, MinimizerIndex, SketchParams};

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub model: ErrorModel<f64>,
    /// Seeding and extension sketch (k = 12).
    pub sketch: SketchParams,
    /// Anchor length for chaining.
    pub anchor_k: usize,
    pub q: usize,
    pub search: SearchParams,
    pub chain: ChainScoring,
    pub align: AlignParams,
    /// Minimum alignment length of a reported pair.
    pub min_sd_len: usize,
    /// Each mate needs at least this many unmasked bases.
    pub masked_unique_min: usize,
    /// Reciprocal overlap at which a shorter record is redundant.
    pub redundant_overlap: f64,
    /// Anchor k-mers more frequent than this in a region are not probed.
    pub max_anchor_occ: usize,
    /// Consecutive query windows per work unit.
    pub block_windows: usize,
    /// Worker threads; 0 uses all cores.
    pub threads: usize,
    pub reverse_strand: bool,
    /// Directory for potential-region checkpoints.
    pub checkpoint: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            model: ErrorModel::standard(),
            sketch: SketchParams::seeding(),
            anchor_k: 11,
            q: 5,
            search: SearchParams::default(),
            chain: ChainScoring::default(),
            align: AlignParams::default(),
            min_sd_len: 1000,
            masked_unique_min: 100,
            redundant_overlap: 0.8,
            max_anchor_occ: 500,
            block_windows: 64,
            threads: 0,
            reverse_strand: true,
            checkpoint: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        self.sketch.validate()?;
        self.search.validate()?;
        self.align.validate()?;
        let bad = |m: &str| Err(Error::InvalidParam(m.into()));
        if !(1..=31).contains(&self.anchor_k) {
            return bad("anchor k must lie in [1, 31]");
        }
        if !(1..=31).contains(&self.q) {
            return bad("q must lie in [1, 31]");
        }
        if self.block_windows == 0 {
            return bad("block size must be positive");
        }
        if !(0.0..=1.0).contains(&self.redundant_overlap) {
            return bad("redundant overlap must lie in [0, 1]");
        }
        if self.search.window + 1 < self.sketch.k + self.sketch.w {
            return bad("seed window shorter than one winnowing window");
        }
        Ok(())
    }

    /// Parameters that determine the potential regions.
    fn region_fingerprint(&self, genome: &Genome) -> String {
        let names: Vec<String> =
            genome.sequences().iter().map(|s| format!("{}:{}", s.name, s.len())).collect();
        format!(
            "model={:?}\nsketch={:?}\nq={}\nsearch={:?}\nreverse={}\ngenome={}\n",
            self.model,
            self.sketch,
            self.q,
            self.search,
            self.reverse_strand,
            names.join(",")
        )
    }
}

struct Indexes {
    seed: MinimizerIndex,
    full: MinimizerIndex,
}

impl Indexes {
    fn build(genome: &Genome, params: &SketchParams) -> Self {
        Indexes { seed: build_index(genome, params, true), full: build_index(genome, params, false) }
    }

    fn side<'a>(&'a self, genome: &'a Genome) -> SequenceSide<'a> {
        SequenceSide { genome, seed_index: &self.seed, full_index: &self.full }
    }
}

/// Finds all duplicated pairs in `genome`. Output is sorted and identical
/// for any thread count.
pub fn run(genome: &Genome, config: &RunConfig) -> Result<Vec<SdRecord>> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::InvalidParam(format!("thread pool: {e}")))?;
    pool.install(|| run_in_pool(genome, config))
}

fn run_in_pool(genome: &Genome, config: &RunConfig) -> Result<Vec<SdRecord>> {
    let fingerprint = config.region_fingerprint(genome);
    let cached = match &config.checkpoint {
        Some(dir) => checkpoint::load(dir, &fingerprint)?,
        None => None,
    };
    let regions = match cached {
        Some(r) => {
            log::info!("loaded {} potential regions from checkpoint", r.len());
            r
        }
        None => {
            let r = potential_regions(genome, config);
            if let Some(dir) = &config.checkpoint {
                checkpoint::save(dir, &fingerprint, &r)?;
            }
            r
        }
    };
    log::info!("{} potential regions", regions.len());

    let per_region: Vec<Vec<SdRecord>> =
        regions.par_iter().map(|r| align_region(genome, r, config)).collect::<Result<_>>()?;
    let records: Vec<SdRecord> = per_region.into_iter().flatten().collect();
    let records = remove_redundant(records, config.redundant_overlap);
    let records = filter_final(records, config.masked_unique_min);
    log::info!("{} records after filtering", records.len());
    Ok(records)
}

/// Seeds, extends and q-gram filters both strands, then merges overlapping
/// region pairs and pads them.
pub fn potential_regions(genome: &Genome, config: &RunConfig) -> Vec<PotentialRegion> {
    let fwd = Indexes::build(genome, &config.sketch);
    let mut raw = strand_regions(genome, &fwd, genome, &fwd, Strand::Forward, config);
    if config.reverse_strand {
        let rc = genome.reverse_complement();
        let rc_idx = Indexes::build(&rc, &config.sketch);
        raw.extend(strand_regions(&rc, &rc_idx, genome, &fwd, Strand::Reverse, config));
    }
    let mut merged = merge_regions(raw, config.search.max_padding);
    for r in &mut merged {
        pad_region(r, genome, &config.search);
    }
    merged
}

fn strand_regions(
    query: &Genome,
    query_idx: &Indexes,
    target: &Genome,
    target_idx: &Indexes,
    strand: Strand,
    config: &RunConfig,
) -> Vec<PotentialRegion> {
    let pass = SearchPass { query: query_idx.side(query), target: target_idx.side(target), strand };
    let windows = query_windows(query, config.search.window, config.search.stride);
    let blocks: Vec<Vec<PotentialRegion>> = windows
        .par_chunks(config.block_windows)
        .map(|block| {
            let mut extents: Vec<Extent> = Vec::new();
            let mut out = Vec::new();
            for &i in block {
                for seed in seeds_for_window(&pass, i, &config.model, &config.search) {
                    if extents.iter().any(|e| e.contains_seed(&seed)) {
                        continue;
                    }
                    let ext = grow_seed(&seed, &pass, &config.model, &config.search);
                    extents.push(ext);
                    let region = extent_region(&ext, &pass);
                    if passes_qgram(target, &region, config) {
                        out.push(region);
                    }
                }
            }
            out
        })
        .collect();
    blocks.into_iter().flatten().collect()
}

fn passes_qgram(genome: &Genome, region: &PotentialRegion, config: &RunConfig) -> bool {
    match (genome.extract(&region.region1), genome.extract(&region.region2)) {
        (Ok(a), Ok(b)) => qgram_accept(&a, &b, config.q, &config.model),
        _ => false,
    }
}

/// Unions region pairs that lie within `slack` bp of each other in both
/// regions (same sequences and orientation). Extension can stop short at a
/// large gap or a locally divergent stretch, splitting one duplication into
/// nearby pieces; merging lets chaining see them together. Deterministic
/// for any input order.
pub fn merge_regions(mut regions: Vec<PotentialRegion>, slack: usize) -> Vec<PotentialRegion> {
    let key = |r: &PotentialRegion| {
        (
            r.region1.seq_name.clone(),
            r.region2.seq_name.clone(),
            r.strand,
            r.region1.start,
            r.region1.end,
            r.region2.start,
            r.region2.end,
        )
    };
    regions.sort_by(|a, b| key(a).cmp(&key(b)).then(a.estimate.total_cmp(&b.estimate)));
    let mut out: Vec<PotentialRegion> = Vec::new();
    for r in regions {
        // Fixed point: a union can start overlapping earlier output.
        let mut cur = r;
        loop {
            let hit = out.iter().rposition(|o| {
                o.strand == cur.strand
                    && near(&o.region1, &cur.region1, slack)
                    && near(&o.region2, &cur.region2, slack)
            });
            let Some(at) = hit else { break };
            let o = out.remove(at);
            cur.region1.start = cur.region1.start.min(o.region1.start);
            cur.region1.end = cur.region1.end.max(o.region1.end);
            cur.region2.start = cur.region2.start.min(o.region2.start);
            cur.region2.end = cur.region2.end.max(o.region2.end);
            cur.estimate = cur.estimate.max(o.estimate);
        }
        out.push(cur);
    }
    out.sort_by_key(|a| key(a));
    out
}

fn near(a: &Interval, b: &Interval, slack: usize) -> bool {
    a.seq_name == b.seq_name && a.start <= b.end + slack && b.start <= a.end + slack
}

/// Alignment ends closer than this to a region edge count as running into it.
const EDGE_MARGIN: usize = 1000;

/// Most times a region is widened after running into alignments.
const MAX_GROWTH_ROUNDS: usize = 8;

/// Chains and aligns one padded region pair into candidate records.
///
/// Extension stops where the sketch estimate dips below τ, which happens
/// inside duplications that sit near the error bounds. When an alignment
/// of at least half the minimum length runs into a region edge, that edge
/// moves out by the maximum padding and the region is aligned again. The
/// partial alignment may exceed the error bound on its own when large gaps
/// cluster in it, so error is not checked here.
pub fn align_region(genome: &Genome, region: &PotentialRegion, config: &RunConfig) -> Result<Vec<SdRecord>> {
    let mut region = region.clone();
    for _ in 0..MAX_GROWTH_ROUNDS {
        let (records, edges) = align_once(genome, &region, config)?;
        if !grow_region(&mut region, edges, genome, config) {
            return Ok(records);
        }
    }
    Ok(align_once(genome, &region, config)?.0)
}

/// Which region edges some alignment reached: region1 start and end,
/// region2 start and end, in forward coordinates.
#[derive(Clone, Copy, Default)]
struct Edges([bool; 4]);

fn grow_region(region: &mut PotentialRegion, edges: Edges, genome: &Genome, config: &RunConfig) -> bool {
    let step = config.search.max_padding;
    let limit = config.search.max_region;
    let mut grew = false;
    for (iv, lo, hi) in
        [(&mut region.region1, edges.0[0], edges.0[1]), (&mut region.region2, edges.0[2], edges.0[3])]
    {
        let seq_len = genome.index_of(&iv.seq_name).map(|s| genome.sequence(s).len()).unwrap_or(iv.end);
        let before = (iv.start, iv.end);
        if lo {
            iv.start = iv.start.saturating_sub(step.min(limit.saturating_sub(iv.len())));
        }
        if hi {
            iv.end = (iv.end + step.min(limit.saturating_sub(iv.len()))).min(seq_len);
        }
        grew |= (iv.start, iv.end) != before;
    }
    grew
}

fn align_once(
    genome: &Genome,
    region: &PotentialRegion,
    config: &RunConfig,
) -> Result<(Vec<SdRecord>, Edges)> {
    let s1 = genome.extract(&region.region1)?;
    let s2 = genome.extract(&region.region2)?;
    let (r1, r2) = (&region.region1, &region.region2);
    let same_seq = r1.seq_name == r2.seq_name;

    let mut anchors: Vec<Anchor> = find_anchors_capped(&s1, &s2, config.anchor_k, config.max_anchor_occ);
    if same_seq {
        // Overlapping regions on one sequence see each pair twice, once
        // mirrored; keep the orientation where mate1 starts first.
        anchors.retain(|a| {
            let g2 = match region.strand {
                Strand::Forward => r2.start + a.pos2,
                Strand::Reverse => r2.end - a.end2(),
            };
            r1.start + a.pos1 < g2
        });
    }
    if anchors.is_empty() {
        return Ok((Vec::new(), Edges::default()));
    }
    let span = s1.len().min(s2.len()) as f64;
    let cap = ((config.model.delta_g() * span).ceil() as usize).clamp(100, config.chain.refined_gap_cap);
    let initial = sparse_chain(&anchors, cap, &config.chain);
    let scoring = ChainScoring {
        min_refined_span: ((config.min_sd_len as f64) * (1.0 - config.model.delta)).floor() as usize,
        ..config.chain
    };
    let refined = refine_chains(&initial, &scoring);

    let mut out = Vec::new();
    let mut edges = Edges::default();
    for chain in &refined {
        let mut aln = align_chain(chain, &s1, &s2, &config.align)?;
        if same_seq && region.strand == Strand::Reverse {
            aln = clip_at_fold(aln, region, &s1, &s2, &config.align);
        }
        if aln.aligned_length == 0 {
            continue;
        }
        if 2 * aln.aligned_length >= config.min_sd_len {
            let low2 = aln.start2 < EDGE_MARGIN;
            let high2 = aln.end2() + EDGE_MARGIN > s2.len();
            let (start2, end2) = match region.strand {
                Strand::Forward => (low2, high2),
                Strand::Reverse => (high2, low2),
            };
            let hit = [aln.start1 < EDGE_MARGIN, aln.end1() + EDGE_MARGIN > s1.len(), start2, end2];
            for (e, h) in edges.0.iter_mut().zip(hit) {
                *e |= h;
            }
        }
        let rec = to_record(genome, region, &aln, &s1, &s2)?;
        if keep_candidate(&rec, config) {
            out.push(rec);
        }
    }
    Ok((out, edges))
}

/// An inverted pair on one sequence walks mate1 forward and mate2 backward
/// through the same coordinates; past the point where they meet, the
/// alignment repeats itself mirrored. Keeps the columns before that point.
fn clip_at_fold(
    aln: Alignment,
    region: &PotentialRegion,
    s1: &[u8],
    s2: &[u8],
    params: &AlignParams,
) -> Alignment {
    let (r1, r2) = (&region.region1, &region.region2);
    let (mut i, mut j) = (aln.start1, aln.start2);
    let mut kept = Cigar::new();
    for &(op, count) in aln.cigar.runs() {
        for _ in 0..count {
            // Forward position of the next base of each mate.
            if r1.start + i >= r2.end - j {
                let kept = trim_trailing_gaps(kept);
                return Alignment::from_cigar(kept, s1, s2, aln.start1, aln.start2, params);
            }
            kept.push(op, 1);
            match op {
                CigarOp::Match => {
                    i += 1;
                    j += 1;
                }
                CigarOp::Del => i += 1,
                CigarOp::Ins => j += 1,
            }
        }
    }
    aln
}

fn trim_trailing_gaps(cigar: Cigar) -> Cigar {
    let mut runs = cigar.runs().to_vec();
    while runs.last().is_some_and(|r| r.0 != CigarOp::Match) {
        runs.pop();
    }
    Cigar::from_runs(runs)
}

fn to_record(
    genome: &Genome,
    region: &PotentialRegion,
    aln: &Alignment,
    s1: &[u8],
    s2: &[u8],
) -> Result<SdRecord> {
    let (r1, r2) = (&region.region1, &region.region2);
    let mate1 =
        Interval::new(r1.seq_name.clone(), r1.start + aln.start1, r1.start + aln.end1(), Strand::Forward);
    let mate2 = match region.strand {
        Strand::Forward => {
            Interval::new(r2.seq_name.clone(), r2.start + aln.start2, r2.start + aln.end2(), Strand::Forward)
        }
        Strand::Reverse => {
            Interval::new(r2.seq_name.clone(), r2.end - aln.end2(), r2.end - aln.start2, Strand::Reverse)
        }
    };
    let masked =
        |iv: &Interval| -> Result<f64> { Ok(genome.masked_count(iv)? as f64 / iv.len().max(1) as f64) };
    let mut rec = SdRecord {
        masked_fraction1: masked(&mate1)?,
        masked_fraction2: masked(&mate2)?,
        mate1,
        mate2,
        alignment_length: aln.aligned_length,
        edit_distance: aln.edit_distance(),
        error_total: aln.error_total(),
        error_mutation: aln.error_mutation(),
        error_gap: aln.error_gap(),
        cigar: aln.cigar.clone(),
        kimura: kimura_distance::<f64>(aln, s1, s2),
        jukes_cantor: jukes_cantor::<f64>(aln),
    };
    rec.canonicalize();
    Ok(rec)
}

/// The pair conditions: length, error and self-overlap.
pub fn keep_candidate(rec: &SdRecord, config: &RunConfig) -> bool {
    let delta = config.model.delta;
    let min_len = rec.mate1.len().min(rec.mate2.len());
    rec.alignment_length >= config.min_sd_len
        && rec.error_total <= delta + 1e-12
        && rec.mate1.overlap(&rec.mate2) as f64 <= delta * min_len as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(a: (usize, usize), b: (usize, usize)) -> PotentialRegion {
        PotentialRegion {
            region1: Interval::new("c", a.0, a.1, Strand::Forward),
            region2: Interval::new("c", b.0, b.1, Strand::Forward),
            strand: Strand::Forward,
            estimate: 0.5,
            padded: false,
        }
    }

    #[test]
    fn merge_unions_overlaps() {
        let out = merge_regions(
            vec![pr((100, 200), (1100, 1200)), pr((0, 150), (1000, 1150)), pr((5000, 6000), (100, 200))],
            0,
        );
        assert_eq!(out.len(), 2);
        assert_eq!((out[0].region1.start, out[0].region1.end), (0, 200));
        assert_eq!((out[0].region2.start, out[0].region2.end), (1000, 1200));
        let near = merge_regions(vec![pr((0, 100), (1000, 1100)), pr((300, 400), (1300, 1400))], 250);
        assert_eq!(near.len(), 1);
        let far = merge_regions(vec![pr((0, 100), (1000, 1100)), pr((300, 400), (9300, 9400))], 250);
        assert_eq!(far.len(), 2);
    }

    #[test]
    fn checkpoint_roundtrip() {
        let regions = vec![pr((0, 150), (1000, 1150))];
        let mut buf = Vec::new();
        write_regions(&mut buf, &regions).unwrap();
        let back = parse_regions(buf.as_slice()).unwrap();
        assert_eq!(back[0].region1, regions[0].region1);
        assert_eq!(back[0].estimate, 0.5);
    }
}
