//! Synthetic duplications under the split error model, detection scoring,
//! and brute-force reference implementations.

pub mod oracle;
mod truth;

pub use truth::{parse_truth, read_truth, render_truth, score_by_delta, write_truth, BucketScore};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::genome_io::{reverse_complement, Genome, Interval, SdRecord, Sequence, Strand};

/// Largest budget either error class may take.
pub const MAX_CLASS_BUDGET: f64 = 0.15;
const SMALL_INDEL_FRACTION: f64 = 0.1;
const SMALL_INDEL_MAX: usize = 5;
const GAP_MIN: f64 = 50.0;
const GAP_MAX: f64 = 10_000.0;
const PLACEMENT_TRIES: usize = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    /// Length range of the duplicated segment.
    pub seq_len_range: (usize, usize),
    /// Length range of the random backbone the pair is placed in.
    pub backbone_len_range: (usize, usize),
    pub delta: f64,
    /// Small-mutation budget; drawn per instance when `None`.
    pub delta_m: Option<f64>,
    /// Large-gap budget; `delta - delta_m` when `None`.
    pub delta_g: Option<f64>,
    /// Per-base probability that a large gap starts.
    pub p_gap: f64,
    /// Probability that the copy is reverse-complemented.
    pub inverted_fraction: f64,
    pub rng_seed: u64,
    pub count: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            seq_len_range: (1_000, 25_000),
            backbone_len_range: (5_000, 50_000),
            delta: 0.1,
            delta_m: None,
            delta_g: None,
            p_gap: 0.005,
            inverted_fraction: 0.0,
            rng_seed: 1,
            count: 1,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::SimConfig(m));
        let (lo, hi) = self.seq_len_range;
        if lo == 0 || lo > hi {
            return bad(format!("segment length range {lo}..{hi} is empty"));
        }
        let (blo, bhi) = self.backbone_len_range;
        if blo > bhi || blo < lo {
            return bad(format!("backbone range {blo}..{bhi} cannot hold a {lo} bp segment"));
        }
        if !(0.0..=2.0 * MAX_CLASS_BUDGET).contains(&self.delta) {
            return bad(format!("delta {} outside [0, 0.3]", self.delta));
        }
        let cap = MAX_CLASS_BUDGET.min(self.delta) + 1e-12;
        for (name, v) in [("delta_m", self.delta_m), ("delta_g", self.delta_g)] {
            if let Some(v) = v {
                if !(0.0..=cap).contains(&v) {
                    return bad(format!("{name} {v} outside [0, min(0.15, delta)]"));
                }
            }
        }
        if let (Some(m), Some(g)) = (self.delta_m, self.delta_g) {
            if m + g > self.delta + 1e-12 {
                return bad(format!("delta_m + delta_g = {} exceeds delta", m + g));
            }
        }
        if !(0.0..=1.0).contains(&self.p_gap) || !(0.0..=1.0).contains(&self.inverted_fraction) {
            return bad("probabilities must lie in [0, 1]".into());
        }
        Ok(())
    }

    /// Budgets for one instance.
    fn budgets(&self, rng: &mut impl Rng) -> (f64, f64) {
        let dm = self.delta_m.unwrap_or_else(|| {
            let lo = (self.delta - MAX_CLASS_BUDGET).max(0.0);
            let hi = self.delta.min(MAX_CLASS_BUDGET);
            if hi > lo {
                rng.gen_range(lo..=hi)
            } else {
                lo
            }
        });
        let dg = self.delta_g.unwrap_or((self.delta - dm).max(0.0));
        (dm, dg)
    }
}

/// One edit against the original segment, at `pos` in original coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EditKind {
    Substitute(u8),
    /// Inserted before `pos`.
    Insert(Vec<u8>),
    Delete(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edit {
    pub pos: usize,
    pub kind: EditKind,
    /// Drawn from the large-gap budget.
    pub large: bool,
}

/// Applies a position-sorted script to `original`.
pub fn replay(original: &[u8], script: &[Edit]) -> Vec<u8> {
    let mut out = Vec::with_capacity(original.len());
    let mut at = 0;
    for e in script {
        out.extend_from_slice(&original[at..e.pos]);
        at = e.pos;
        match &e.kind {
            EditKind::Substitute(b) => {
                out.push(*b);
                at += 1;
            }
            EditKind::Insert(s) => out.extend_from_slice(s),
            EditKind::Delete(len) => at += len,
        }
    }
    out.extend_from_slice(&original[at..]);
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct TruthRecord {
    pub original: Interval,
    /// Reverse strand when the copy was inverted; extracting it yields the
    /// replayed script.
    pub copy: Interval,
    pub scripted_delta_m: f64,
    pub scripted_delta_g: f64,
    pub mutation_script: Vec<Edit>,
}

impl TruthRecord {
    pub fn scripted_delta(&self) -> f64 {
        self.scripted_delta_m + self.scripted_delta_g
    }

    pub fn verify(&self, genome: &Genome) -> Result<bool> {
        let orig = genome.extract(&self.original)?;
        Ok(replay(&orig, &self.mutation_script) == genome.extract(&self.copy)?)
    }
}

fn random_bases(rng: &mut impl Rng, len: usize) -> Vec<u8> {
    (0..len).map(|_| b"ACGT"[rng.gen_range(0..4)]).collect()
}

/// Tracks claimed original positions so events never touch or overlap.
struct Claims(Vec<bool>);

impl Claims {
    /// Claims `[pos, pos+len)` plus one free base on each side.
    fn try_claim(&mut self, pos: usize, len: usize) -> bool {
        let lo = pos.saturating_sub(1);
        let hi = (pos + len.max(1) + 1).min(self.0.len());
        if pos + len.max(1) > self.0.len() || self.0[lo..hi].iter().any(|&c| c) {
            return false;
        }
        self.0[pos..pos + len.max(1)].iter_mut().for_each(|c| *c = true);
        true
    }
}

/// Draws a mutation script for `original` with small-edit budget
/// `round(dm·n)` bases and large-gap budget `round(dg·n)` bases.
pub fn mutate(original: &[u8], dm: f64, dg: f64, p_gap: f64, rng: &mut impl Rng) -> Result<Vec<Edit>> {
    let n = original.len();
    let mut claims = Claims(vec![false; n]);
    let mut script = Vec::new();
    let place = |claims: &mut Claims, rng: &mut ChaCha8Rng, lo: usize, hi: usize, len: usize| {
        for _ in 0..PLACEMENT_TRIES {
            if hi <= lo + len {
                break;
            }
            let pos = rng.gen_range(lo..hi - len);
            if claims.try_claim(pos, len) {
                return Ok(pos);
            }
        }
        Err(Error::SimConfig(format!("cannot place a {len} bp event in a {n} bp segment")))
    };
    let mut rng = ChaCha8Rng::from_rng(rng).expect("chacha seeding");

    let mut gap_budget = (dg * n as f64).round() as usize;
    let max_gaps = (n as f64 * p_gap).floor() as usize + 1;
    let margin = n / 20;
    for _ in 0..max_gaps {
        if gap_budget == 0 {
            break;
        }
        let drawn = rng.gen_range(GAP_MIN.ln()..=GAP_MAX.ln()).exp().round() as usize;
        let len = drawn.min(gap_budget);
        gap_budget -= len;
        if rng.gen_bool(0.5) {
            let pos = place(&mut claims, &mut rng, margin, n - margin, len)?;
            script.push(Edit { pos, kind: EditKind::Delete(len), large: true });
        } else {
            let pos = place(&mut claims, &mut rng, margin, n - margin, 0)?;
            let ins = random_bases(&mut rng, len);
            script.push(Edit { pos, kind: EditKind::Insert(ins), large: true });
        }
    }

    let mut budget = (dm * n as f64).round() as usize;
    while budget > 0 {
        if !rng.gen_bool(SMALL_INDEL_FRACTION) {
            let pos = place(&mut claims, &mut rng, 0, n, 1)?;
            let old = original[pos];
            let sub = loop {
                let b = b"ACGT"[rng.gen_range(0..4)];
                if b != old {
                    break b;
                }
            };
            script.push(Edit { pos, kind: EditKind::Substitute(sub), large: false });
            budget -= 1;
            continue;
        }
        let len = rng.gen_range(1..=SMALL_INDEL_MAX).min(budget);
        budget -= len;
        if rng.gen_bool(0.5) {
            let pos = place(&mut claims, &mut rng, 1, n - 1, len)?;
            script.push(Edit { pos, kind: EditKind::Delete(len), large: false });
        } else {
            let pos = place(&mut claims, &mut rng, 1, n - 1, 0)?;
            script.push(Edit { pos, kind: EditKind::Insert(random_bases(&mut rng, len)), large: false });
        }
    }
    script.sort_by_key(|e| e.pos);
    Ok(script)
}

fn edit_bases(e: &Edit) -> usize {
    match &e.kind {
        EditKind::Substitute(_) => 1,
        EditKind::Insert(s) => s.len(),
        EditKind::Delete(l) => *l,
    }
}

/// Realized `(δ_M, δ_G)` of a script, relative to the original length.
pub fn scripted_deltas(script: &[Edit], original_len: usize) -> (f64, f64) {
    let (mut m, mut g) = (0, 0);
    for e in script {
        if e.large {
            g += edit_bases(e);
        } else {
            m += edit_bases(e);
        }
    }
    let n = original_len.max(1) as f64;
    (m as f64 / n, g as f64 / n)
}

/// One duplicated pair on a random backbone. Deterministic for a given
/// config (instance `0` of [`simulate_batch`]).
pub fn simulate_pair(config: &SimConfig) -> Result<(Genome, TruthRecord)> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    simulate_one(config, &mut rng, "sim0")
}

/// `config.count` independent instances; instance `i` uses stream `i` of the
/// seeded generator.
pub fn simulate_batch(config: &SimConfig) -> Result<Vec<(Genome, TruthRecord)>> {
    config.validate()?;
    (0..config.count)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
            rng.set_stream(i as u64);
            simulate_one(config, &mut rng, &format!("sim{i}"))
        })
        .collect()
}

fn simulate_one(config: &SimConfig, rng: &mut ChaCha8Rng, name: &str) -> Result<(Genome, TruthRecord)> {
    let backbone_len = rng.gen_range(config.backbone_len_range.0..=config.backbone_len_range.1);
    let (lo, hi) = config.seq_len_range;
    let hi = hi.min(backbone_len / 2).max(lo);
    let n = rng.gen_range(lo..=hi).min(backbone_len);
    let (dm, dg) = config.budgets(rng);

    let mut backbone = random_bases(rng, backbone_len);
    let a = rng.gen_range(0..=backbone_len - n);
    let original = backbone[a..a + n].to_vec();
    let script = mutate(&original, dm, dg, config.p_gap, rng)?;
    let copy = replay(&original, &script);
    let inverted = rng.gen_bool(config.inverted_fraction);
    let placed = if inverted { reverse_complement(&copy) } else { copy.clone() };

    // Insertion point outside the open original interval.
    let slots = a + 1 + (backbone_len - a - n);
    let r = rng.gen_range(0..slots);
    let p = if r <= a { r } else { a + n + (r - a - 1) };
    backbone.splice(p..p, placed.iter().copied());
    let orig_start = if p <= a { a + copy.len() } else { a };

    let genome = Genome::new(vec![Sequence::unmasked(name, backbone)?])?;
    let (sm, sg) = scripted_deltas(&script, n);
    let truth = TruthRecord {
        original: Interval::new(name, orig_start, orig_start + n, Strand::Forward),
        copy: Interval::new(
            name,
            p,
            p + copy.len(),
            if inverted { Strand::Reverse } else { Strand::Forward },
        ),
        scripted_delta_m: sm,
        scripted_delta_g: sg,
        mutation_script: script,
    };
    Ok((genome, truth))
}

/// Layout of a multi-duplication genome.
#[derive(Clone, Debug, PartialEq)]
pub struct GenomeSimConfig {
    pub total_len: usize,
    pub num_sequences: usize,
    pub num_sds: usize,
    pub sd_len_range: (usize, usize),
    pub delta_range: (f64, f64),
    pub p_gap: f64,
    pub inverted_fraction: f64,
    pub rng_seed: u64,
}

impl Default for GenomeSimConfig {
    fn default() -> Self {
        GenomeSimConfig {
            total_len: 2_000_000,
            num_sequences: 2,
            num_sds: 50,
            sd_len_range: (1_000, 10_000),
            delta_range: (0.01, 0.25),
            p_gap: 0.005,
            inverted_fraction: 0.5,
            rng_seed: 7,
        }
    }
}

/// Random genome holding `num_sds` planted pairs. Originals and copies are
/// shuffled across sequences and separated by random filler.
pub fn simulate_genome(config: &GenomeSimConfig) -> Result<(Genome, Vec<TruthRecord>)> {
    let (lo, hi) = config.sd_len_range;
    if lo == 0 || lo > hi || config.num_sequences == 0 {
        return Err(Error::SimConfig("empty length range or no sequences".into()));
    }
    if config.delta_range.0 > config.delta_range.1 || config.delta_range.1 > 2.0 * MAX_CLASS_BUDGET {
        return Err(Error::SimConfig("delta range must lie in [0, 0.3]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);

    struct Piece {
        sd: usize,
        is_copy: bool,
        bases: Vec<u8>,
    }
    let mut pieces = Vec::new();
    let mut meta = Vec::new();
    for sd in 0..config.num_sds {
        let n = rng.gen_range(lo..=hi);
        let delta = rng.gen_range(config.delta_range.0..=config.delta_range.1);
        let sim = SimConfig { delta, p_gap: config.p_gap, ..SimConfig::default() };
        let (dm, dg) = sim.budgets(&mut rng);
        let original = random_bases(&mut rng, n);
        let script = mutate(&original, dm, dg, config.p_gap, &mut rng)?;
        let copy = replay(&original, &script);
        let inverted = rng.gen_bool(config.inverted_fraction);
        let placed = if inverted { reverse_complement(&copy) } else { copy };
        pieces.push(Piece { sd, is_copy: false, bases: original });
        pieces.push(Piece { sd, is_copy: true, bases: placed });
        meta.push((script, inverted, n));
    }
    let used: usize = pieces.iter().map(|p| p.bases.len()).sum();
    if used >= config.total_len {
        return Err(Error::SimConfig(format!(
            "{} bp of duplications do not fit in {} bp",
            used, config.total_len
        )));
    }
    pieces.shuffle(&mut rng);

    let per_seq = config.num_sequences;
    let mut buckets: Vec<Vec<Piece>> = (0..per_seq).map(|_| Vec::new()).collect();
    for (i, p) in pieces.into_iter().enumerate() {
        buckets[i % per_seq].push(p);
    }
    let filler_total = config.total_len - used;
    let mut locations: Vec<[Option<Interval>; 2]> = vec![[None, None]; config.num_sds];
    let mut sequences = Vec::new();
    for (s, bucket) in buckets.into_iter().enumerate() {
        let name = format!("chr{}", s + 1);
        let share = filler_total / per_seq + if s == 0 { filler_total % per_seq } else { 0 };
        let mut cuts: Vec<usize> = (0..bucket.len()).map(|_| rng.gen_range(0..=share)).collect();
        cuts.push(0);
        cuts.push(share);
        cuts.sort_unstable();
        let mut seq = Vec::new();
        for (k, piece) in bucket.into_iter().enumerate() {
            seq.extend(random_bases(&mut rng, cuts[k + 1] - cuts[k]));
            let start = seq.len();
            seq.extend_from_slice(&piece.bases);
            let (_, inverted, _) = &meta[piece.sd];
            let strand = if piece.is_copy && *inverted { Strand::Reverse } else { Strand::Forward };
            locations[piece.sd][piece.is_copy as usize] =
                Some(Interval::new(name.clone(), start, seq.len(), strand));
        }
        let tail = cuts[cuts.len() - 1] - cuts[cuts.len() - 2];
        seq.extend(random_bases(&mut rng, tail));
        sequences.push(Sequence::unmasked(name, seq)?);
    }

    let genome = Genome::new(sequences)?;
    let truths = meta
        .into_iter()
        .zip(locations)
        .map(|((script, _, n), [orig, copy])| {
            let (sm, sg) = scripted_deltas(&script, n);
            TruthRecord {
                original: orig.expect("placed"),
                copy: copy.expect("placed"),
                scripted_delta_m: sm,
                scripted_delta_g: sg,
                mutation_script: script,
            }
        })
        .collect();
    Ok((genome, truths))
}

/// Detection threshold: a call must cover more than this fraction of each
/// truth interval.
pub const DETECTION_COVERAGE: f64 = 0.95;

fn coverage(call: &Interval, truth: &Interval) -> f64 {
    call.overlap(truth) as f64 / truth.len().max(1) as f64
}

/// True iff some call covers more than 95% of both truth intervals.
pub fn score_detection(truth: &TruthRecord, calls: &[SdRecord]) -> bool {
    calls.iter().any(|c| {
        let direct = coverage(&c.mate1, &truth.original) > DETECTION_COVERAGE
            && coverage(&c.mate2, &truth.copy) > DETECTION_COVERAGE;
        let swapped = coverage(&c.mate2, &truth.original) > DETECTION_COVERAGE
            && coverage(&c.mate1, &truth.copy) > DETECTION_COVERAGE;
        direct || swapped
    })
}
