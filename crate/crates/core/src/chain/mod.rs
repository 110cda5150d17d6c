//! Exact-match anchors and two-tier sparse chaining.
//!
//! Scores are fixed-point integers in units of 1/100 bp so the sparse DP and
//! a quadratic reference compute bit-identical optima.

mod anchor;
mod refine;
mod sparse;

pub use anchor::{find_anchors, find_anchors_capped, Anchor};
pub use refine::refine_chains;
pub use sparse::{chain_items, extract_chains, sparse_chain, ChainItem, DpResult};

/// Score units per matched base.
pub const SCORE_SCALE: i64 = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tier {
    Initial,
    Refined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChainScoring {
    /// Units per matched anchor base.
    pub match_per_bp: i64,
    /// Units per unaligned base between anchors in the initial tier.
    pub initial_gap_per_bp: i64,
    /// Units charged once per gap between initial chains.
    pub refined_gap_open: i64,
    /// Units per unaligned base between initial chains.
    pub refined_gap_per_bp: i64,
    /// Largest gap (either sequence) bridged by a refined chain.
    pub refined_gap_cap: usize,
    /// Refined chains spanning fewer bases than this are dropped.
    pub min_refined_span: usize,
    /// Consecutive initial chains may overlap by this many bases when
    /// refined; the later one is trimmed.
    pub refined_overlap: usize,
}

impl Default for ChainScoring {
    /// Gap cost 0.01 per bp in the initial tier; 100 + 0.05 per bp when
    /// refining, with gaps capped at 10 Kbp.
    fn default() -> Self {
        ChainScoring {
            match_per_bp: SCORE_SCALE,
            initial_gap_per_bp: 1,
            refined_gap_open: 100 * SCORE_SCALE,
            refined_gap_per_bp: 5,
            refined_gap_cap: 10_000,
            min_refined_span: 750,
            refined_overlap: 10,
        }
    }
}

impl ChainScoring {
    /// Scoring from per-bp costs expressed in matched-base units.
    pub fn from_costs(initial_gap: f64, refined_open: f64, refined_extend: f64) -> Self {
        let units = |v: f64| (v * SCORE_SCALE as f64).round() as i64;
        ChainScoring {
            initial_gap_per_bp: units(initial_gap),
            refined_gap_open: units(refined_open),
            refined_gap_per_bp: units(refined_extend),
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub anchors: Vec<Anchor>,
    /// Fixed-point score, see [`SCORE_SCALE`].
    pub score: i64,
    /// `[start, end)` covered in the first sequence.
    pub span1: (usize, usize),
    pub span2: (usize, usize),
    pub tier: Tier,
}

impl Chain {
    pub fn from_anchors(anchors: Vec<Anchor>, score: i64, tier: Tier) -> Self {
        let first = anchors.first().expect("chain has anchors");
        let last = anchors.last().expect("chain has anchors");
        Chain { span1: (first.pos1, last.end1()), span2: (first.pos2, last.end2()), anchors, score, tier }
    }

    pub fn score_bp(&self) -> f64 {
        self.score as f64 / SCORE_SCALE as f64
    }

    pub fn span_len(&self) -> usize {
        (self.span1.1 - self.span1.0).max(self.span2.1 - self.span2.0)
    }

    /// Anchors strictly increase and do not overlap in either sequence.
    pub fn is_colinear(&self) -> bool {
        self.anchors.windows(2).all(|w| w[0].end1() <= w[1].pos1 && w[0].end2() <= w[1].pos2)
    }

    /// Largest gap (in either sequence) between consecutive anchors.
    pub fn max_gap(&self) -> usize {
        self.anchors
            .windows(2)
            .map(|w| (w[1].pos1 - w[0].end1()).max(w[1].pos2 - w[0].end2()))
            .max()
            .unwrap_or(0)
    }
}
