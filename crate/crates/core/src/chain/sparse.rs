use super::{Anchor, Chain, ChainScoring, Tier};

/// A rectangle in the two-sequence plane carrying a weight: an anchor in the
/// first tier, a whole chain in the second.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ChainItem {
    pub x: usize,
    pub y: usize,
    pub ex: usize,
    pub ey: usize,
    pub weight: i64,
}

/// Per-item best chain score ending at that item, and the chosen predecessor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpResult {
    pub f: Vec<i64>,
    pub pred: Vec<Option<usize>>,
}

const NONE: (i64, usize) = (i64::MIN, usize::MAX);

/// Max segment tree over leaf slots; ties go to the lower slot.
struct MaxTree {
    size: usize,
    node: Vec<(i64, usize)>,
}

impl MaxTree {
    fn new(n: usize) -> Self {
        let size = n.next_power_of_two().max(1);
        MaxTree { size, node: vec![NONE; 2 * size] }
    }

    fn better(a: (i64, usize), b: (i64, usize)) -> (i64, usize) {
        if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
            b
        } else {
            a
        }
    }

    fn set(&mut self, slot: usize, value: (i64, usize)) {
        let mut i = slot + self.size;
        self.node[i] = value;
        while i > 1 {
            i /= 2;
            self.node[i] = Self::better(self.node[2 * i], self.node[2 * i + 1]);
        }
    }

    /// Best over slots `[lo, hi)`.
    fn query(&self, lo: usize, hi: usize) -> (i64, usize) {
        let (mut l, mut r) = (lo + self.size, hi + self.size);
        let mut best = NONE;
        while l < r {
            if l & 1 == 1 {
                best = Self::better(best, self.node[l]);
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                best = Self::better(best, self.node[r]);
            }
            l /= 2;
            r /= 2;
        }
        best
    }
}

/// Colinear chaining DP over `items`, which must be sorted.
///
/// `f[b] = w_b + max(0, max_a f[a] - open - per_bp * (gap1 + gap2))` over
/// predecessors `a` ending at or before `b` starts in both sequences with
/// both gaps at most `cap`. Rewriting the gap cost as
/// `per_bp * (a.ex + a.ey) - per_bp * (b.x + b.y)` makes the inner maximum a
/// range query over a sweep, so the whole DP is O(n log n).
pub fn chain_items(items: &[ChainItem], open: i64, per_bp: i64, cap: usize) -> DpResult {
    debug_assert!(items.windows(2).all(|w| w[0] <= w[1]));
    let n = items.len();
    let mut by_end: Vec<usize> = (0..n).collect();
    by_end.sort_by_key(|&i| (items[i].ex, i));
    let mut slots: Vec<usize> = (0..n).collect();
    slots.sort_by_key(|&i| (items[i].ey, i));
    let mut slot_of = vec![0; n];
    for (s, &i) in slots.iter().enumerate() {
        slot_of[i] = s;
    }
    let slot_ey: Vec<usize> = slots.iter().map(|&i| items[i].ey).collect();

    let mut tree = MaxTree::new(n);
    let mut f = vec![0i64; n];
    let mut pred = vec![None; n];
    let (mut inserted, mut removed) = (0, 0);
    for b in 0..n {
        let it = items[b];
        while inserted < n && items[by_end[inserted]].ex <= it.x {
            let a = by_end[inserted];
            let key = f[a] + per_bp * (items[a].ex + items[a].ey) as i64;
            tree.set(slot_of[a], (key, a));
            inserted += 1;
        }
        while removed < inserted && items[by_end[removed]].ex + cap < it.x {
            tree.set(slot_of[by_end[removed]], NONE);
            removed += 1;
        }
        let lo = slot_ey.partition_point(|&e| e + cap < it.y);
        let hi = slot_ey.partition_point(|&e| e <= it.y);
        let (key, a) = if lo < hi { tree.query(lo, hi) } else { NONE };
        f[b] = it.weight;
        if key != i64::MIN {
            let link = key - open - per_bp * (it.x + it.y) as i64;
            if link > 0 {
                f[b] += link;
                pred[b] = Some(a);
            }
        }
    }
    DpResult { f, pred }
}

/// Greedy extraction: repeatedly take the highest unconsumed chain end and
/// walk predecessors until one is consumed. A truncated chain keeps only the
/// score accrued after the cut.
pub fn extract_chains(items: &[ChainItem], dp: &DpResult) -> Vec<(Vec<usize>, i64)> {
    let n = items.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(dp.f[i]), i));
    let mut used = vec![false; n];
    let mut out = Vec::new();
    for end in order {
        if used[end] {
            continue;
        }
        let mut path = vec![end];
        used[end] = true;
        let mut cur = end;
        while let Some(p) = dp.pred[cur] {
            if used[p] {
                break;
            }
            used[p] = true;
            path.push(p);
            cur = p;
        }
        path.reverse();
        let first = path[0];
        out.push((path, dp.f[end] - dp.f[first] + items[first].weight));
    }
    out
}

pub(super) fn anchor_item(a: &Anchor, scoring: &ChainScoring) -> ChainItem {
    ChainItem {
        x: a.pos1,
        y: a.pos2,
        ex: a.end1(),
        ey: a.end2(),
        weight: a.length as i64 * scoring.match_per_bp,
    }
}

/// First-tier chaining of anchors with linear gap cost and gaps of at most
/// `gap_cap` bases in either sequence. Every anchor lands in exactly one
/// returned chain; chains come out best first.
pub fn sparse_chain(anchors: &[Anchor], gap_cap: usize, scoring: &ChainScoring) -> Vec<Chain> {
    let mut anchors: Vec<Anchor> = anchors.iter().filter(|a| a.length > 0).copied().collect();
    anchors.sort_unstable();
    anchors.dedup();
    let items: Vec<ChainItem> = anchors.iter().map(|a| anchor_item(a, scoring)).collect();
    let dp = chain_items(&items, 0, scoring.initial_gap_per_bp, gap_cap);
    extract_chains(&items, &dp)
        .into_iter()
        .map(|(path, score)| {
            Chain::from_anchors(path.into_iter().map(|i| anchors[i]).collect(), score, Tier::Initial)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton() {
        let s = ChainScoring::default();
        let c = sparse_chain(&[Anchor::new(5, 7, 20)], 100, &s);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].score, 20 * s.match_per_bp);
        assert_eq!(c[0].span1, (5, 25));
    }

    #[test]
    fn staircase_links() {
        let s = ChainScoring::default();
        let anchors: Vec<Anchor> = (0..10).map(|i| Anchor::new(i * 30, i * 30 + 2, 20)).collect();
        let c = sparse_chain(&anchors, 100, &s);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].anchors, anchors);
        assert_eq!(c[0].score, 10 * 2000 - 9 * 20);
        assert!(c[0].is_colinear());
    }

    #[test]
    fn cap_splits() {
        let s = ChainScoring::default();
        let anchors = [Anchor::new(0, 0, 20), Anchor::new(200, 200, 20)];
        assert_eq!(sparse_chain(&anchors, 100, &s).len(), 2);
        assert_eq!(sparse_chain(&anchors, 180, &s).len(), 1);
    }

    #[test]
    fn overlapping_anchors_do_not_link() {
        let s = ChainScoring::default();
        let anchors = [Anchor::new(0, 0, 20), Anchor::new(10, 30, 20)];
        assert_eq!(sparse_chain(&anchors, 1000, &s).len(), 2);
    }
}
