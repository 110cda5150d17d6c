use super::sparse::{chain_items, extract_chains, ChainItem};
use super::{Anchor, Chain, ChainScoring, Tier};

/// Second-tier chaining: each initial chain becomes one item weighted by its
/// score, re-chained with an affine gap cost and the refined gap cap. Chains
/// spanning fewer than `scoring.min_refined_span` bases are dropped.
///
/// An exact match ending at an indel often runs a few bases past it by
/// chance, so consecutive chains may overlap by up to
/// `scoring.refined_overlap` bases; the overlap is cut from the later one.
pub fn refine_chains(initial: &[Chain], scoring: &ChainScoring) -> Vec<Chain> {
    let mut chains: Vec<&Chain> = initial.iter().filter(|c| !c.anchors.is_empty()).collect();
    chains.sort_by_key(|c| (c.span1, c.span2, std::cmp::Reverse(c.score), c.anchors.first().copied()));
    let mut pairs: Vec<(ChainItem, &Chain)> = chains
        .into_iter()
        .map(|c| {
            let shift = scoring.refined_overlap.min(c.span1.1 - c.span1.0 - 1).min(c.span2.1 - c.span2.0 - 1);
            let item = ChainItem {
                x: c.span1.0 + shift,
                y: c.span2.0 + shift,
                ex: c.span1.1,
                ey: c.span2.1,
                weight: c.score,
            };
            (item, c)
        })
        .collect();
    // Shifting can reorder starts; the DP needs items sorted.
    pairs.sort_by_key(|&(item, _)| item);
    let (items, chains): (Vec<ChainItem>, Vec<&Chain>) = pairs.into_iter().unzip();
    let dp =
        chain_items(&items, scoring.refined_gap_open, scoring.refined_gap_per_bp, scoring.refined_gap_cap);
    extract_chains(&items, &dp)
        .into_iter()
        .map(|(path, score)| {
            let anchors = trim_overlaps(path.iter().flat_map(|&i| chains[i].anchors.iter().copied()));
            Chain::from_anchors(anchors, score, Tier::Refined)
        })
        .filter(|c| c.span_len() >= scoring.min_refined_span)
        .collect()
}

/// Cuts the start of each anchor that overlaps its predecessor in either
/// sequence; anchors left empty are dropped.
fn trim_overlaps(anchors: impl Iterator<Item = Anchor>) -> Vec<Anchor> {
    let mut out: Vec<Anchor> = Vec::new();
    for mut a in anchors {
        if let Some(p) = out.last() {
            let cut = p.end1().saturating_sub(a.pos1).max(p.end2().saturating_sub(a.pos2));
            if cut >= a.length {
                continue;
            }
            a.pos1 += cut;
            a.pos2 += cut;
            a.length -= cut;
        }
        out.push(a);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::{sparse_chain, Anchor};
    use super::*;

    fn block(start1: usize, start2: usize, len: usize) -> Vec<Anchor> {
        (0..len / 50).map(|i| Anchor::new(start1 + i * 50, start2 + i * 50, 40)).collect()
    }

    #[test]
    fn merges_across_moderate_gap() {
        let s = ChainScoring::default();
        let mut anchors = block(0, 0, 1000);
        anchors.extend(block(1500, 1500, 1000));
        let initial = sparse_chain(&anchors, 100, &s);
        assert_eq!(initial.len(), 2);
        let refined = refine_chains(&initial, &s);
        assert_eq!(refined.len(), 1);
        assert_eq!(refined[0].tier, Tier::Refined);
        assert_eq!(refined[0].anchors.len(), 40);
        assert!(refined[0].is_colinear());
    }

    #[test]
    fn links_chains_overlapping_by_a_few_bases() {
        let s = ChainScoring::default();
        // A 154 bp deletion whose left match runs one base into the right block.
        let left = vec![Anchor::new(0, 0, 296)];
        let right: Vec<Anchor> = (0..20).map(|i| Anchor::new(295 + i * 50, 449 + i * 50, 40)).collect();
        let mut anchors = left;
        anchors.extend(right);
        let initial = sparse_chain(&anchors, 100, &s);
        assert_eq!(initial.len(), 2);
        let refined = refine_chains(&initial, &s);
        assert_eq!(refined.len(), 1);
        let c = &refined[0];
        assert_eq!(c.anchors.len(), 21);
        assert!(c.is_colinear());
        assert_eq!(c.anchors[1], Anchor::new(296, 450, 39));
    }

    #[test]
    fn short_chain_inside_the_shift_keeps_items_sorted() {
        let s = ChainScoring::default();
        let long = Chain::from_anchors(block(0, 0, 2000), 4000, Tier::Initial);
        let short = Chain::from_anchors(vec![Anchor::new(5, 5, 4)], 400, Tier::Initial);
        let refined = refine_chains(&[long.clone(), short], &s);
        assert_eq!(refined.len(), 1);
        assert_eq!(refined[0].anchors, long.anchors);
    }

    #[test]
    fn never_bridges_beyond_cap() {
        let s = ChainScoring::default();
        let mut anchors = block(0, 0, 1000);
        anchors.extend(block(21_000, 21_000, 1000));
        let refined = refine_chains(&sparse_chain(&anchors, 100, &s), &s);
        assert_eq!(refined.len(), 2);
    }

    #[test]
    fn singleton_passes_through() {
        let s = ChainScoring::default();
        let initial = sparse_chain(&block(0, 0, 2000), 100, &s);
        let refined = refine_chains(&initial, &s);
        assert_eq!(refined.len(), 1);
        assert_eq!(refined[0].anchors, initial[0].anchors);
        assert_eq!(refined[0].score, initial[0].score);
    }

    #[test]
    fn short_chains_dropped() {
        let s = ChainScoring::default();
        let initial = sparse_chain(&block(0, 0, 500), 100, &s);
        assert!(refine_chains(&initial, &s).is_empty());
    }
}
