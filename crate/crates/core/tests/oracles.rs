//! Optimized modules against the brute-force references.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sdscan_core::align::{global_align, AlignParams, CigarOp};
use sdscan_core::chain::{find_anchors, sparse_chain, Anchor, ChainScoring};
use sdscan_core::simulate::oracle::{align_brute, chain_brute, mems_brute, minhash_brute, winnow_brute};
use sdscan_core::sketch::{winnow, RollingEstimator, Side, SketchParams};

fn dna(len: usize, rng: &mut impl Rng) -> Vec<u8> {
    (0..len).map(|_| b"ACGT"[rng.gen_range(0..4)]).collect()
}

fn mutated(src: &[u8], rate: f64, rng: &mut impl Rng) -> Vec<u8> {
    let mut out = Vec::new();
    for &b in src {
        let r: f64 = rng.gen();
        if r < rate * 0.7 {
            out.push(b"ACGT"[rng.gen_range(0..4)]);
        } else if r < rate * 0.85 {
            // deletion
        } else if r < rate {
            out.push(b);
            out.extend(dna(rng.gen_range(1..4), rng));
        } else {
            out.push(b);
        }
    }
    out
}

fn random_anchors(rng: &mut impl Rng, count: usize, extent: usize) -> Vec<Anchor> {
    (0..count)
        .map(|_| Anchor::new(rng.gen_range(0..extent), rng.gen_range(0..extent), rng.gen_range(11..80)))
        .collect()
}

#[test]
fn winnow_matches_brute() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let len = rng.gen_range(1..600);
        let mut s = dna(len, &mut rng);
        for _ in 0..rng.gen_range(0..4) {
            let p = rng.gen_range(0..len);
            s[p] = b'N';
        }
        let k = rng.gen_range(3..14);
        let w = rng.gen_range(1..20);
        let params = SketchParams { hash_seed: 99, ..SketchParams::new(k, w).unwrap() };
        let fast: Vec<(usize, u64)> = winnow(&s, &params).into_iter().map(|m| (m.position, m.hash)).collect();
        assert_eq!(fast, winnow_brute(&s, k, w, 99).unwrap());
    }
}

#[test]
fn rolling_matches_brute_on_sliding_windows() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let own: Vec<u64> = (0..rng.gen_range(0..40)).map(|_| rng.gen_range(0..200)).collect();
        let stream: Vec<u64> = (0..300).map(|_| rng.gen_range(0..200)).collect();
        let width = rng.gen_range(1..50);
        let mut est = RollingEstimator::from_hashes(own.iter().copied(), stream[..width].iter().copied());
        for start in 0..stream.len() - width {
            let (shared, s) = minhash_brute(&own, &stream[start..start + width]);
            assert_eq!((est.shared_in_sketch(), est.sketch_size()), (shared, s));
            est.update(Some((stream[start + width], Side::Other)), Some((stream[start], Side::Other)));
        }
    }
}

#[test]
fn anchors_match_brute_mems() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let s1 = dna(2000, &mut rng);
        let mut s2 = dna(2000, &mut rng);
        let block = rng.gen_range(11..120);
        let (p1, p2) = (rng.gen_range(0..2000 - block), rng.gen_range(0..2000 - block));
        s2[p2..p2 + block].copy_from_slice(&s1[p1..p1 + block]);
        let fast = find_anchors(&s1, &s2, 11);
        assert_eq!(fast, mems_brute(&s1, &s2, 11).unwrap());
        assert!(fast.iter().any(|a| a.pos1 <= p1 && a.end1() >= p1 + block));
    }
    // related sequences give many anchors on nearby diagonals
    for _ in 0..20 {
        let s1 = dna(1500, &mut rng);
        let s2 = mutated(&s1, 0.08, &mut rng);
        assert_eq!(find_anchors(&s1, &s2, 11), mems_brute(&s1, &s2, 11).unwrap());
    }
}

#[test]
fn chain_best_matches_brute() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let scoring = ChainScoring::default();
    for _ in 0..200 {
        let n = rng.gen_range(1..=200);
        let extent = rng.gen_range(200..5000);
        let anchors = random_anchors(&mut rng, n, extent);
        let cap = rng.gen_range(10..2000);
        let chains = sparse_chain(&anchors, cap, &scoring);
        let best = chains.iter().map(|c| c.score).max().unwrap();
        assert_eq!(best, chain_brute(&anchors, cap, &scoring).unwrap().score);
        assert_eq!(chains.iter().map(|c| c.anchors.len()).sum::<usize>(), {
            let mut a = anchors.clone();
            a.sort();
            a.dedup();
            a.len()
        });
        for c in &chains {
            assert!(c.is_colinear());
            assert!(c.max_gap() <= cap);
        }
    }
}

#[test]
fn global_align_matches_brute() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let params = AlignParams::default();
    for round in 0..150 {
        let s1 = dna(rng.gen_range(1..400), &mut rng);
        let s2 =
            if round % 3 == 0 { dna(rng.gen_range(1..400), &mut rng) } else { mutated(&s1, 0.2, &mut rng) };
        if s2.is_empty() {
            continue;
        }
        let a = global_align(&s1, &s2, &params).unwrap();
        let b = align_brute(&s1, &s2, &params).unwrap();
        assert_eq!(a.score, b.score);
        assert_eq!(a.cigar.reference_len(), s1.len());
        assert_eq!(a.cigar.query_len(), s2.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chaining_is_order_invariant(seed in any::<u64>(), n in 1usize..120) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let anchors = random_anchors(&mut rng, n, 3000);
        let mut shuffled = anchors.clone();
        rand::seq::SliceRandom::shuffle(shuffled.as_mut_slice(), &mut rng);
        let s = ChainScoring::default();
        prop_assert_eq!(sparse_chain(&anchors, 500, &s), sparse_chain(&shuffled, 500, &s));
    }

    #[test]
    fn alignment_is_symmetric(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s1 = dna(rng.gen_range(1..200), &mut rng);
        let s2 = mutated(&s1, 0.15, &mut rng);
        prop_assume!(!s2.is_empty());
        let p = AlignParams::default();
        let ab = global_align(&s1, &s2, &p).unwrap();
        let ba = global_align(&s2, &s1, &p).unwrap();
        prop_assert_eq!(ab.score, ba.score);
        let swapped = ba.cigar.swap_indels();
        prop_assert_eq!(swapped.reference_len(), s1.len());
    }

    #[test]
    fn banded_agrees_when_off_edge(seed in any::<u64>(), band in 1usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s1 = dna(rng.gen_range(50..300), &mut rng);
        let s2 = mutated(&s1, 0.1, &mut rng);
        prop_assume!(!s2.is_empty());
        let full = global_align(&s1, &s2, &AlignParams::default()).unwrap();
        let banded = global_align(&s1, &s2, &AlignParams { band: Some(band), ..AlignParams::default() }).unwrap();
        prop_assert_eq!(full.score, banded.score);
    }

    #[test]
    fn stored_score_matches_cigar(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s1 = dna(rng.gen_range(1..300), &mut rng);
        let s2 = mutated(&s1, 0.25, &mut rng);
        prop_assume!(!s2.is_empty());
        let p = AlignParams::default();
        let a = global_align(&s1, &s2, &p).unwrap();
        let mut expect = 0i64;
        let (mut i, mut j) = (0, 0);
        for &(op, n) in a.cigar.runs() {
            let n = n as usize;
            match op {
                CigarOp::Match => {
                    for t in 0..n {
                        expect += if s1[i + t] == s2[j + t] { 5 } else { -4 };
                    }
                    i += n;
                    j += n;
                }
                CigarOp::Del => { expect -= 40 + n as i64; i += n; }
                CigarOp::Ins => { expect -= 40 + n as i64; j += n; }
            }
        }
        prop_assert_eq!(a.score, expect);
        prop_assert_eq!(a.aligned_length, a.cigar.len());
        prop_assert!(a.aligned_length >= s1.len().max(s2.len()));
    }
}
