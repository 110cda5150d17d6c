use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sdscan_core::genome_io::{Genome, Sequence, Strand};
use sdscan_core::search::{
    extend_seed, find_seed_sds, grow_seed, tau, ErrorModel, SearchParams, SearchPass, SeedSd, SequenceSide,
};
use sdscan_core::simulate::oracle::minhash_brute;
use sdscan_core::simulate::{mutate, replay};
use sdscan_core::sketch::{build_index, MinimizerIndex, SketchParams};

fn random_bases(rng: &mut ChaCha8Rng, len: usize) -> Vec<u8> {
    (0..len).map(|_| b"ACGT"[rng.gen_range(0..4)]).collect()
}

fn genome(bases: Vec<u8>) -> Genome {
    Genome::new(vec![Sequence::unmasked("chr", bases).unwrap()]).unwrap()
}

fn window_hashes(idx: &MinimizerIndex, start: usize, n: usize) -> Vec<u64> {
    let k = idx.params().k;
    idx.range(start, start + n + 1 - k).map(|(_, h)| h).collect()
}

/// Random flank, copy A, random spacer, copy B, random flank.
fn with_copies(
    rng: &mut ChaCha8Rng,
    a: &[u8],
    b: &[u8],
    flank: usize,
    spacer: usize,
) -> (Genome, usize, usize) {
    let mut bases = random_bases(rng, flank);
    let p1 = bases.len();
    bases.extend_from_slice(a);
    bases.extend(random_bases(rng, spacer));
    let p2 = bases.len();
    bases.extend_from_slice(b);
    bases.extend(random_bases(rng, flank));
    (genome(bases), p1, p2)
}

fn forward_pass<'a>(
    g: &'a Genome,
    seed_idx: &'a MinimizerIndex,
    full_idx: &'a MinimizerIndex,
) -> SearchPass<'a> {
    let side = SequenceSide { genome: g, seed_index: seed_idx, full_index: full_idx };
    SearchPass { query: side, target: side, strand: Strand::Forward }
}

#[test]
fn exact_copy_seeds_with_estimate_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let unit = random_bases(&mut rng, 2000);
    let (g, p1, p2) = with_copies(&mut rng, &unit, &unit, 3000, 10_000);
    let idx = build_index(&g, &SketchParams::seeding(), true);
    let seeds = find_seed_sds(&idx, &g, &ErrorModel::standard(), 750);
    assert!(!seeds.is_empty());
    let inside = |s: &SeedSd| s.i >= p1 && s.i + s.n <= p1 + 2000 && s.j >= p2 && s.j + s.m <= p2 + 2000;
    let exact: Vec<_> = seeds.iter().filter(|s| inside(s)).collect();
    assert!(!exact.is_empty());
    for s in exact {
        assert_eq!(s.estimate, 1.0);
        // Shifting by less than one winnowing window can keep the same
        // minimizer set; the smallest such offset is reported.
        assert!((s.j - p2).abs_diff(s.i - p1) < 16 + 12, "{s:?}");
    }
}

#[test]
fn random_genome_has_no_seeds() {
    let model = ErrorModel::standard();
    let mut with_seeds = 0;
    for seed in 0..100 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let g = genome(random_bases(&mut rng, 100_000));
        let idx = build_index(&g, &SketchParams::seeding(), true);
        if !find_seed_sds(&idx, &g, &model, 750).is_empty() {
            with_seeds += 1;
        }
    }
    assert!(with_seeds <= 1, "{with_seeds} of 100 random genomes produced seeds");
}

#[test]
fn planted_pair_within_model_is_seeded() {
    let model = ErrorModel::new(0.2, 0.1, 0.005).unwrap();
    for seed in 0..10 {
        let mut rng = ChaCha8Rng::seed_from_u64(50 + seed);
        let original = random_bases(&mut rng, 5000);
        let script = mutate(&original, 0.1, 0.1, 0.005, &mut rng).unwrap();
        let copy = replay(&original, &script);
        let (g, p1, p2) = with_copies(&mut rng, &original, &copy, 2000, 5000);
        let idx = build_index(&g, &SketchParams::seeding(), true);
        let seeds = find_seed_sds(&idx, &g, &model, 750);
        let hit = seeds.iter().any(|s| {
            let t = model.tau(12);
            s.estimate >= t && s.i >= p1 && s.i < p1 + original.len() && s.j >= p2 && s.j < p2 + copy.len()
        });
        assert!(hit, "instance {seed}: no seed inside the planted pair");
    }
}

#[test]
fn seed_estimates_match_recomputation() {
    let model = ErrorModel::standard();
    for seed in 0..5 {
        let mut rng = ChaCha8Rng::seed_from_u64(70 + seed);
        let original = random_bases(&mut rng, 4000);
        let script = mutate(&original, 0.08, 0.05, 0.005, &mut rng).unwrap();
        let copy = replay(&original, &script);
        let (g, _, _) = with_copies(&mut rng, &original, &copy, 1500, 3000);
        let idx = build_index(&g, &SketchParams::seeding(), true);
        let seeds = find_seed_sds(&idx, &g, &model, 750);
        assert!(!seeds.is_empty());
        for s in seeds {
            let (shared, size) =
                minhash_brute(&window_hashes(&idx, s.i, s.n), &window_hashes(&idx, s.j, s.m));
            assert_eq!((s.shared, s.sketch_size), (shared, size));
            assert_eq!(s.estimate, shared as f64 / size as f64);
        }
    }
}

#[test]
fn exact_duplication_extends_to_full_copies() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let unit = random_bases(&mut rng, 5000);
    let (g, p1, p2) = with_copies(&mut rng, &unit, &unit, 4000, 8000);
    let seed_idx = build_index(&g, &SketchParams::seeding(), true);
    let full_idx = build_index(&g, &SketchParams::seeding(), false);
    let pass = forward_pass(&g, &seed_idx, &full_idx);
    let center = 2500 - 375;
    let seed =
        SeedSd { i: p1 + center, j: p2 + center, n: 750, m: 750, estimate: 1.0, shared: 0, sketch_size: 0 };
    let region = extend_seed(&seed, &pass, &ErrorModel::standard(), &SearchParams::default());
    let cover = |iv: &sdscan_core::Interval, start: usize| {
        let end = start + 5000;
        iv.end.min(end).saturating_sub(iv.start.max(start)) as f64 / 5000.0
    };
    assert!(cover(&region.region1, p1) >= 0.95, "{}", region.region1);
    assert!(cover(&region.region2, p2) >= 0.95, "{}", region.region2);
}

#[test]
fn seed_at_sequence_start_stays_in_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let unit = random_bases(&mut rng, 3000);
    let mut bases = unit.clone();
    bases.extend(random_bases(&mut rng, 6000));
    bases.extend_from_slice(&unit);
    let p2 = 9000;
    let g = genome(bases);
    let seed_idx = build_index(&g, &SketchParams::seeding(), true);
    let full_idx = build_index(&g, &SketchParams::seeding(), false);
    let pass = forward_pass(&g, &seed_idx, &full_idx);
    let seed = SeedSd { i: 0, j: p2, n: 750, m: 750, estimate: 1.0, shared: 0, sketch_size: 0 };
    let ext = grow_seed(&seed, &pass, &ErrorModel::standard(), &SearchParams::default());
    assert_eq!((ext.i, ext.j), (0, p2));
    assert!(ext.n >= 2850 && ext.i + ext.n <= g.total_len());
    assert!(ext.contains_seed(&seed));
}

#[test]
fn tandem_copies_stop_before_overlapping() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let unit = random_bases(&mut rng, 2000);
    let mut bases = random_bases(&mut rng, 3000);
    let p1 = bases.len();
    for _ in 0..4 {
        bases.extend_from_slice(&unit);
    }
    bases.extend(random_bases(&mut rng, 3000));
    let g = genome(bases);
    let seed_idx = build_index(&g, &SketchParams::seeding(), true);
    let full_idx = build_index(&g, &SketchParams::seeding(), false);
    let pass = forward_pass(&g, &seed_idx, &full_idx);
    let model = ErrorModel::standard();
    let seed = SeedSd { i: p1, j: p1 + 2000, n: 750, m: 750, estimate: 1.0, shared: 0, sketch_size: 0 };
    let ext = grow_seed(&seed, &pass, &model, &SearchParams::default());
    let overlap = (ext.i + ext.n).saturating_sub(ext.j);
    assert!(overlap as f64 <= model.delta * ext.n.min(ext.m) as f64, "{ext:?}");
    assert!(ext.contains_seed(&seed));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tau_is_monotone(k in 4usize..20, dm in 0.0f64..0.15, dg in 0.0f64..0.15, step in 0.001f64..0.05) {
        let m = |dm: f64, dg: f64| ErrorModel::new(dm + dg, dm, 0.005).unwrap();
        let base = tau(k, &m(dm, dg));
        prop_assert!(tau(k + 1, &m(dm, dg)) <= base);
        prop_assert!(tau(k, &m((dm + step).min(0.15), dg)) <= base);
        prop_assert!(tau(k, &m(dm, dg + step)) <= base);
    }

    #[test]
    fn extension_contains_its_seed(seed in 0u64..1000, dm in 0.0f64..0.12, offset in 0usize..3000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let original = random_bases(&mut rng, 4000);
        let script = mutate(&original, dm, 0.0, 0.005, &mut rng).unwrap();
        let copy = replay(&original, &script);
        let (g, p1, p2) = with_copies(&mut rng, &original, &copy, 1000, 2000);
        let seed_idx = build_index(&g, &SketchParams::seeding(), true);
        let full_idx = build_index(&g, &SketchParams::seeding(), false);
        let pass = forward_pass(&g, &seed_idx, &full_idx);
        let off2 = offset.min(copy.len() - 750);
        let s = SeedSd { i: p1 + offset, j: p2 + off2, n: 750, m: 750, estimate: 0.0, shared: 0, sketch_size: 0 };
        let ext = grow_seed(&s, &pass, &ErrorModel::standard(), &SearchParams::default());
        prop_assert!(ext.contains_seed(&s));
    }
}
