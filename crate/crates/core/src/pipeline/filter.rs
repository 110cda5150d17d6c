use std::collections::BTreeMap;

use crate::genome_io::{Interval, SdRecord};

/// Drops records where either mate has fewer than `masked_unique_min`
/// unmasked bases.
pub fn filter_final(records: Vec<SdRecord>, masked_unique_min: usize) -> Vec<SdRecord> {
    records
        .into_iter()
        .filter(|r| {
            let (u1, u2) = r.unmasked_bases();
            u1 >= masked_unique_min && u2 >= masked_unique_min
        })
        .collect()
}

fn reciprocal(a: &Interval, b: &Interval, min_fraction: f64) -> bool {
    let ov = a.overlap(b) as f64;
    ov >= min_fraction * a.len() as f64 && ov >= min_fraction * b.len() as f64
}

/// `small` is redundant given `big`: both mates contained, or both mates
/// overlapping reciprocally by at least `min_fraction`.
pub fn is_redundant(small: &SdRecord, big: &SdRecord, min_fraction: f64) -> bool {
    if small.mate2.strand != big.mate2.strand {
        return false;
    }
    let contained = big.mate1.contains(&small.mate1) && big.mate2.contains(&small.mate2);
    contained
        || (reciprocal(&small.mate1, &big.mate1, min_fraction)
            && reciprocal(&small.mate2, &big.mate2, min_fraction))
}

/// Removes exact duplicates and records made redundant by a longer record
/// on the same pair of sequences. Input order does not matter.
pub fn remove_redundant(mut records: Vec<SdRecord>, min_fraction: f64) -> Vec<SdRecord> {
    records.sort_by(|a, b| {
        b.alignment_length
            .cmp(&a.alignment_length)
            .then_with(|| a.cmp_key(b))
            .then_with(|| a.edit_distance.cmp(&b.edit_distance))
    });
    records.dedup_by(|a, b| a.cmp_key(b).is_eq());

    let mut groups: BTreeMap<(String, String), Vec<SdRecord>> = BTreeMap::new();
    for r in records {
        let key = (r.mate1.seq_name.clone(), r.mate2.seq_name.clone());
        let kept = groups.entry(key).or_default();
        if !kept.iter().any(|big| is_redundant(&r, big, min_fraction)) {
            kept.push(r);
        }
    }
    let mut out: Vec<SdRecord> = groups.into_values().flatten().collect();
    out.sort_by(|a, b| a.cmp_key(b));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genome_io::Strand;

    fn rec(a: (usize, usize), b: (usize, usize), masked: (f64, f64)) -> SdRecord {
        SdRecord {
            mate1: Interval::new("c", a.0, a.1, Strand::Forward),
            mate2: Interval::new("c", b.0, b.1, Strand::Forward),
            alignment_length: (a.1 - a.0).max(b.1 - b.0),
            edit_distance: 0,
            error_total: 0.0,
            error_mutation: 0.0,
            error_gap: 0.0,
            cigar: format!("{}M", a.1 - a.0).parse().unwrap(),
            kimura: 0.0,
            jukes_cantor: 0.0,
            masked_fraction1: masked.0,
            masked_fraction2: masked.1,
        }
    }

    #[test]
    fn masked_filter() {
        let keep = rec((0, 1000), (5000, 6000), (0.0, 0.0));
        let all_masked = rec((0, 1000), (5000, 6000), (0.0, 1.0));
        let mostly = rec((0, 1000), (5000, 6000), (0.95, 0.0));
        let out = filter_final(vec![keep.clone(), all_masked, mostly], 100);
        assert_eq!(out, vec![keep]);
    }

    #[test]
    fn containment_and_reciprocal() {
        let big = rec((0, 5000), (10_000, 15_000), (0.0, 0.0));
        let inside = rec((100, 2000), (10_100, 12_000), (0.0, 0.0));
        let shifted = rec((400, 5300), (10_400, 15_300), (0.0, 0.0));
        let other = rec((20_000, 22_000), (30_000, 32_000), (0.0, 0.0));
        let out = remove_redundant(vec![inside, other.clone(), shifted, big.clone(), big.clone()], 0.8);
        assert_eq!(out, vec![big, other]);
    }
}
