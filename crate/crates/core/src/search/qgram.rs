use std::collections::HashMap;

use super::ErrorModel;
use crate::num::Scalar;

/// Minimum number of shared q-grams for two segments (shorter length `n`)
/// that satisfy the error model:
/// `n (1 − δ_G − q δ_M) − (n p_G + 1)(q − 1)`.
pub fn qgram_threshold<F: Scalar>(n: usize, q: usize, model: &ErrorModel<F>) -> F {
    let n = F::from_usize(n);
    let qf = F::from_usize(q);
    let one = F::one();
    n * (one - model.delta_g() - qf * model.delta_m) - (n * model.p_gap + one) * (qf - one)
}

/// Shared q-grams with multiplicity: `Σ_g min(count_a(g), count_b(g))`.
/// q-grams containing `N` are ignored.
pub fn shared_qgrams(a: &[u8], b: &[u8], q: usize) -> usize {
    assert!((1..=31).contains(&q), "q must lie in 1..=31");
    let ca = packed_counts(a, q);
    let cb = packed_counts(b, q);
    let (small, large) = if ca.len() <= cb.len() { (&ca, &cb) } else { (&cb, &ca) };
    small.iter().map(|(g, &c)| c.min(*large.get(g).unwrap_or(&0))).sum()
}

fn packed_counts(s: &[u8], q: usize) -> HashMap<u64, usize> {
    let mut counts = HashMap::with_capacity(s.len());
    let mask = (1u64 << (2 * q)) - 1;
    let mut packed = 0u64;
    let mut run = 0usize;
    for &b in s {
        match crate::sketch::pack_base(b) {
            Some(c) => {
                packed = ((packed << 2) | c) & mask;
                run += 1;
            }
            None => run = 0,
        }
        if run >= q {
            *counts.entry(packed).or_insert(0) += 1;
        }
    }
    counts
}

/// q-gram filter: accepts iff the shared q-gram count reaches
/// [`qgram_threshold`] for the shorter of the two segments. Non-positive
/// thresholds always accept.
pub fn qgram_accept<F: Scalar>(s1: &[u8], s2: &[u8], q: usize, model: &ErrorModel<F>) -> bool {
    let n = s1.len().min(s2.len());
    let threshold = qgram_threshold(n, q, model);
    if threshold <= F::zero() {
        return true;
    }
    F::from_usize(shared_qgrams(s1, s2, q)) >= threshold
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn threshold_arithmetic() {
        let m = ErrorModel::from_split(0.1, 0.1, 0.005).unwrap();
        assert_abs_diff_eq!(qgram_threshold(1000, 5, &m), 376.0, epsilon = 1e-9);
    }

    #[test]
    fn lossless_boundary_accepts_identical() {
        let m = ErrorModel::from_split(0.0, 0.0, 0.0).unwrap();
        let s = b"ACGTTGCAAGGCTTACGATCGGATCCA";
        assert_eq!(qgram_threshold(s.len(), 5, &m), (s.len() - 4) as f64);
        assert_eq!(shared_qgrams(s, s, 5), s.len() - 4);
        assert!(qgram_accept(s, s, 5, &m));
        let mut t = s.to_vec();
        t[10] = b'A';
        assert!(!qgram_accept(s, &t, 5, &m));
    }

    #[test]
    fn multiplicity_and_n() {
        assert_eq!(shared_qgrams(b"AAAAA", b"AAA", 2), 2);
        assert_eq!(shared_qgrams(b"ANA", b"ANA", 2), 0);
        assert_eq!(shared_qgrams(b"", b"ACGT", 2), 0);
    }

    #[test]
    fn non_positive_threshold_accepts() {
        let m = ErrorModel::from_split(0.15, 0.15, 0.005).unwrap();
        assert!(qgram_threshold(100, 8, &m) <= 0.0);
        assert!(qgram_accept(b"AAAAAAAAAA", b"CCCCCCCCCC", 8, &m));
    }
}
