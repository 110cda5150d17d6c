use super::{Alignment, CigarOp};
use crate::num::Scalar;

/// Column counts over `M` columns that contain no `N`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Substitutions {
    pub columns: usize,
    pub transitions: usize,
    pub transversions: usize,
}

fn is_purine(b: u8) -> bool {
    b == b'A' || b == b'G'
}

impl Substitutions {
    pub fn count(aln: &Alignment, s1: &[u8], s2: &[u8]) -> Self {
        let mut out = Substitutions::default();
        let (mut i, mut j) = (aln.start1, aln.start2);
        for &(op, count) in aln.cigar.runs() {
            let count = count as usize;
            match op {
                CigarOp::Match => {
                    for (&a, &b) in s1[i..i + count].iter().zip(&s2[j..j + count]) {
                        if a == b'N' || b == b'N' {
                            continue;
                        }
                        out.columns += 1;
                        if a != b {
                            if is_purine(a) == is_purine(b) {
                                out.transitions += 1;
                            } else {
                                out.transversions += 1;
                            }
                        }
                    }
                    i += count;
                    j += count;
                }
                CigarOp::Del => i += count,
                CigarOp::Ins => j += count,
            }
        }
        out
    }
}

/// Kimura two-parameter distance; `+inf` when saturated.
pub fn kimura_from_pq<F: Scalar>(p: F, q: F) -> F {
    let two = F::from_f64(2.0);
    let a = F::one() - two * p - q;
    let b = F::one() - two * q;
    if a <= F::zero() || b <= F::zero() {
        return F::infinity();
    }
    let d = -(a * b.sqrt()).ln() / two;
    d.max(F::zero())
}

/// Jukes-Cantor distance; `+inf` when saturated.
pub fn jukes_cantor_from_p<F: Scalar>(p: F) -> F {
    let three_quarters = F::from_f64(0.75);
    if p >= three_quarters {
        return F::infinity();
    }
    let d = -three_quarters * (F::one() - p / three_quarters).ln();
    d.max(F::zero())
}

pub fn kimura_distance<F: Scalar>(aln: &Alignment, s1: &[u8], s2: &[u8]) -> F {
    let s = Substitutions::count(aln, s1, s2);
    if s.columns == 0 {
        return F::zero();
    }
    let n = F::from_usize(s.columns);
    kimura_from_pq(F::from_usize(s.transitions) / n, F::from_usize(s.transversions) / n)
}

/// Mismatches over all `M` columns.
pub fn jukes_cantor<F: Scalar>(aln: &Alignment) -> F {
    let cols = aln.match_columns();
    if cols == 0 {
        return F::zero();
    }
    jukes_cantor_from_p(F::from_usize(aln.mismatches) / F::from_usize(cols))
}
