//! Three-state affine-gap DP over a diagonal corridor.

use super::{Cigar, CigarOp};

pub(crate) const NEG: i32 = i32::MIN / 4;

const M: u8 = 0;
const X: u8 = 1;
const Y: u8 = 2;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Scores {
    pub matched: i32,
    pub mismatch: i32,
    pub open: i32,
    pub extend: i32,
}

impl Scores {
    #[inline]
    pub fn pair(&self, a: u8, b: u8) -> i32 {
        if a == b && a != b'N' {
            self.matched
        } else {
            -self.mismatch
        }
    }
}

pub(crate) enum Mode {
    Global,
    /// Free end; stop once a whole row falls this far below the best cell.
    Extend(i32),
}

pub(crate) struct DpOut {
    pub cigar: Cigar,
    /// The traceback ran along a corridor edge that the matrix does not clip.
    pub touched: bool,
}

#[inline]
fn best3(a: i32, b: i32, c: i32) -> (i32, u8) {
    let (mut v, mut s) = (a, M);
    if b > v {
        v = b;
        s = X;
    }
    if c > v {
        v = c;
        s = Y;
    }
    (v, s)
}

/// DP restricted to cells with `dmin <= j - i <= dmax`. `X` consumes `s1`
/// only (CIGAR `D`), `Y` consumes `s2` only (CIGAR `I`). Equal scores prefer
/// `M`, then `X`, then `Y`.
pub(crate) fn corridor_dp(s1: &[u8], s2: &[u8], sc: &Scores, dmin: isize, dmax: isize, mode: Mode) -> DpOut {
    let (n, m) = (s1.len() as isize, s2.len() as isize);
    debug_assert!(dmin <= 0 && dmax >= 0);
    let w = (dmax - dmin + 1) as usize;
    let oe = sc.open + sc.extend;

    let mut pm = vec![NEG; w + 1];
    let mut px = vec![NEG; w + 1];
    let mut py = vec![NEG; w + 1];
    let (mut cm, mut cx, mut cy) = (vec![NEG; w + 1], vec![NEG; w + 1], vec![NEG; w + 1]);
    let mut tb: Vec<u8> = Vec::with_capacity(w * (s1.len() + 1).min(1 << 16));

    // Row 0: only leading insertions.
    tb.resize(w, 0);
    let c0 = (-dmin) as usize;
    pm[c0] = 0;
    for j in 1..=m.min(dmax) {
        let c = c0 + j as usize;
        py[c] = if j == 1 { -oe } else { py[c - 1] - sc.extend };
        let src = if j == 1 { M } else { Y };
        tb[c] = src << 4;
    }

    let mut best = (0i32, 0isize, 0isize, M);
    let mut last_row = 0isize;
    for i in 1..=n {
        let jlo = (i + dmin).max(0);
        let jhi = (i + dmax).min(m);
        if jlo > jhi {
            break;
        }
        cm.fill(NEG);
        cx.fill(NEG);
        cy.fill(NEG);
        let row = tb.len();
        tb.resize(row + w, 0);
        let a = s1[(i - 1) as usize];
        let mut row_max = NEG;
        for j in jlo..=jhi {
            let c = (j - i - dmin) as usize;
            let mut byte = 0u8;
            if j >= 1 {
                let (d, s) = best3(pm[c], px[c], py[c]);
                cm[c] = d + sc.pair(a, s2[(j - 1) as usize]);
                byte |= s;
            }
            let (v, s) = best3(pm[c + 1] - oe, px[c + 1] - sc.extend, py[c + 1] - oe);
            cx[c] = v;
            byte |= s << 2;
            if c >= 1 {
                let (v, s) = best3(cm[c - 1] - oe, cx[c - 1] - oe, cy[c - 1] - sc.extend);
                // best3 order is (M, X, Y) and the arguments follow it.
                cy[c] = v;
                byte |= s << 4;
            }
            tb[row + c] = byte;
            if let Mode::Extend(_) = mode {
                let (v, s) = best3(cm[c], cx[c], cy[c]);
                row_max = row_max.max(v);
                if v > best.0 {
                    best = (v, i, j, s);
                }
            }
        }
        std::mem::swap(&mut pm, &mut cm);
        std::mem::swap(&mut px, &mut cx);
        std::mem::swap(&mut py, &mut cy);
        last_row = i;
        if let Mode::Extend(xdrop) = mode {
            if row_max < best.0 - xdrop {
                break;
            }
        }
    }

    let (_, ei, ej, state) = match mode {
        Mode::Global => {
            debug_assert_eq!(last_row, n);
            let c = (m - n - dmin) as usize;
            let (v, s) = best3(pm[c], px[c], py[c]);
            (v, n, m, s)
        }
        Mode::Extend(_) => best,
    };

    let mut ops = Vec::new();
    let (mut i, mut j, mut state) = (ei, ej, state);
    let mut touched = false;
    while i > 0 || j > 0 {
        let d = j - i;
        if (d == dmin && dmin > -n) || (d == dmax && dmax < m) {
            touched = true;
        }
        let byte = tb[i as usize * w + (d - dmin) as usize];
        match state {
            M => {
                ops.push(CigarOp::Match);
                state = byte & 3;
                i -= 1;
                j -= 1;
            }
            X => {
                ops.push(CigarOp::Del);
                state = (byte >> 2) & 3;
                i -= 1;
            }
            _ => {
                ops.push(CigarOp::Ins);
                state = (byte >> 4) & 3;
                j -= 1;
            }
        }
    }
    let mut cigar = Cigar::new();
    for op in ops.into_iter().rev() {
        cigar.push(op, 1);
    }
    DpOut { cigar, touched }
}
