use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CigarOp {
    /// Aligned column, match or mismatch.
    Match,
    /// Base present only in the query (second sequence).
    Ins,
    /// Base present only in the reference (first sequence).
    Del,
}

impl CigarOp {
    pub fn as_char(self) -> char {
        match self {
            CigarOp::Match => 'M',
            CigarOp::Ins => 'I',
            CigarOp::Del => 'D',
        }
    }

    pub fn swapped(self) -> Self {
        match self {
            CigarOp::Match => CigarOp::Match,
            CigarOp::Ins => CigarOp::Del,
            CigarOp::Del => CigarOp::Ins,
        }
    }
}

/// Run-length edit string; adjacent runs of one op are always merged.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Cigar {
    runs: Vec<(CigarOp, u32)>,
}

impl Cigar {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_runs(runs: impl IntoIterator<Item = (CigarOp, u32)>) -> Self {
        let mut c = Cigar::new();
        for (op, n) in runs {
            c.push(op, n);
        }
        c
    }

    pub fn push(&mut self, op: CigarOp, count: u32) {
        if count == 0 {
            return;
        }
        match self.runs.last_mut() {
            Some((last, n)) if *last == op => *n += count,
            _ => self.runs.push((op, count)),
        }
    }

    pub fn extend(&mut self, other: &Cigar) {
        for &(op, n) in &other.runs {
            self.push(op, n);
        }
    }

    pub fn runs(&self) -> &[(CigarOp, u32)] {
        &self.runs
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Bases of the first sequence consumed (M + D).
    pub fn reference_len(&self) -> usize {
        self.count_where(|op| op != CigarOp::Ins)
    }

    /// Bases of the second sequence consumed (M + I).
    pub fn query_len(&self) -> usize {
        self.count_where(|op| op != CigarOp::Del)
    }

    /// Alignment columns.
    pub fn len(&self) -> usize {
        self.count_where(|_| true)
    }

    fn count_where(&self, f: impl Fn(CigarOp) -> bool) -> usize {
        self.runs.iter().filter(|(op, _)| f(*op)).map(|&(_, n)| n as usize).sum()
    }

    pub fn swap_indels(&self) -> Cigar {
        Cigar { runs: self.runs.iter().map(|&(op, n)| (op.swapped(), n)).collect() }
    }

    pub fn reversed(&self) -> Cigar {
        Cigar { runs: self.runs.iter().rev().copied().collect() }
    }
}

impl fmt::Display for Cigar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &(op, n) in &self.runs {
            write!(f, "{n}{}", op.as_char())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid CIGAR string: {0}")]
pub struct ParseCigarError(String);

impl FromStr for Cigar {
    type Err = ParseCigarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut c = Cigar::new();
        let mut num: Option<u32> = None;
        for ch in s.chars() {
            if let Some(d) = ch.to_digit(10) {
                num = Some(
                    num.unwrap_or(0)
                        .checked_mul(10)
                        .and_then(|v| v.checked_add(d))
                        .ok_or_else(|| ParseCigarError(s.to_string()))?,
                );
                continue;
            }
            let op = match ch {
                'M' | '=' | 'X' => CigarOp::Match,
                'I' => CigarOp::Ins,
                'D' => CigarOp::Del,
                _ => return Err(ParseCigarError(s.to_string())),
            };
            let n = num.take().ok_or_else(|| ParseCigarError(s.to_string()))?;
            c.push(op, n);
        }
        if num.is_some() {
            return Err(ParseCigarError(s.to_string()));
        }
        Ok(c)
    }
}
