//! Winnowing fingerprints, the genome minimizer index and rolling
//! winnowed-MinHash estimation.

mod hash;
mod index;
mod rolling;
mod winnow;

use std::collections::HashSet;
use std::hash::Hash;

pub use hash::{kmer_hash, pack_base, KmerHasher, MixHasher};
pub use index::{build_index, MinimizerIndex};
pub use rolling::{RollingEstimator, Side};
pub use winnow::{winnow, winnow_masked, winnow_with, Minimizer};

use crate::error::{Error, Result};

pub const DEFAULT_HASH_SEED: u64 = 0x5eed_1dea_c0ff_ee11;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SketchParams {
    pub k: usize,
    /// Window size in k-mers.
    pub w: usize,
    pub hash_seed: u64,
}

impl SketchParams {
    pub fn new(k: usize, w: usize) -> Result<Self> {
        let p = SketchParams { k, w, hash_seed: DEFAULT_HASH_SEED };
        p.validate()?;
        Ok(p)
    }

    /// k = 12, w = 16.
    pub fn seeding() -> Self {
        SketchParams { k: 12, w: 16, hash_seed: DEFAULT_HASH_SEED }
    }

    /// k = 11, w = 16.
    pub fn anchoring() -> Self {
        SketchParams { k: 11, w: 16, hash_seed: DEFAULT_HASH_SEED }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=31).contains(&self.k) {
            return Err(Error::InvalidParam(format!("k must be in 1..=31, got {}", self.k)));
        }
        if self.w == 0 {
            return Err(Error::InvalidParam("w must be at least 1".into()));
        }
        Ok(())
    }

    pub fn hasher(&self) -> MixHasher {
        MixHasher::new(self.hash_seed)
    }
}

impl Default for SketchParams {
    fn default() -> Self {
        Self::seeding()
    }
}

/// `|a ∩ b| / |a ∪ b|`, defined as 0 when both sets are empty.
pub fn jaccard_exact<T: Eq + Hash>(a: &HashSet<T>, b: &HashSet<T>) -> f64 {
    let inter = a.intersection(b).count();
    let union = a.len() + b.len() - inter;
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(items: &[&str]) -> HashSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn jaccard_cases() {
        assert_eq!(jaccard_exact(&set(&["x", "y"]), &set(&["x", "y"])), 1.0);
        assert_eq!(jaccard_exact(&set(&["x"]), &set(&["y"])), 0.0);
        assert_eq!(jaccard_exact(&set(&["x", "y", "z"]), &set(&["y", "z", "u", "v"])), 2.0 / 5.0);
        assert_eq!(jaccard_exact::<String>(&HashSet::new(), &HashSet::new()), 0.0);
    }

    #[test]
    fn params_validation() {
        assert!(SketchParams::new(0, 16).is_err());
        assert!(SketchParams::new(32, 16).is_err());
        assert!(SketchParams::new(12, 0).is_err());
        assert!(SketchParams::new(31, 1).is_ok());
    }
}
