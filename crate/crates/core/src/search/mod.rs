//! Seed discovery, seed extension and q-gram filtering.
//!
//! Seeds are pairs of equal-length windows whose winnowed MinHash estimate
//! reaches the threshold implied by the [`ErrorModel`]. Each seed is then
//! grown in both directions while the estimate stays above the threshold,
//! producing a [`PotentialRegion`].

mod extend;
mod model;
mod qgram;
mod seed;

pub use extend::{extend_seed, extent_region, grow_seed, pad_region, Extent, PotentialRegion};
pub use model::{kmer_survival, tau, ErrorModel};
pub use qgram::{qgram_accept, qgram_threshold, shared_qgrams};
pub use seed::{find_seed_sds, query_windows, seeds_for_window, SearchPass, SeedSd, SequenceSide};

use crate::error::{Error, Result};

/// Slack applied in the seed's favor when comparing estimates with τ.
pub const TAU_SLACK: f64 = 1e-12;

/// Largest potential region, in bp.
pub const MAX_REGION_LEN: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchParams {
    /// Seed window length `n`.
    pub window: usize,
    /// Distance between consecutive query windows.
    pub stride: usize,
    /// Extension keeps probing this many bp past the last position whose
    /// estimate reached τ before giving up.
    pub extension_lookahead: usize,
    pub max_region: usize,
    /// Upper bound on padding added to each side of a potential region.
    pub max_padding: usize,
    /// Padding as a fraction of region length.
    pub padding_fraction: f64,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            window: 750,
            stride: 250,
            extension_lookahead: 250,
            max_region: MAX_REGION_LEN,
            max_padding: 5000,
            padding_fraction: 0.25,
        }
    }
}

impl SearchParams {
    pub fn validate(&self) -> Result<()> {
        if self.window < 750 {
            return Err(Error::InvalidParam(format!("seed window must be >= 750, got {}", self.window)));
        }
        if self.stride == 0 {
            return Err(Error::InvalidParam("stride must be positive".into()));
        }
        if self.max_region < self.window || self.max_region > MAX_REGION_LEN {
            return Err(Error::InvalidParam(format!(
                "max_region must lie in [{}, {MAX_REGION_LEN}]",
                self.window
            )));
        }
        if !(0.0..=1.0).contains(&self.padding_fraction) {
            return Err(Error::InvalidParam("padding_fraction must lie in [0, 1]".into()));
        }
        Ok(())
    }
}
