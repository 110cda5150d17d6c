use std::collections::BTreeMap;
use std::ops::Bound::{Excluded, Unbounded};

use crate::num::Scalar;

/// Which window a minimizer belongs to: the query window (`Own`, whose
/// fingerprint size fixes the sketch size) or the compared window (`Other`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Own,
    Other,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Counts {
    own: u32,
    other: u32,
}

impl Counts {
    fn shared(self) -> bool {
        self.own > 0 && self.other > 0
    }

    fn is_empty(self) -> bool {
        self.own == 0 && self.other == 0
    }
}

/// Ordered set of the distinct hashes in `W(X) ∪ W(Y)`, each flagged by
/// membership in the intersection, with the sketch size `s = |W(X)|`.
///
/// The estimate is the number of intersection members among the `s`
/// smallest hashes, divided by `s`. A boundary pointer to the `s`-th smallest
/// member is maintained so every update costs `O(log |L|)`.
#[derive(Clone, Debug, Default)]
pub struct RollingEstimator {
    members: BTreeMap<u64, Counts>,
    sketch_size: usize,
    shared_in_sketch: usize,
    /// Largest hash inside the sketch; `None` iff `sketch_size == 0`.
    boundary: Option<u64>,
}

impl RollingEstimator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_hashes(own: impl IntoIterator<Item = u64>, other: impl IntoIterator<Item = u64>) -> Self {
        let mut est = Self::new();
        for h in own {
            est.add(h, Side::Own);
        }
        for h in other {
            est.add(h, Side::Other);
        }
        est
    }

    pub fn sketch_size(&self) -> usize {
        self.sketch_size
    }

    /// Intersection members among the `s` smallest hashes.
    pub fn shared_in_sketch(&self) -> usize {
        self.shared_in_sketch
    }

    pub fn num_members(&self) -> usize {
        self.members.len()
    }

    /// Winnowed MinHash estimate; 0 for an empty sketch.
    pub fn estimate(&self) -> f64 {
        self.estimate_as::<f64>()
    }

    pub fn estimate_as<F: Scalar>(&self) -> F {
        if self.sketch_size == 0 {
            F::zero()
        } else {
            F::from_usize(self.shared_in_sketch) / F::from_usize(self.sketch_size)
        }
    }

    /// Applies an optional insertion and an optional removal, removal first.
    pub fn update(&mut self, add: Option<(u64, Side)>, remove: Option<(u64, Side)>) {
        if let Some((h, side)) = remove {
            self.remove(h, side);
        }
        if let Some((h, side)) = add {
            self.add(h, side);
        }
    }

    pub fn add(&mut self, hash: u64, side: Side) {
        let before = self.members.get(&hash).copied();
        let mut after = before.unwrap_or_default();
        match side {
            Side::Own => after.own += 1,
            Side::Other => after.other += 1,
        }
        match before {
            None => {
                self.members.insert(hash, after);
                self.on_insert(hash);
            }
            Some(b) => {
                self.members.insert(hash, after);
                self.on_flag_change(hash, b.shared(), after.shared());
            }
        }
        if side == Side::Own && after.own == 1 {
            self.grow();
        }
    }

    /// Panics if `hash` is not present on `side`.
    pub fn remove(&mut self, hash: u64, side: Side) {
        let before = *self.members.get(&hash).unwrap_or_else(|| panic!("removing absent member {hash:#x}"));
        let mut after = before;
        match side {
            Side::Own => {
                assert!(after.own > 0, "removing absent own member {hash:#x}");
                after.own -= 1;
            }
            Side::Other => {
                assert!(after.other > 0, "removing absent other member {hash:#x}");
                after.other -= 1;
            }
        }
        if side == Side::Own && after.own == 0 {
            self.shrink();
        }
        if after.is_empty() {
            self.members.remove(&hash);
            self.on_remove(hash);
        } else {
            self.members.insert(hash, after);
            self.on_flag_change(hash, before.shared(), after.shared());
        }
    }

    fn in_sketch(&self, hash: u64) -> bool {
        self.boundary.is_some_and(|b| hash <= b)
    }

    fn shared(&self, hash: u64) -> bool {
        self.members.get(&hash).is_some_and(|c| c.shared())
    }

    fn enter(&mut self, hash: u64) {
        if self.shared(hash) {
            self.shared_in_sketch += 1;
        }
    }

    fn leave(&mut self, hash: u64) {
        if self.shared(hash) {
            self.shared_in_sketch -= 1;
        }
    }

    fn successor(&self, hash: Option<u64>) -> u64 {
        let next = match hash {
            Some(b) => self.members.range((Excluded(b), Unbounded)).next(),
            None => self.members.iter().next(),
        };
        *next.expect("sketch cannot exceed member count").0
    }

    fn predecessor(&self, hash: u64) -> Option<u64> {
        self.members.range(..hash).next_back().map(|(&h, _)| h)
    }

    fn grow(&mut self) {
        let next = self.successor(self.boundary);
        self.enter(next);
        self.boundary = Some(next);
        self.sketch_size += 1;
    }

    fn shrink(&mut self) {
        let b = self.boundary.expect("shrinking an empty sketch");
        self.leave(b);
        self.sketch_size -= 1;
        self.boundary = if self.sketch_size == 0 { None } else { self.predecessor(b) };
    }

    /// `hash` was just inserted as a new member (not yet counted in `s`).
    fn on_insert(&mut self, hash: u64) {
        if let Some(b) = self.boundary {
            if hash < b {
                self.enter(hash);
                self.leave(b);
                self.boundary = self.predecessor(b);
            }
        }
    }

    /// `hash` was just removed from the member map.
    fn on_remove(&mut self, hash: u64) {
        if let Some(b) = self.boundary {
            if hash <= b {
                // The removed member's flag was already cleared, so only the
                // replacement needs accounting.
                let next = self.successor(Some(b));
                self.enter(next);
                self.boundary = Some(next);
            }
        }
    }

    fn on_flag_change(&mut self, hash: u64, was: bool, now: bool) {
        if was == now || !self.in_sketch(hash) {
            return;
        }
        if now {
            self.shared_in_sketch += 1;
        } else {
            self.shared_in_sketch -= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    /// Estimate recomputed from the member table by sorting.
    fn recompute(est: &RollingEstimator) -> (usize, usize) {
        let s = est.members.values().filter(|c| c.own > 0).count();
        let shared = est.members.values().take(s).filter(|c| c.shared()).count();
        (shared, s)
    }

    #[test]
    fn identical_and_disjoint() {
        let e = RollingEstimator::from_hashes([1, 5, 9], [1, 5, 9]);
        assert_eq!(e.estimate(), 1.0);
        let e = RollingEstimator::from_hashes([1, 5, 9], [2, 6, 10]);
        assert_eq!(e.estimate(), 0.0);
        assert_eq!(RollingEstimator::new().estimate(), 0.0);
    }

    #[test]
    #[should_panic(expected = "absent")]
    fn removing_absent_member_panics() {
        let mut e = RollingEstimator::from_hashes([1], []);
        e.remove(2, Side::Own);
    }

    #[test]
    #[should_panic(expected = "absent")]
    fn removing_wrong_side_panics() {
        let mut e = RollingEstimator::from_hashes([1], []);
        e.remove(1, Side::Other);
    }

    #[test]
    fn random_scripts_match_recomputation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let mut e = RollingEstimator::new();
            let mut live: Vec<(u64, Side)> = Vec::new();
            for _ in 0..300 {
                if !live.is_empty() && rng.gen_bool(0.45) {
                    let i = rng.gen_range(0..live.len());
                    let (h, s) = live.swap_remove(i);
                    e.remove(h, s);
                } else {
                    let h = rng.gen_range(0..40u64);
                    let s = if rng.gen_bool(0.5) { Side::Own } else { Side::Other };
                    e.add(h, s);
                    live.push((h, s));
                }
                assert_eq!((e.shared_in_sketch(), e.sketch_size()), recompute(&e));
            }
        }
    }
}
