use crate::error::{Error, Result};
use crate::num::Scalar;

/// Edit-error budget split into small mutations and large gaps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorModel<F = f64> {
    /// Total edit-error budget δ.
    pub delta: F,
    /// Share of δ taken by substitutions and short indels.
    pub delta_m: F,
    /// Per-base probability that a large gap starts.
    pub p_gap: F,
}

impl<F: Scalar> ErrorModel<F> {
    /// δ = 0.25, δ_M = 0.15, p_G = 0.005.
    pub fn standard() -> Self {
        ErrorModel { delta: F::from_f64(0.25), delta_m: F::from_f64(0.15), p_gap: F::from_f64(0.005) }
    }

    pub fn new(delta: F, delta_m: F, p_gap: F) -> Result<Self> {
        let m = ErrorModel { delta, delta_m, p_gap };
        m.validate()?;
        Ok(m)
    }

    /// Builds a model from explicit (δ_M, δ_G) shares.
    pub fn from_split(delta_m: F, delta_g: F, p_gap: F) -> Result<Self> {
        Self::new(delta_m + delta_g, delta_m, p_gap)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.delta_m >= F::zero()
            && self.delta_m <= self.delta
            && self.delta < F::one()
            && self.p_gap >= F::zero()
            && self.p_gap <= F::one();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParam(format!(
                "error model requires 0 <= delta_m <= delta < 1 and 0 <= p_gap <= 1, got delta={}, delta_m={}, p_gap={}",
                self.delta, self.delta_m, self.p_gap
            )))
        }
    }

    /// δ_G = δ − δ_M.
    pub fn delta_g(&self) -> F {
        (self.delta - self.delta_m).max(F::zero())
    }

    /// Jaccard threshold for this model at k-mer length `k`.
    pub fn tau(&self, k: usize) -> F {
        tau(k, self)
    }
}

impl<F: Scalar> Default for ErrorModel<F> {
    fn default() -> Self {
        Self::standard()
    }
}

/// Probability that a k-mer carries no small mutation: `e^{-k δ_M}`.
pub fn kmer_survival<F: Scalar>(k: usize, delta_m: F) -> F {
    (-(F::from_usize(k) * delta_m)).exp()
}

/// Lower bound on the expected Jaccard similarity of the k-mer sets of two
/// segments that satisfy the error model:
/// `((1 − δ_G) / (1 + δ_G)) · 1 / (2 e^{k δ_M} − 1)`.
pub fn tau<F: Scalar>(k: usize, model: &ErrorModel<F>) -> F {
    let g = model.delta_g();
    let one = F::one();
    let two = one + one;
    let gap_factor = (one - g) / (one + g);
    gap_factor / (two * (F::from_usize(k) * model.delta_m).exp() - one)
}
