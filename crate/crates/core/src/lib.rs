//! Segmental duplication detection for genome assemblies.
//!
//! The crate finds pairs of segments (at least 1 Kbp long, with an edit error
//! bounded by a user threshold) inside an assembly. The flow is:
//!
//! 1. [`sketch`]: winnowing fingerprints, the genome minimizer index and a
//!    rolling winnowed-MinHash estimator.
//! 2. [`search`]: the Jaccard threshold implied by the error model, seed
//!    discovery, seed extension and the q-gram filter.
//! 3. [`chain`]: exact-match anchors and two-tier sparse chaining.
//! 4. [`align`]: affine-gap alignment of chains, CIGAR output and
//!    evolutionary distances.
//! 5. [`pipeline`]: orchestration, strand handling and final filtering.
//!
//! [`simulate`] generates synthetic duplications and holds the brute-force
//! reference implementations used by the test suites.
//!
//! Floating-point model math is generic over [`Scalar`]; the `*F32` / `*F64`
//! aliases below fix the scalar type.

pub mod align;
pub mod chain;
pub mod error;
pub mod genome_io;
pub mod num;
pub mod pipeline;
pub mod search;
pub mod simulate;
pub mod sketch;

pub use error::{Error, Result};
pub use genome_io::{Genome, Interval, SdRecord, Strand};
pub use num::Scalar;
pub use pipeline::{run, RunConfig};

/// Error model over `f32`.
pub type ErrorModelF32 = search::ErrorModel<f32>;
/// Error model over `f64`.
pub type ErrorModelF64 = search::ErrorModel<f64>;
