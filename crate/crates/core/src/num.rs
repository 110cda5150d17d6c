use std::fmt::{Debug, Display};

/// Floating-point scalar used by the error-model and distance math.
pub trait Scalar:
    num_traits::Float + num_traits::FloatConst + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossless for the integer ranges used here (counts and lengths).
    fn from_usize(v: usize) -> Self {
        <Self as num_traits::NumCast>::from(v).expect("usize fits in a float")
    }

    fn from_f64(v: f64) -> Self {
        <Self as num_traits::NumCast>::from(v).expect("f64 converts to scalar")
    }

    fn to_f64(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
