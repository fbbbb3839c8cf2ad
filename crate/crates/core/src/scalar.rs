//! Floating-point scalar abstraction for the formula layer.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Real scalar the numerical kernels are generic over.
///
/// `f64` is the default instantiation throughout the crate; `f32` is kept
/// working by the test suite. The one capability beyond `num_traits::Float`
/// that the samplers need is drawing a standard normal variate.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Send + Sync + 'static
{
    /// One standard normal draw (mean 0, variance 1).
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Shorthand conversion from `f64` for constants; never fails for
    /// floating-point targets.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant convertible to scalar")
    }
}

impl Real for f64 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
}

impl Real for f32 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
}
