//! Floating-point abstraction shared by the numeric modules.

use num_traits::{Float, FloatConst, FromPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Real scalar the numeric kernels are written against.
///
/// Implemented for `f32` and `f64`. Literals go through [`Scalar::lit`] so
/// generic code can spell constants the same way regardless of width.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    fn lit(v: f64) -> Self;

    /// Integer count as a scalar. Counts in this crate stay far below 2^24,
    /// so the conversion is exact for both widths.
    fn count(n: usize) -> Self {
        Self::lit(n as f64)
    }

    fn as_f64(self) -> f64;
}

impl Scalar for f32 {
    #[inline]
    fn lit(v: f64) -> Self {
        v as f32
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }
}

impl Scalar for f64 {
    #[inline]
    fn lit(v: f64) -> Self {
        v
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self
    }
}
