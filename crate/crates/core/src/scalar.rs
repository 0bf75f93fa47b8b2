//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type usable as a coordinate or ray length: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Minimum ray length; rays that miss the contour are assigned this value.
    fn ray_epsilon() -> Self;

    /// Polygons with `|signed area|` below this are degenerate.
    fn area_epsilon() -> Self;
}

impl Scalar for f32 {
    fn ray_epsilon() -> Self {
        1e-6
    }

    fn area_epsilon() -> Self {
        1e-12
    }
}

impl Scalar for f64 {
    fn ray_epsilon() -> Self {
        1e-6
    }

    fn area_epsilon() -> Self {
        1e-12
    }
}

/// Converts an `f64` literal into `T`.
#[inline]
pub(crate) fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

#[inline]
pub(crate) fn from_usize<T: Scalar>(x: usize) -> T {
    T::from_usize(x).expect("usize representable in scalar type")
}
