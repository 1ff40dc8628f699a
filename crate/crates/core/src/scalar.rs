//! Scalar abstraction shared by all numerical modules.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + LowerExp
    + FromStr
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal, rounding to the target precision.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    #[inline]
    fn from_count(v: usize) -> Self {
        Self::from_usize(v).expect("count representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Reduces `t` to the representative in `[-π, π)`.
#[inline]
pub fn wrap_to_pi<T: Real>(t: T) -> T {
    let two_pi = T::PI() + T::PI();
    let r = t - two_pi * ((t + T::PI()) / two_pi).floor();
    // floor can land exactly on +π after rounding
    if r >= T::PI() {
        r - two_pi
    } else {
        r
    }
}

/// Distance from `t` to the nearest multiple of `2π`.
#[inline]
pub fn dist_to_2pi_multiple<T: Real>(t: T) -> T {
    wrap_to_pi(t).abs()
}
