//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! All simulation, Gaussian-process and bound code is written against
//! [`Scalar`], so it runs on `f32` or `f64`. The acceptance tolerances
//! (1e-8 .. 1e-12) assume `f64`; `f32` is useful for fast exploratory
//! landscapes.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point type usable throughout the crate.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossless-enough conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    fn from_usize_lossy(x: usize) -> Self {
        Self::from_usize(x).expect("usize representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// 2π in the scalar type.
pub fn two_pi<T: Scalar>() -> T {
    T::PI() + T::PI()
}

/// Reduces an angle into `[0, 2π)`.
pub fn wrap_angle<T: Scalar>(x: T) -> T {
    let period = two_pi::<T>();
    let mut r = x % period;
    if r < T::zero() {
        r += period;
    }
    // `x % 2π` can round up to exactly 2π for tiny negative inputs.
    if r >= period {
        r = T::zero();
    }
    r
}

/// Sum of a slice using pairwise summation, independent of any scheduling.
pub fn pairwise_sum<T: Scalar>(xs: &[T]) -> T {
    match xs.len() {
        0 => T::zero(),
        1 => xs[0],
        n if n <= 16 => xs.iter().copied().sum(),
        n => {
            let (a, b) = xs.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}
