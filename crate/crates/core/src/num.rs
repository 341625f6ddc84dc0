//! Scalar abstraction for every numeric computation in the toolkit.
//!
//! Metric values, test statistics, and model parameters are generic over
//! [`Real`] so the same code runs at `f32` or `f64` precision. Concrete
//! aliases at the crate root pin the default precision.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Sum
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Convert an `f64` constant into the working scalar type.
///
/// Panics only if the target type cannot represent any finite `f64`,
/// which cannot happen for `f32`/`f64`.
#[inline]
pub fn real<F: Real>(x: f64) -> F {
    F::from_f64(x).expect("f64 constant must convert to the working scalar type")
}

/// Convert a count into the working scalar type.
#[inline]
pub fn count<F: Real>(n: usize) -> F {
    F::from_usize(n).expect("usize count must convert to the working scalar type")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_roundtrips_constants() {
        let x: f64 = real::<f64>(0.25);
        assert_eq!(x, 0.25);
        let y: f32 = real::<f32>(0.5);
        assert_eq!(y, 0.5);
    }

    #[test]
    fn count_converts_exactly_for_small_values() {
        assert_eq!(count::<f64>(42), 42.0);
        assert_eq!(count::<f32>(7), 7.0);
    }
}
