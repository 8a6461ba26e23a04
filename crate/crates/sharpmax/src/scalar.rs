//! Scalar abstraction so every algorithm runs over f32 or f64.

use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Floating-point scalar used throughout the crate.
///
/// Everything downstream (metrics, oscillation averages, convex solvers)
/// needs ordinary float arithmetic plus conversions from literal constants,
/// so this is a thin closure over `num_traits::Float`.
pub trait Scalar:
    num_traits::Float
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Shorthand for converting an f64 literal into the working scalar type.
pub(crate) fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("literal conversion")
}

/// Comparison slack for metric validation and exact-identity checks.
///
/// 1e-9 for f64; widened by an epsilon floor so the same checks stay
/// meaningful under f32.
pub(crate) fn metric_tol<T: Scalar>() -> T {
    let base = lit::<T>(1e-9);
    let floor = T::epsilon() * lit::<T>(100.0);
    if floor > base {
        floor
    } else {
        base
    }
}

