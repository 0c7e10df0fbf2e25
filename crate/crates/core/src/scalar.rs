//! Floating-point abstraction shared by every module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// A real scalar the engine can run on.
///
/// Tolerances live here because they scale with the precision of the type:
/// what is attainable by bisection in `f64` is far out of reach in `f32`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Sum
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Harmonicity tolerance, in log-ratio units.
    fn harm_tol() -> Self;
    /// Minimal angular separation of distinct points, in radians.
    fn sep_min() -> Self;
    /// Slack allowed on axiom margins and bound checks.
    fn margin_tol() -> Self;
    /// Tolerance for involution round trips, in radians.
    fn involution_tol() -> Self;

    /// Converts an `f64` literal. Panics only for values the type cannot hold.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal not representable")
    }

    #[inline]
    fn f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn two_pi() -> Self {
        Self::TAU()
    }
}

impl Scalar for f64 {
    fn harm_tol() -> Self {
        1e-9
    }
    fn sep_min() -> Self {
        1e-9
    }
    fn margin_tol() -> Self {
        1e-9
    }
    fn involution_tol() -> Self {
        1e-8
    }
}

impl Scalar for f32 {
    fn harm_tol() -> Self {
        2e-3
    }
    fn sep_min() -> Self {
        1e-4
    }
    fn margin_tol() -> Self {
        1e-4
    }
    fn involution_tol() -> Self {
        1e-3
    }
}
