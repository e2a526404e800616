//! Floating point abstraction shared by the geometric kernels.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar used by the hyperbolic kernel, the flow and the coordinate
/// computation. Implemented for `f32` and `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Slack allowed when clamping a cosine-law argument back into its domain.
    fn clamp_tolerance() -> Self;

    /// Excess of `|trace|` over 2 required to call an isometry hyperbolic.
    fn trace_margin() -> Self;

    /// Converts an `f64` literal. Never fails for the implemented types.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    #[inline]
    fn clamp_tolerance() -> Self {
        1e-12
    }
    #[inline]
    fn trace_margin() -> Self {
        1e-10
    }
}

impl Real for f32 {
    #[inline]
    fn clamp_tolerance() -> Self {
        1e-5
    }
    #[inline]
    fn trace_margin() -> Self {
        1e-4
    }
}

/// Pairwise summation; keeps per-vertex reductions reproducible and accurate
/// regardless of how many terms a long sum has.
pub fn pairwise_sum<T: Real>(values: &[T]) -> T {
    const LEAF: usize = 32;
    if values.len() <= LEAF {
        return values.iter().fold(T::zero(), |acc, &v| acc + v);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}
