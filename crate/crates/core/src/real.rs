use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar used by the metric code.
pub trait Real: Float + FromPrimitive + Sum + Debug + Display + Send + Sync + 'static {
    /// Converts an `f64` literal. Every literal used here is representable
    /// (after rounding) in both `f32` and `f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    #[inline]
    fn from_count(n: u32) -> Self {
        Self::from_u32(n).expect("goal count representable")
    }
}

impl<T> Real for T where T: Float + FromPrimitive + Sum + Debug + Display + Send + Sync + 'static {}
