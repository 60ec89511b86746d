//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
///
/// All geometry, curvature and flow code is written against this trait. The
/// tolerances quoted throughout the crate are calibrated for `f64`; `f32`
/// works, but only at single-precision accuracy.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Slack used when clamping cosines that drift just outside `[-1, 1]`.
    const ANGLE_SLACK: f64;

    /// Converts an `f64` literal. Panics only for values the type cannot hold.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal not representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {
    const ANGLE_SLACK: f64 = 1e-5;
}

impl Real for f64 {
    const ANGLE_SLACK: f64 = 1e-9;
}

/// Formats a value in scientific notation with 17 significant digits, which
/// round-trips any `f64`.
pub fn fmt_exact<T: Real>(x: T) -> String {
    format!("{:.16e}", x.as_f64())
}
