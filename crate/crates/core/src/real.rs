use std::fmt::{Debug, Display, LowerExp};

use nalgebra::RealField;

/// Working precision of a computation.
///
/// Implemented for `f64` (default) and `f32`. Every factorization in the
/// crate is generic over this trait so that a whole run can be switched to
/// single precision.
pub trait Real: RealField + Copy + Debug + Display + LowerExp + Send + Sync + 'static {
    /// Half the spacing of floating point numbers at 1.
    const UNIT_ROUNDOFF: f64;
    const NAME: &'static str;

    fn of(x: f64) -> Self;
    fn as_f64(self) -> f64;

    fn unit_roundoff() -> Self {
        Self::of(Self::UNIT_ROUNDOFF)
    }
}

impl Real for f64 {
    const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;
    const NAME: &'static str = "double";

    #[inline]
    fn of(x: f64) -> Self {
        x
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self
    }
}

impl Real for f32 {
    const UNIT_ROUNDOFF: f64 = f32::EPSILON as f64 / 2.0;
    const NAME: &'static str = "single";

    #[inline]
    fn of(x: f64) -> Self {
        x as f32
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self as f64
    }
}
