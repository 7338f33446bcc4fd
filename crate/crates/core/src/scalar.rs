use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Floating-point scalar used throughout the crate.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Default absolute tolerance on equilibrium residuals.
    fn certify_tol() -> Self;
    /// Default absolute tolerance for bracketed root finding.
    fn root_tol() -> Self;

    /// Converts an `f64` constant into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).unwrap()
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn certify_tol() -> Self {
        1e-8
    }
    fn root_tol() -> Self {
        1e-13
    }
}

impl Real for f32 {
    fn certify_tol() -> Self {
        1e-4
    }
    fn root_tol() -> Self {
        1e-6
    }
}

#[inline]
pub(crate) fn lit<T: Real>(x: f64) -> T {
    T::lit(x)
}
