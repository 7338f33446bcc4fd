use super::erf::{erfc, erfcx};
use crate::scalar::{lit, Real};

#[inline]
fn frac_1_sqrt_2pi<T: Real>() -> T {
    lit(0.398942280401432677939946059934)
}

pub fn std_normal_pdf<T: Real>(x: T) -> T {
    frac_1_sqrt_2pi::<T>() * (-(x * x) * lit(0.5)).exp()
}

pub fn std_normal_cdf<T: Real>(x: T) -> T {
    lit::<T>(0.5) * erfc(-x * T::FRAC_1_SQRT_2())
}

/// Upper tail 1 - Φ(x), without cancellation for large x.
pub fn std_normal_sf<T: Real>(x: T) -> T {
    lit::<T>(0.5) * erfc(x * T::FRAC_1_SQRT_2())
}

/// Mills ratio φ(x) / (1 - Φ(x)).
pub fn mills_ratio<T: Real>(x: T) -> T {
    if x >= T::zero() {
        if x.is_infinite() {
            return x;
        }
        // φ(x)/Q(x) = sqrt(2/π) / erfcx(x/√2)
        lit::<T>(0.797884560802865355879892119869) / erfcx(x * T::FRAC_1_SQRT_2())
    } else {
        std_normal_pdf(x) / std_normal_sf(x)
    }
}
