// Real branches of the Lambert W function: Halley iteration from branch-aware
// starting points.

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

// 1/e split into a head and a tail so that x + 1/e keeps full precision near
// the branch point.
const INV_E_HI: f64 = 0.36787944117144233;
const INV_E_LO: f64 = -1.2428753672788363e-17;
const BRANCH_TOL: f64 = 1e-12;

// Series of W around the branch point in p = sqrt(2(e x + 1)); W0 uses +p,
// W-1 uses -p.
const BRANCH_SERIES: [f64; 12] = [
    -1.0,
    1.0,
    -1.0 / 3.0,
    11.0 / 72.0,
    -43.0 / 540.0,
    769.0 / 17280.0,
    -221.0 / 8505.0,
    680863.0 / 43545600.0,
    -1963.0 / 204120.0,
    226287557.0 / 37623398400.0,
    -5776369.0 / 1515591000.0,
    169709463197.0 / 69528040243200.0,
];

fn branch_series<T: Real>(p: T) -> T {
    BRANCH_SERIES
        .iter()
        .rev()
        .fold(T::zero(), |acc, &c| acc * p + lit(c))
}

/// x + 1/e, computed with the split constant.
#[inline]
fn offset<T: Real>(x: T) -> T {
    (x + lit(INV_E_HI)) + lit(INV_E_LO)
}

fn halley<T: Real>(x: T, mut w: T) -> T {
    let tol = lit::<T>(4.0) * T::epsilon();
    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - x;
        if f == T::zero() {
            break;
        }
        let wp1 = w + T::one();
        if wp1 == T::zero() {
            break;
        }
        let denom = ew * wp1 - (w + lit(2.0)) * f / (lit::<T>(2.0) * wp1);
        let dw = f / denom;
        if !dw.is_finite() {
            break;
        }
        w = w - dw;
        if dw.abs() <= tol * (T::one() + w.abs()) {
            break;
        }
    }
    w
}

fn check_branch_point<T: Real>(op: &'static str, x: T) -> Result<Option<T>> {
    if x.is_nan() {
        return Err(Error::domain(op, "NaN argument"));
    }
    let q = offset(x);
    if q < -lit::<T>(BRANCH_TOL) {
        return Err(Error::domain(op, format!("argument {x} below -1/e")));
    }
    if q <= T::zero() {
        return Ok(Some(-T::one()));
    }
    Ok(None)
}

/// Principal branch W0 on [-1/e, ∞).
///
/// Inputs within 1e-12 below -1/e are treated as the branch point.
pub fn lambert_w0<T: Real>(x: T) -> Result<T> {
    if let Some(w) = check_branch_point("lambert_w0", x)? {
        return Ok(w);
    }
    if x == T::zero() {
        return Ok(T::zero());
    }
    if x.is_infinite() {
        return Ok(x);
    }
    let q = offset(x);
    let seed = if x < lit(-0.25) {
        let p = (lit::<T>(2.0) * T::E() * q).sqrt();
        let w = branch_series(p);
        if p < lit(1e-3) {
            return Ok(w);
        }
        w
    } else if x < lit(3.0) {
        // Winitzki's approximation
        let l = (T::one() + x).ln();
        l * (T::one() - (T::one() + l).ln() / (lit::<T>(2.0) + l))
    } else {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };
    Ok(halley(x, seed))
}

/// Lower branch W-1 on [-1/e, 0).
pub fn lambert_w_minus1<T: Real>(x: T) -> Result<T> {
    if let Some(w) = check_branch_point("lambert_w_minus1", x)? {
        return Ok(w);
    }
    if x >= T::zero() {
        return Err(Error::domain(
            "lambert_w_minus1",
            format!("argument {x} not negative"),
        ));
    }
    let q = offset(x);
    let seed = if x < lit(-0.25) {
        let p = (lit::<T>(2.0) * T::E() * q).sqrt();
        let w = branch_series(-p);
        if p < lit(1e-3) {
            return Ok(w);
        }
        w
    } else {
        let l1 = (-x).ln();
        let l2 = (-l1).ln();
        l1 - l2 + l2 / l1
    };
    Ok(halley(x, seed))
}
