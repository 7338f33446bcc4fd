//! Adaptive 15-point Gauss-Kronrod quadrature over a vector-valued integrand.
//!
//! Used as an independent check on the closed-form moments, never by the
//! solvers themselves.

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
// 7-point Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy)]
struct Segment<T, const N: usize> {
    a: T,
    b: T,
    value: [T; N],
    error: [T; N],
}

fn gk15<T: Real, F: FnMut(T) -> [T; N], const N: usize>(f: &mut F, a: T, b: T) -> Segment<T, N> {
    let half = (b - a) * lit(0.5);
    let center = (a + b) * lit(0.5);
    let mut kron = [T::zero(); N];
    let mut gauss = [T::zero(); N];
    for (i, (&x, &wk)) in XGK.iter().zip(WGK.iter()).enumerate() {
        let dx = half * lit(x);
        let pts: &[T] = if i == 7 { &[T::zero()] } else { &[-T::one(), T::one()] };
        for &s in pts {
            let v = f(center + s * dx);
            for k in 0..N {
                kron[k] = kron[k] + lit::<T>(wk) * v[k];
                if i % 2 == 1 {
                    gauss[k] = gauss[k] + lit::<T>(WG[i / 2]) * v[k];
                }
            }
        }
    }
    let mut value = [T::zero(); N];
    let mut error = [T::zero(); N];
    for k in 0..N {
        value[k] = kron[k] * half;
        error[k] = ((kron[k] - gauss[k]) * half).abs();
    }
    Segment { a, b, value, error }
}

/// Integrates every component of `f` over `[a, b]` (finite).
///
/// Component `k` is accepted once its error estimate is at most
/// `tol[k]`; the interval with the largest scaled error is bisected first.
pub fn integrate_vec<T: Real, F: FnMut(T) -> [T; N], const N: usize>(
    mut f: F,
    a: T,
    b: T,
    tol: [T; N],
    max_segments: usize,
) -> Result<([T; N], [T; N])> {
    let mut segs = vec![gk15(&mut f, a, b)];
    let score = |s: &Segment<T, N>| {
        (0..N)
            .map(|k| s.error[k] / tol[k])
            .fold(T::zero(), |m, v| m.max(v))
    };
    loop {
        let mut total = [T::zero(); N];
        let mut err = [T::zero(); N];
        for s in &segs {
            for k in 0..N {
                total[k] = total[k] + s.value[k];
                err[k] = err[k] + s.error[k];
            }
        }
        if (0..N).all(|k| err[k] <= tol[k]) {
            return Ok((total, err));
        }
        if segs.len() >= max_segments {
            let worst = (0..N).map(|k| err[k].as_f64()).fold(0.0, f64::max);
            return Err(Error::NonConvergence {
                iterations: segs.len(),
                last_change: worst,
            });
        }
        let (idx, _) = segs
            .iter()
            .enumerate()
            .map(|(i, s)| (i, score(s)))
            .fold((0, -T::one()), |acc, x| if x.1 > acc.1 { x } else { acc });
        let s = segs.swap_remove(idx);
        let mid = (s.a + s.b) * lit(0.5);
        if !(mid > s.a && mid < s.b) {
            return Err(Error::NonConvergence {
                iterations: segs.len(),
                last_change: score(&s).as_f64(),
            });
        }
        segs.push(gk15(&mut f, s.a, mid));
        segs.push(gk15(&mut f, mid, s.b));
    }
}

/// Scalar convenience wrapper around [`integrate_vec`].
pub fn integrate<T: Real, F: FnMut(T) -> T>(f: F, a: T, b: T, tol: T) -> Result<(T, T)> {
    let mut f = f;
    let ([v], [e]) = integrate_vec(|x| [f(x)], a, b, [tol], 4000)?;
    Ok((v, e))
}
