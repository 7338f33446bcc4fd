// Brent's method on a checked sign-change bracket.

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Interval `[lo, hi]` on which `f` changes sign (or vanishes at an end).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket<T> {
    pub lo: T,
    pub hi: T,
    pub f_lo: T,
    pub f_hi: T,
}

impl<T: Real> Bracket<T> {
    pub fn new<F: FnMut(T) -> T>(mut f: F, lo: T, hi: T) -> Result<Self> {
        let f_lo = f(lo);
        let f_hi = f(hi);
        Self::from_values(lo, hi, f_lo, f_hi)
    }

    pub fn from_values(lo: T, hi: T, f_lo: T, f_hi: T) -> Result<Self> {
        let bad = || Error::InvalidBracket {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
            f_lo: f_lo.as_f64(),
            f_hi: f_hi.as_f64(),
        };
        if !(lo < hi) || f_lo.is_nan() || f_hi.is_nan() {
            return Err(bad());
        }
        let zero = T::zero();
        let straddles = f_lo == zero
            || f_hi == zero
            || (f_lo < zero && f_hi > zero)
            || (f_lo > zero && f_hi < zero);
        if straddles {
            Ok(Bracket { lo, hi, f_lo, f_hi })
        } else {
            Err(bad())
        }
    }

    pub fn width(&self) -> T {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RootOptions<T> {
    pub xtol: T,
    pub rtol: T,
    pub max_iter: usize,
}

impl<T: Real> Default for RootOptions<T> {
    fn default() -> Self {
        RootOptions {
            xtol: T::root_tol(),
            rtol: lit::<T>(4.0) * T::epsilon(),
            max_iter: 500,
        }
    }
}

/// Root of `f` inside `bracket` to absolute tolerance `tol`.
pub fn find_root<T: Real, F: FnMut(T) -> T>(f: F, bracket: &Bracket<T>, tol: T) -> Result<T> {
    let opts = RootOptions {
        xtol: tol,
        ..RootOptions::default()
    };
    find_root_with(f, bracket, opts)
}

pub fn find_root_with<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    bracket: &Bracket<T>,
    opts: RootOptions<T>,
) -> Result<T> {
    let zero = T::zero();
    let two = lit::<T>(2.0);
    let (mut xpre, mut xcur) = (bracket.lo, bracket.hi);
    let (mut fpre, mut fcur) = (bracket.f_lo, bracket.f_hi);
    if fpre == zero {
        return Ok(xpre);
    }
    if fcur == zero {
        return Ok(xcur);
    }
    let (mut xblk, mut fblk) = (zero, zero);
    let (mut spre, mut scur) = (zero, zero);

    for _ in 0..opts.max_iter {
        if (fpre < zero) != (fcur < zero) {
            xblk = xpre;
            fblk = fpre;
            spre = xcur - xpre;
            scur = spre;
        }
        if fblk.abs() < fcur.abs() {
            xpre = xcur;
            xcur = xblk;
            xblk = xpre;
            fpre = fcur;
            fcur = fblk;
            fblk = fpre;
        }

        let delta = (opts.xtol + opts.rtol * xcur.abs()) / two;
        let sbis = (xblk - xcur) / two;
        if fcur == zero || sbis.abs() < delta {
            return Ok(xcur);
        }

        if spre.abs() > delta && fcur.abs() < fpre.abs() {
            let stry = if xpre == xblk {
                -fcur * (xcur - xpre) / (fcur - fpre)
            } else {
                let dpre = (fpre - fcur) / (xpre - xcur);
                let dblk = (fblk - fcur) / (xblk - xcur);
                -fcur * (fblk * dblk - fpre * dpre) / (dblk * dpre * (fblk - fpre))
            };
            if two * stry.abs() < spre.abs().min(lit::<T>(3.0) * sbis.abs() - delta) {
                spre = scur;
                scur = stry;
            } else {
                spre = sbis;
                scur = sbis;
            }
        } else {
            spre = sbis;
            scur = sbis;
        }

        xpre = xcur;
        fpre = fcur;
        if scur.abs() > delta {
            xcur = xcur + scur;
        } else if sbis > zero {
            xcur = xcur + delta;
        } else {
            xcur = xcur - delta;
        }
        fcur = f(xcur);
        if fcur.is_nan() {
            return Err(Error::domain("find_root", format!("f is NaN at {xcur}")));
        }
    }
    Err(Error::NonConvergence {
        iterations: opts.max_iter,
        last_change: scur.abs().as_f64(),
    })
}

/// Grows `[lo, lo + step]` by doubling the step until `f` changes sign.
pub fn expand_bracket_up<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    lo: T,
    step: T,
    max_doublings: usize,
) -> Result<Bracket<T>> {
    let f_lo = f(lo);
    let mut step = step;
    let mut last = Err(Error::InvalidBracket {
        lo: lo.as_f64(),
        hi: (lo + step).as_f64(),
        f_lo: f_lo.as_f64(),
        f_hi: f64::NAN,
    });
    for _ in 0..max_doublings {
        let hi = lo + step;
        last = Bracket::from_values(lo, hi, f_lo, f(hi));
        if last.is_ok() {
            return last;
        }
        step = step * lit(2.0);
    }
    last
}
