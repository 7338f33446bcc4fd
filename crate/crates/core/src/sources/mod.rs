//! Source priors and their truncated moments.

pub mod quadrature;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::special_fn::{
    erfcx, find_root, std_normal_cdf, std_normal_pdf, std_normal_sf, Bracket,
};
use rand::Rng;
use rand_distr::{Distribution, Exp, StandardNormal};

/// Prior of the source value `M`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SourceModel<T> {
    /// Density λ e^{-λm} on [0, ∞).
    Exponential { rate: T },
    /// N(mean, std²) on the real line.
    Gaussian { mean: T, std: T },
}

impl<T: Real> SourceModel<T> {
    pub fn exponential(rate: T) -> Result<Self> {
        if !(rate > T::zero()) || !rate.is_finite() {
            return Err(Error::domain("exponential", format!("rate {rate} must be positive")));
        }
        Ok(SourceModel::Exponential { rate })
    }

    pub fn gaussian(mean: T, std: T) -> Result<Self> {
        if !mean.is_finite() || !(std > T::zero()) || !std.is_finite() {
            return Err(Error::domain(
                "gaussian",
                format!("need finite mean and positive std, got ({mean}, {std})"),
            ));
        }
        Ok(SourceModel::Gaussian { mean, std })
    }

    pub fn support(&self) -> (T, T) {
        match *self {
            SourceModel::Exponential { .. } => (T::zero(), T::infinity()),
            SourceModel::Gaussian { .. } => (T::neg_infinity(), T::infinity()),
        }
    }

    pub fn mean(&self) -> T {
        match *self {
            SourceModel::Exponential { rate } => rate.recip(),
            SourceModel::Gaussian { mean, .. } => mean,
        }
    }

    pub fn variance(&self) -> T {
        match *self {
            SourceModel::Exponential { rate } => (rate * rate).recip(),
            SourceModel::Gaussian { std, .. } => std * std,
        }
    }

    pub fn cdf(&self, x: T) -> T {
        match *self {
            SourceModel::Exponential { rate } => {
                if x <= T::zero() {
                    T::zero()
                } else {
                    -(-rate * x).exp_m1()
                }
            }
            SourceModel::Gaussian { mean, std } => std_normal_cdf((x - mean) / std),
        }
    }

    /// Inverse cdf for p in (0, 1).
    pub fn quantile(&self, p: T) -> Result<T> {
        if !(p > T::zero() && p < T::one()) {
            return Err(Error::domain("quantile", format!("p = {p} outside (0, 1)")));
        }
        match *self {
            SourceModel::Exponential { rate } => Ok(-(-p).ln_1p() / rate),
            SourceModel::Gaussian { mean, std } => {
                let f = |z: T| std_normal_cdf(z) - p;
                let br = Bracket::new(f, lit(-40.0), lit(40.0))?;
                let z = find_root(f, &br, T::root_tol())?;
                Ok(mean + std * z)
            }
        }
    }

    /// One draw from the source, in double precision.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            SourceModel::Exponential { rate } => Exp::new(rate.as_f64()).unwrap().sample(rng),
            SourceModel::Gaussian { mean, std } => {
                let z: f64 = StandardNormal.sample(rng);
                mean.as_f64() + std.as_f64() * z
            }
        }
    }

    /// Intersects `[a, b]` with the support, failing if nothing is left.
    fn clip(&self, a: T, b: T) -> Result<(T, T)> {
        let (lo, hi) = self.support();
        let a2 = a.max(lo);
        let b2 = b.min(hi);
        if a.is_nan() || b.is_nan() || !(a2 < b2) {
            return Err(Error::ZeroProbability { lo: a.as_f64(), hi: b.as_f64() });
        }
        Ok((a2, b2))
    }

    /// Pr(a < M < b).
    pub fn interval_prob(&self, a: T, b: T) -> T {
        let Ok((a, b)) = self.clip(a, b) else {
            return T::zero();
        };
        match *self {
            SourceModel::Exponential { rate } => {
                if b.is_infinite() {
                    (-rate * a).exp()
                } else {
                    (-rate * a).exp() * -(-rate * (b - a)).exp_m1()
                }
            }
            SourceModel::Gaussian { mean, std } => {
                let (al, be) = ((a - mean) / std, (b - mean) / std);
                let p = if al >= T::zero() {
                    std_normal_sf(al) - std_normal_sf(be)
                } else if be <= T::zero() {
                    std_normal_sf(-be) - std_normal_sf(-al)
                } else {
                    T::one() - std_normal_sf(be) - std_normal_sf(-al)
                };
                p.max(T::zero()).min(T::one())
            }
        }
    }

    /// E[M | a < M < b].
    pub fn truncated_mean(&self, a: T, b: T) -> Result<T> {
        let (a, b) = self.clip(a, b)?;
        match *self {
            SourceModel::Exponential { rate } => Ok(exp_trunc_mean(rate, a, b)),
            SourceModel::Gaussian { mean, std } => {
                let z = std_trunc_mean((a - mean) / std, (b - mean) / std);
                Ok((mean + std * z).max(a).min(b))
            }
        }
    }

    /// Var(M | a < M < b).
    pub fn truncated_variance(&self, a: T, b: T) -> Result<T> {
        let (a, b) = self.clip(a, b)?;
        match *self {
            SourceModel::Exponential { rate } => Ok(exp_trunc_var(rate, b - a)),
            SourceModel::Gaussian { mean, std } => {
                Ok(std * std * std_trunc_var((a - mean) / std, (b - mean) / std))
            }
        }
    }

    /// E[M^power | a < M < b] by adaptive quadrature; `power` is 1 or 2.
    pub fn quadrature_moment(&self, a: T, b: T, power: u32) -> Result<T> {
        if power != 1 && power != 2 {
            return Err(Error::domain("quadrature_moment", format!("power {power} not in {{1, 2}}")));
        }
        let (a, b) = self.clip(a, b)?;
        // moments of t = m - shift under a weight normalized to 1 at the shift
        let (shift, scale, m1, m2) = match *self {
            SourceModel::Exponential { rate } => {
                let hi = if b.is_infinite() { a + lit::<T>(60.0) / rate } else { b };
                let (m1, m2) = weighted_moments(|t| (-rate * t).exp(), T::zero(), hi - a)?;
                (a, T::one(), m1, m2)
            }
            SourceModel::Gaussian { mean, std } => {
                let al = (a - mean) / std;
                let be = (b - mean) / std;
                let zr = T::zero().max(al).min(be);
                let lo = if al.is_infinite() { be.min(T::zero()) - lit(12.0) } else { al };
                let hi = if be.is_infinite() { al.max(T::zero()) + lit(12.0) } else { be };
                let (m1, m2) = weighted_moments(
                    |t| {
                        let z = zr + t;
                        (-(z - zr) * (z + zr) * lit(0.5)).exp()
                    },
                    lo - zr,
                    hi - zr,
                )?;
                (mean + std * zr, std, m1, m2)
            }
        };
        let e1 = scale * m1;
        let e2 = scale * scale * m2;
        Ok(match power {
            1 => shift + e1,
            _ => shift * shift + lit::<T>(2.0) * shift * e1 + e2,
        })
    }
}

fn weighted_moments<T: Real, W: Fn(T) -> T>(w: W, lo: T, hi: T) -> Result<(T, T)> {
    let width = (hi - lo).max(T::epsilon());
    // first pass for the scale of the mass integral
    let (mass0, _) = quadrature::integrate(&w, lo, hi, width * lit(1e-6))?;
    let rel = lit::<T>(1e-14).max(T::epsilon() * lit(16.0));
    let s = lo.abs().max(hi.abs());
    let tol = [mass0 * rel, mass0 * s * rel, mass0 * s * s * rel];
    let (v, _) = quadrature::integrate_vec(
        |t| {
            let wt = w(t);
            [wt, t * wt, t * t * wt]
        },
        lo,
        hi,
        tol,
        4000,
    )?;
    Ok((v[1] / v[0], v[2] / v[0]))
}

/// ψ(x) = 1/x - 1/(e^x - 1), the scaled offset of the mean inside a bin.
fn psi<T: Real>(x: T) -> T {
    if x < lit(1e-3) {
        let x2 = x * x;
        lit::<T>(0.5) - x / lit(12.0) + x * x2 / lit(720.0) - x * x2 * x2 / lit(30240.0)
    } else {
        x.recip() - x.exp_m1().recip()
    }
}

fn exp_trunc_mean<T: Real>(rate: T, a: T, b: T) -> T {
    if b.is_infinite() {
        return a + rate.recip();
    }
    let l = b - a;
    (a + l * psi(rate * l)).max(a).min(b)
}

/// Variance of an exponential restricted to a bin of length `l`.
pub(crate) fn exp_trunc_var<T: Real>(rate: T, l: T) -> T {
    if l.is_infinite() {
        return (rate * rate).recip();
    }
    let x = rate * l;
    let v = if x < lit(1e-2) {
        let l2 = l * l;
        let r2 = rate * rate;
        l2 / lit(12.0) - r2 * l2 * l2 / lit(240.0) + r2 * r2 * l2 * l2 * l2 / lit(6048.0)
    } else {
        let s = l / (lit::<T>(2.0) * (x * lit(0.5)).sinh());
        (rate * rate).recip() - s * s
    };
    v.max(T::zero())
}

/// Mean of a standard normal truncated to (α, β).
fn std_trunc_mean<T: Real>(al: T, be: T) -> T {
    let h = (be - al) * lit(0.5);
    let c = (be + al) * lit(0.5);
    if h.is_finite() && h * c.abs().max(T::one()) < lit(1e-4) {
        return c - c * h * h / lit(3.0);
    }
    if be <= T::zero() {
        return -std_trunc_mean(-be, -al);
    }
    let m = if al >= T::zero() {
        let (ra, _) = right_tail_ratios(al, be);
        let d = tail_decay(al, be);
        ra * -(-d).exp_m1()
    } else {
        let z = T::one() - std_normal_sf(be) - std_normal_sf(-al);
        (std_normal_pdf(al) - std_normal_pdf(be)) / z
    };
    m.max(al).min(be)
}

/// (β-α)(β+α)/2, the log ratio φ(α)/φ(β).
#[inline]
fn tail_decay<T: Real>(al: T, be: T) -> T {
    if be.is_infinite() {
        T::infinity()
    } else {
        (be - al) * (be + al) * lit(0.5)
    }
}

/// φ(α)/Z and φ(β)/Z for 0 <= α < β, Z = Φ(β) - Φ(α), via erfcx.
fn right_tail_ratios<T: Real>(al: T, be: T) -> (T, T) {
    let d = tail_decay(al, be);
    let ed = (-d).exp();
    let tail_b = if be.is_infinite() { T::zero() } else { ed * erfcx(be * T::FRAC_1_SQRT_2()) };
    let den = erfcx(al * T::FRAC_1_SQRT_2()) - tail_b;
    let ra = lit::<T>(0.797884560802865355879892119869) / den;
    (ra, ra * ed)
}

/// Variance of a standard normal truncated to (α, β).
fn std_trunc_var<T: Real>(al: T, be: T) -> T {
    let h = (be - al) * lit(0.5);
    let c = (be + al) * lit(0.5);
    if h.is_finite() && h * c.abs().max(T::one()) < lit(1e-4) {
        let h2 = h * h;
        return h2 / lit(3.0) - h2 * h2 * lit(2.0) / lit(45.0);
    }
    if be <= T::zero() {
        return std_trunc_var(-be, -al);
    }
    let (ra, rb) = if al >= T::zero() {
        right_tail_ratios(al, be)
    } else {
        let z = T::one() - std_normal_sf(be) - std_normal_sf(-al);
        (std_normal_pdf(al) / z, std_normal_pdf(be) / z)
    };
    let m = ra - rb;
    let bterm = if be.is_infinite() { T::zero() } else { be * rb };
    let aterm = if al.is_infinite() { T::zero() } else { al * ra };
    (T::one() + aterm - bterm - m * m).max(T::zero()).min(T::one())
}
