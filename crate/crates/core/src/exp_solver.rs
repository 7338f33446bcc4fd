//! Equilibria for an exponential source with rate λ.
//!
//! Bin lengths are built backwards from the last finite bin: with
//! `c = 2/λ + 2b`, the last finite length solves `g(l) = c` and each earlier
//! one solves `g(l_k) = c - h(l_{k+1})`. For `b > 0` the lengths decrease
//! towards the fixed point `l*`, so lengths far from the tail are stored
//! both as plain values and as deviations `l_k - l*`, which keep full
//! relative precision after the plain values have rounded onto `l*`.

use crate::equilibrium::Partition;
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::sources::SourceModel;
use crate::special_fn::{find_root_with, lambert_w0, Bracket, RootOptions};

/// Below `λc = 1 + NEAR_BRANCH` the length equation is solved by bracketing
/// instead of the Lambert form, which loses digits at the branch point.
const NEAR_BRANCH: f64 = 1e-2;

/// `g(l) = l e^{λl} / (e^{λl} - 1)`; `g(0) = 1/λ`.
pub fn g<T: Real>(l: T, rate: T) -> T {
    if l == T::zero() {
        return rate.recip();
    }
    if l.is_infinite() {
        return l;
    }
    l / -(-rate * l).exp_m1()
}

/// `h(l) = l / (e^{λl} - 1)`; `h(0) = 1/λ`, `h(∞) = 0`.
pub fn h<T: Real>(l: T, rate: T) -> T {
    if l == T::zero() {
        return rate.recip();
    }
    if l.is_infinite() {
        return T::zero();
    }
    l / (rate * l).exp_m1()
}

/// Derivative of `h`.
fn h_prime<T: Real>(l: T, rate: T) -> T {
    let x = rate * l;
    if x < lit(1e-4) {
        return lit::<T>(-0.5) + x / lit(6.0);
    }
    let e = x.exp_m1();
    -((e + T::one()) * (x - T::one()) + T::one()) / (e * e)
}

fn check_rate<T: Real>(op: &'static str, rate: T) -> Result<()> {
    if rate > T::zero() && rate.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("rate {rate} must be positive")))
    }
}

/// `floor(x)`, treating values a few ulps below an integer as that integer.
fn floor_tolerant<T: Real>(x: T) -> T {
    let n = x.round();
    if (x - n).abs() <= lit::<T>(8.0) * T::epsilon() * x.abs().max(T::one()) {
        n
    } else {
        x.floor()
    }
}

/// Upper bound `floor(-1/(2bλ) + 1)` on the bin count when `b < 0`.
pub fn max_bins_negative_bias<T: Real>(rate: T, bias: T) -> Result<usize> {
    check_rate("max_bins_negative_bias", rate)?;
    if !(bias < T::zero()) {
        return Err(Error::domain(
            "max_bins_negative_bias",
            format!("bias {bias} is not negative; the bin count is unbounded"),
        ));
    }
    let x = -(lit::<T>(2.0) * bias * rate).recip() + T::one();
    Ok(floor_tolerant(x).to_usize().unwrap_or(usize::MAX))
}

/// Bias above which an equilibrium with at least `n` bins exists (`n` = 2, 3).
pub fn bias_threshold<T: Real>(rate: T, n: usize) -> Result<T> {
    check_rate("bias_threshold", rate)?;
    let half = (lit::<T>(2.0) * rate).recip();
    match n {
        2 => Ok(-half),
        3 => Ok(-half * (T::E() - lit(2.0)) / (T::E() - T::one())),
        _ => Err(Error::UnsupportedBins(n)),
    }
}

/// Positive root of `g(l) = c`, or `None` when `λc <= 1`.
fn solve_g<T: Real>(c: T, rate: T) -> Result<Option<T>> {
    let u = rate * c;
    if !(u > T::one()) {
        return Ok(None);
    }
    if u < T::one() + lit(NEAR_BRANCH) {
        let f = |l: T| g(l, rate) - c;
        let br = Bracket::new(f, T::zero(), c)?;
        let opts = RootOptions { xtol: T::min_positive_value(), ..RootOptions::default() };
        let l = find_root_with(f, &br, opts)?;
        return Ok((l > T::zero()).then_some(l));
    }
    // x = -u e^{-u}, formed in log space
    let x = -(u.ln() - u).exp();
    let l = (lambert_w0(x)? + u) / rate;
    Ok((l > T::zero()).then_some(l))
}

/// The informative two-bin equilibrium; `m_1` is the Lambert-W solution.
pub fn solve_two_bin<T: Real>(rate: T, bias: T) -> Result<Partition<T>> {
    check_rate("solve_two_bin", rate)?;
    let threshold = bias_threshold(rate, 2)?;
    let c = lit::<T>(2.0) / rate + lit::<T>(2.0) * bias;
    match solve_g(c, rate)? {
        Some(m1) if bias > threshold => {
            Partition::from_interior(SourceModel::exponential(rate)?, bias, &[m1])
        }
        _ => Err(Error::NoInformativeEquilibrium {
            bias: bias.as_f64(),
            threshold: threshold.as_f64(),
        }),
    }
}

/// Output of the backward recursion for an `N`-bin equilibrium.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpRecursionState<T> {
    pub rate: T,
    pub bias: T,
    /// Finite lengths `l_1 .. l_{N-1}` in partition order.
    pub lengths: Vec<T>,
    /// `c_k = 2/λ + 2b - h(l_{k+1})` for `k = 1 .. N-2`.
    pub c_values: Vec<T>,
    /// `l*` when `b > 0`.
    pub fixed_point: Option<T>,
    /// `l_k - l*` for every finite length when `b > 0`.
    pub deviations: Option<Vec<T>>,
}

impl<T: Real> ExpRecursionState<T> {
    pub fn bins(&self) -> usize {
        self.lengths.len() + 1
    }

    pub fn edges(&self) -> Vec<T> {
        let mut e = Vec::with_capacity(self.lengths.len() + 2);
        let mut m = T::zero();
        e.push(m);
        for &l in &self.lengths {
            m = m + l;
            e.push(m);
        }
        e.push(T::infinity());
        e
    }

    pub fn partition(&self) -> Result<Partition<T>> {
        Partition::new(SourceModel::exponential(self.rate)?, self.bias, self.edges())
    }

    /// `l_1 < l_2 < ... < l_{N-1}`, judged on the deviations when available.
    pub fn lengths_strictly_increasing(&self) -> bool {
        let v = self.deviations.as_ref().unwrap_or(&self.lengths);
        v.windows(2).all(|w| w[0] < w[1])
    }
}

/// Runs the backward recursion for `n` bins.
pub fn backward_recursion<T: Real>(rate: T, bias: T, n: usize) -> Result<ExpRecursionState<T>> {
    check_rate("backward_recursion", rate)?;
    if n == 0 {
        return Err(Error::UnsupportedBins(0));
    }
    if !bias.is_finite() {
        return Err(Error::domain("backward_recursion", "bias must be finite"));
    }
    let c = lit::<T>(2.0) / rate + lit::<T>(2.0) * bias;
    let mut rev = Vec::with_capacity(n.saturating_sub(1));
    let mut c_rev = Vec::new();
    let collapse = |k: usize, ck: T| Error::BinCollapse {
        bin: k,
        detail: format!("g(l_{k}) = {ck} has no positive solution (infimum 1/λ)"),
    };
    if n >= 2 {
        rev.push(solve_g(c, rate)?.ok_or_else(|| collapse(n - 1, c))?);
        for k in (1..n - 1).rev() {
            let ck = c - h(*rev.last().unwrap(), rate);
            c_rev.push(ck);
            rev.push(solve_g(ck, rate)?.ok_or_else(|| collapse(k, ck))?);
        }
    }
    let (fixed_point, deviations) = if bias > T::zero() {
        let ls = fixed_point_length(rate, bias)?;
        let dev = tail_deviations(rate, ls, rev.first().copied(), rev.len())?;
        (Some(ls), Some(dev.into_iter().rev().collect()))
    } else {
        (None, None)
    };
    rev.reverse();
    c_rev.reverse();
    Ok(ExpRecursionState { rate, bias, lengths: rev, c_values: c_rev, fixed_point, deviations })
}

/// `N`-bin equilibrium from the backward recursion.
pub fn solve_n_bins<T: Real>(rate: T, bias: T, n: usize) -> Result<Partition<T>> {
    backward_recursion(rate, bias, n)?.partition()
}

/// Largest `N <= cap` for which the recursion constructs an equilibrium.
pub fn max_constructible_bins<T: Real>(rate: T, bias: T, cap: usize) -> Result<usize> {
    check_rate("max_constructible_bins", rate)?;
    if bias > T::zero() {
        return Ok(cap);
    }
    let c = lit::<T>(2.0) / rate + lit::<T>(2.0) * bias;
    let mut n = 1;
    let mut last: Option<T> = None;
    while n < cap {
        let target = match last {
            None => c,
            Some(l) => c - h(l, rate),
        };
        match solve_g(target, rate)? {
            Some(l) => {
                last = Some(l);
                n += 1;
            }
            None => break,
        }
    }
    Ok(n)
}

/// `Ψ(s) = (c - s) e^{λs} - (c + s)` with `c = 2/λ + 2b`.
pub fn psi<T: Real>(s: T, rate: T, bias: T) -> T {
    let c = lit::<T>(2.0) / rate + lit::<T>(2.0) * bias;
    (c - s) * (rate * s).exp() - (c + s)
}

/// Common bin length `l*` of the infinite equilibrium (`b > 0`).
pub fn fixed_point_length<T: Real>(rate: T, bias: T) -> Result<T> {
    check_rate("fixed_point_length", rate)?;
    if !(bias > T::zero()) {
        return Err(Error::domain("fixed_point_length", format!("bias {bias} must be positive")));
    }
    let c = lit::<T>(2.0) / rate + lit::<T>(2.0) * bias;
    // Ψ(s) e^{-λs}: same roots, no overflow
    let f = |s: T| (c - s) - (c + s) * (-rate * s).exp();
    let br = Bracket::new(f, lit::<T>(2.0) * bias, c)?;
    let opts = RootOptions { xtol: T::min_positive_value(), ..RootOptions::default() };
    find_root_with(f, &br, opts)
}

/// `h(l* + δ) - h(l*)` without cancellation.
fn delta_h<T: Real>(rate: T, ls: T, d: T) -> T {
    let e = (rate * ls).exp_m1();
    let grow = (rate * ls).exp() * (rate * d).exp_m1();
    (d * e - ls * grow) / (e * (e + grow))
}

/// Deviations `δ_j = L_j - l*` of the tail-anchored lengths `L_1, L_2, ...`.
fn tail_deviations<T: Real>(rate: T, ls: T, first: Option<T>, count: usize) -> Result<Vec<T>> {
    let mut out = Vec::with_capacity(count);
    let Some(l1) = first else {
        return Ok(out);
    };
    let mut d = l1 - ls;
    if count > 0 {
        out.push(d);
    }
    while out.len() < count {
        d = next_deviation(rate, ls, d)?;
        out.push(d);
    }
    Ok(out)
}

/// Solves `δ' + Δh(δ') = -Δh(δ)` by Newton's method.
fn next_deviation<T: Real>(rate: T, ls: T, d: T) -> Result<T> {
    let r = -delta_h(rate, ls, d);
    if r == T::zero() {
        return Ok(T::zero());
    }
    let mut x = r / (T::one() + h_prime(ls, rate));
    for _ in 0..60 {
        let f = x + delta_h(rate, ls, x) - r;
        let step = f / (T::one() + h_prime(ls + x, rate));
        x = x - step;
        if step.abs() <= lit::<T>(4.0) * T::epsilon() * x.abs() {
            return Ok(x);
        }
    }
    Err(Error::NonConvergence { iterations: 60, last_change: x.as_f64() })
}

/// `s(l) = l / (2 sinh(λl/2))`, so that the bin variance is `1/λ² - s²`.
fn sinh_ratio<T: Real>(rate: T, l: T) -> T {
    let x = rate * l * lit(0.5);
    if x < lit(1e-8) {
        return rate.recip();
    }
    l / (lit::<T>(2.0) * x.sinh())
}

/// `s(l* + δ) - s(l*)` without cancellation.
fn delta_sinh_ratio<T: Real>(rate: T, ls: T, d: T) -> T {
    let two = lit::<T>(2.0);
    let s0 = two * (rate * ls * lit(0.5)).sinh();
    let q = (rate * d * lit(0.25)).sinh();
    let ds = two * s0 * q * q + two * (rate * ls * lit(0.5)).cosh() * (rate * d * lit(0.5)).sinh();
    (d * s0 - ls * ds) / (s0 * (s0 + ds))
}

/// Equally long bins `[k l*, (k+1) l*]`; interior edges `l*, 2l*, ..., K l*`.
///
/// The last bin `[K l*, ∞)` only closes the partition; certify edges
/// `1 ..= K-1` with [`certify_infinite`].
pub fn infinite_equilibrium<T: Real>(rate: T, bias: T, k: usize) -> Result<Partition<T>> {
    if k == 0 {
        return Err(Error::UnsupportedBins(0));
    }
    let ls = fixed_point_length(rate, bias)?;
    let edges: Vec<T> = (1..=k).map(|i| ls * T::from_usize(i).unwrap()).collect();
    Partition::from_interior(SourceModel::exponential(rate)?, bias, &edges)
}

pub const DEFAULT_DEPTH: usize = 64;

/// Certificate of the truncated infinite equilibrium on edges `1 ..= K-1`.
pub fn certify_infinite<T: Real>(
    rate: T,
    bias: T,
    k: usize,
    tol: T,
) -> Result<crate::equilibrium::EquilibriumCertificate<T>> {
    let p = infinite_equilibrium(rate, bias, k)?;
    if k < 2 {
        return Ok(crate::equilibrium::EquilibriumCertificate {
            residuals: vec![],
            max_abs_residual: T::zero(),
            tolerance: tol,
            verdict: true,
            first_edge: 1,
        });
    }
    crate::equilibrium::certify_window(&p, 1, k - 1, tol)
}

/// `J^{d,∞} = 1/λ² - (l*)² / (e^{λl*} + e^{-λl*} - 2)`.
pub fn decoder_cost_infinite<T: Real>(rate: T, bias: T) -> Result<T> {
    let ls = fixed_point_length(rate, bias)?;
    let s = sinh_ratio(rate, ls);
    Ok((rate * rate).recip() - s * s)
}

/// One rung of the equilibrium cost ladder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostRung<T> {
    pub bins: usize,
    /// `J^{d,N}` summed over the bins of the constructed partition.
    pub decoder_cost: T,
    pub encoder_cost: T,
    /// `J^{d,N} - J^{d,∞}`, from the deviation form.
    pub excess: T,
    /// `J^{d,N} - J^{d,N+1}`, from the deviation form.
    pub gap_to_next: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostLadder<T> {
    pub infinite_cost: T,
    pub rungs: Vec<CostRung<T>>,
}

/// Costs of the `N`-bin equilibria for `N = 1 ..= n_max` (`b > 0`).
///
/// The `(N+1)`-bin equilibrium is the `N`-bin one with a new first bin of
/// length `L_N` prepended, so with `q = e^{-λ L_N}`
/// `J^{N+1} - J^∞ = (1 - q)(V(L_N) - V(l*)) + q (J^N - J^∞)`. Both terms are
/// evaluated from deviations, so excesses and gaps stay resolved long after
/// the plain totals agree to every printed digit.
pub fn cost_ladder<T: Real>(rate: T, bias: T, n_max: usize) -> Result<CostLadder<T>> {
    let ls = fixed_point_length(rate, bias)?;
    let infinite_cost = decoder_cost_infinite(rate, bias)?;
    let c = lit::<T>(2.0) / rate + lit::<T>(2.0) * bias;
    let l1 = solve_g(c, rate)?.ok_or_else(|| Error::domain("cost_ladder", "no two-bin solution"))?;
    let devs = tail_deviations(rate, ls, Some(l1), n_max)?;
    let s_star = sinh_ratio(rate, ls);
    let mut excess = s_star * s_star;
    let mut rungs = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let d = devs[n - 1];
        let ds = delta_sinh_ratio(rate, ls, d);
        // V(L_N) - V(l*) = s*^2 - s(L_N)^2
        let a = -ds * (ds + lit::<T>(2.0) * s_star);
        let one_minus_q = -(-rate * (ls + d)).exp_m1();
        let gap = one_minus_q * (excess - a);
        let cost = crate::equilibrium::decoder_cost(&solve_n_bins(rate, bias, n)?)?;
        rungs.push(CostRung {
            bins: n,
            decoder_cost: cost.decoder_cost,
            encoder_cost: cost.encoder_cost,
            excess,
            gap_to_next: gap,
        });
        excess = excess - gap;
    }
    Ok(CostLadder { infinite_cost, rungs })
}
