//! Equilibria for a Gaussian source N(μ, σ²).

use crate::equilibrium::{best_response_map, certify, Partition};
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::sources::SourceModel;
use crate::special_fn::{
    expand_bracket_up, find_root_with, mills_ratio, std_normal_cdf, std_normal_pdf, Bracket,
    RootOptions,
};

/// `f(c) = 2c - φ(c)/(1-Φ(c)) + φ(c)/Φ(c)`; the two-bin edge solves
/// `f(c) = 2b/σ` with `c = (m_1 - μ)/σ`.
pub fn f_two_bin<T: Real>(c: T) -> T {
    lit::<T>(2.0) * c - mills_ratio(c) + mills_ratio(-c)
}

/// Central difference of [`f_two_bin`].
pub fn f_prime_numeric<T: Real>(c: T, step: T) -> T {
    (f_two_bin(c + step) - f_two_bin(c - step)) / (lit::<T>(2.0) * step)
}

/// Smallest numerical derivative of `f` over `grid`.
pub fn f_derivative_floor_check<T: Real>(grid: &[T]) -> T {
    let step = lit::<T>(1e-5);
    grid.iter()
        .map(|&c| f_prime_numeric(c, step))
        .fold(T::infinity(), |m, v| m.min(v))
}

/// Interior maximum of `c φ(c)/Φ(c)` over `c > 0`, as `(c*, value)`.
pub fn mills_product_peak<T: Real>() -> Result<(T, T)> {
    // derivative vanishes where 1 - c^2 - c φ(c)/Φ(c) = 0
    let f = |c: T| T::one() - c * c - c * std_normal_pdf(c) / std_normal_cdf(c);
    let br = Bracket::new(f, lit(0.1), lit(2.0))?;
    let c = find_root_with(f, &br, RootOptions { xtol: lit(1e-15), ..RootOptions::default() })?;
    Ok((c, c * std_normal_pdf(c) / std_normal_cdf(c)))
}

/// Root of `f(c) = t`; odd symmetry handles `t < 0`.
pub fn two_bin_normalized_edge<T: Real>(t: T) -> Result<T> {
    if !t.is_finite() {
        return Err(Error::domain("two_bin_normalized_edge", format!("target {t}")));
    }
    if t == T::zero() {
        return Ok(T::zero());
    }
    if t < T::zero() {
        return two_bin_normalized_edge(-t).map(|c| -c);
    }
    let f = |c: T| f_two_bin(c) - t;
    let br = expand_bracket_up(f, T::zero(), T::one(), 200)?;
    find_root_with(f, &br, RootOptions { xtol: T::min_positive_value(), ..RootOptions::default() })
}

fn gaussian<T: Real>(mean: T, std: T) -> Result<SourceModel<T>> {
    SourceModel::gaussian(mean, std)
}

/// The two-bin equilibrium, which exists for every bias.
pub fn solve_two_bin_gauss<T: Real>(mean: T, std: T, bias: T) -> Result<Partition<T>> {
    let src = gaussian(mean, std)?;
    let c = two_bin_normalized_edge(lit::<T>(2.0) * bias / std)?;
    Partition::from_interior(src, bias, &[mean + std * c])
}

fn floor_tolerant<T: Real>(x: T) -> T {
    let n = x.round();
    if (x - n).abs() <= lit::<T>(8.0) * T::epsilon() * x.abs().max(T::one()) {
        n
    } else {
        x.floor()
    }
}

/// `floor(σ / (2|b|))`: most bins on the half line against the bias.
pub fn half_line_bin_bound<T: Real>(std: T, bias: T) -> Result<usize> {
    if bias == T::zero() || !bias.is_finite() {
        return Err(Error::domain("half_line_bin_bound", "bias must be nonzero"));
    }
    Ok(floor_tolerant(std / (lit::<T>(2.0) * bias.abs())).to_usize().unwrap_or(usize::MAX))
}

/// Limit `2|b|` of bin lengths far from the mean.
pub fn asymptotic_bin_length<T: Real>(bias: T) -> Result<T> {
    if bias == T::zero() || !bias.is_finite() {
        return Err(Error::domain("asymptotic_bin_length", "bias must be nonzero"));
    }
    Ok(lit::<T>(2.0) * bias.abs())
}

/// Iteration settings for the damped map `m <- (1-θ) m + θ T(m)`.
#[derive(Debug, Clone, Copy)]
pub struct FixedPointOptions<T> {
    pub damping: T,
    pub max_iter: usize,
    pub tol: T,
}

impl<T: Real> Default for FixedPointOptions<T> {
    fn default() -> Self {
        FixedPointOptions { damping: lit(0.5), max_iter: 100_000, tol: lit(1e-10) }
    }
}

/// Truncation of the infinite-bin equilibrium to `K` edges.
///
/// For `b > 0` the anchor is the left-most edge and edges grow to the right;
/// for `b < 0` it is the right-most edge and edges grow to the left.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedLadder<T> {
    pub anchor_edge: T,
    pub lengths: Vec<T>,
    pub margin: usize,
    pub bias: T,
}

impl<T: Real> TruncatedLadder<T> {
    /// Equal spacing `max(2|b|, σ/4)` from the two-bin edge.
    pub fn initial(mean: T, std: T, bias: T, k: usize, margin: usize) -> Result<Self> {
        if bias == T::zero() {
            return Err(Error::domain("TruncatedLadder", "bias must be nonzero"));
        }
        if k < 2 || margin >= k {
            return Err(Error::domain("TruncatedLadder", format!("need K >= 2 and margin < K (K={k}, margin={margin})")));
        }
        let two_bin = solve_two_bin_gauss(mean, std, bias)?;
        let w = (lit::<T>(2.0) * bias.abs()).max(std * lit(0.25));
        Ok(TruncatedLadder {
            anchor_edge: two_bin.interior_edges()[0],
            lengths: vec![w; k - 1],
            margin,
            bias,
        })
    }

    pub fn k(&self) -> usize {
        self.lengths.len() + 1
    }

    /// Edges in the orientation where they grow away from the anchor.
    fn oriented_edges(&self) -> Vec<T> {
        let mut e = Vec::with_capacity(self.k());
        let mut m = self.anchor_edge;
        e.push(m);
        let dir = if self.bias > T::zero() { T::one() } else { -T::one() };
        for &l in &self.lengths {
            m = m + dir * l;
            e.push(m);
        }
        e
    }

    /// Edges in increasing order.
    pub fn edges(&self) -> Vec<T> {
        let mut e = self.oriented_edges();
        if self.bias < T::zero() {
            e.reverse();
        }
        e
    }

    /// The ladder as a partition with infinite end bins.
    pub fn partition(&self, src: &SourceModel<T>) -> Result<Partition<T>> {
        Partition::from_interior(*src, self.bias, &self.edges())
    }

    /// Certified edge window `first..=last` of [`Self::partition`].
    pub fn certified_edges(&self) -> (usize, usize) {
        let k = self.k();
        let n = k - self.margin;
        if self.bias > T::zero() {
            (1, n)
        } else {
            (self.margin + 1, k)
        }
    }

    /// Whether the anchor and lengths lie in the existence boxes.
    pub fn in_boxes(&self, mean: T, std: T) -> bool {
        let b = self.bias.abs();
        let two = lit::<T>(2.0);
        let n = floor_tolerant(std / (two * b));
        // reflect b < 0 onto b > 0
        let anchor = if self.bias > T::zero() { self.anchor_edge } else { two * mean - self.anchor_edge };
        let lo = mean - n * (two * std - two * b) - two * std;
        let hi = mean + two * b + std;
        anchor >= lo
            && anchor <= hi
            && self.lengths.iter().all(|&l| l >= two * b && l <= two * b + two * std)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LadderReport<T> {
    pub iterations: usize,
    pub converged: bool,
    pub last_change: T,
    /// Residuals on the certified edges, in increasing edge order.
    pub residuals: Vec<T>,
    pub max_abs_residual: T,
}

/// Map T on the oriented edge vector of a `b > 0` problem.
///
/// The left bin is infinite; the bin past the last edge is closed with
/// length `2b`.
fn ladder_map<T: Real>(src: &SourceModel<T>, b: T, e: &[T]) -> Result<Vec<T>> {
    let k = e.len();
    let half = lit::<T>(0.5);
    let mut u = Vec::with_capacity(k + 1);
    u.push(src.truncated_mean(T::neg_infinity(), e[0])?);
    for w in e.windows(2) {
        u.push(src.truncated_mean(w[0], w[1])?);
    }
    u.push(src.truncated_mean(e[k - 1], e[k - 1] + lit::<T>(2.0) * b)?);
    Ok(u.windows(2).map(|w| (w[0] + w[1]) * half + b).collect())
}

/// Damped iteration of the map T on a truncated ladder.
///
/// Non-convergence is reported in the returned report, not as an error.
pub fn iterate_map_t<T: Real>(
    ladder: &TruncatedLadder<T>,
    src: &SourceModel<T>,
    opts: FixedPointOptions<T>,
) -> Result<(TruncatedLadder<T>, LadderReport<T>)> {
    let SourceModel::Gaussian { mean, .. } = *src else {
        return Err(Error::domain("iterate_map_t", "ladder iteration needs a Gaussian source"));
    };
    if !(opts.damping > T::zero() && opts.damping <= T::one()) {
        return Err(Error::domain("iterate_map_t", "damping must lie in (0, 1]"));
    }
    let b = ladder.bias.abs();
    let two = lit::<T>(2.0);
    // work in the orientation where the bias is positive
    let flip = ladder.bias < T::zero();
    let refl = |x: T| if flip { two * mean - x } else { x };
    let mut e: Vec<T> = ladder.oriented_edges().into_iter().map(refl).collect();
    check_order(&e, 0)?;

    let theta = opts.damping;
    let mut converged = false;
    let mut change = T::infinity();
    let mut iterations = 0;
    while iterations < opts.max_iter {
        iterations += 1;
        let t = ladder_map(src, b, &e)?;
        change = T::zero();
        for (m, tm) in e.iter_mut().zip(t) {
            let next = (T::one() - theta) * *m + theta * tm;
            change = change.max((next - *m).abs());
            *m = next;
        }
        check_order(&e, iterations)?;
        if change <= opts.tol {
            converged = true;
            break;
        }
    }

    let t = ladder_map(src, b, &e)?;
    let n_cert = e.len() - ladder.margin;
    let mut residuals: Vec<T> = e.iter().zip(&t).take(n_cert).map(|(&m, &tm)| m - tm).collect();
    if flip {
        // reflection negates residuals; report them in increasing edge order
        residuals = residuals.into_iter().rev().map(|r| -r).collect();
    }
    let max_abs_residual = residuals.iter().fold(T::zero(), |m, r| m.max(r.abs()));
    let out = TruncatedLadder {
        anchor_edge: refl(e[0]),
        lengths: e.windows(2).map(|w| w[1] - w[0]).collect(),
        margin: ladder.margin,
        bias: ladder.bias,
    };
    Ok((out, LadderReport { iterations, converged, last_change: change, residuals, max_abs_residual }))
}

fn check_order<T: Real>(e: &[T], iteration: usize) -> Result<()> {
    match e.windows(2).position(|w| !(w[0] < w[1])) {
        Some(i) => Err(Error::EdgeOrdering { iteration, edge: i + 2 }),
        None if e.iter().any(|v| !v.is_finite()) => Err(Error::EdgeOrdering { iteration, edge: 1 }),
        None => Ok(()),
    }
}

/// Default start for an `n`-bin solve: equal spacing from the two-bin edge,
/// extending in the direction of the bias.
pub fn default_init<T: Real>(mean: T, std: T, bias: T, n: usize) -> Result<Partition<T>> {
    let src = gaussian(mean, std)?;
    if n <= 1 {
        return Ok(Partition::single_bin(src, bias));
    }
    let anchor = solve_two_bin_gauss(mean, std, bias)?.interior_edges()[0];
    let w = (lit::<T>(2.0) * bias.abs()).max(std * lit(0.25));
    let mut e: Vec<T> = (0..n - 1)
        .map(|i| {
            let off = w * T::from_usize(i).unwrap();
            if bias < T::zero() { anchor - off } else { anchor + off }
        })
        .collect();
    e.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Partition::from_interior(src, bias, &e)
}

/// `n`-bin equilibrium by damped fixed-point iteration on the interior edges.
pub fn solve_n_bins_gauss<T: Real>(
    mean: T,
    std: T,
    bias: T,
    n: usize,
    init: Option<&Partition<T>>,
    opts: FixedPointOptions<T>,
) -> Result<Partition<T>> {
    if n == 0 {
        return Err(Error::UnsupportedBins(0));
    }
    let src = gaussian(mean, std)?;
    if n == 1 {
        return Ok(Partition::single_bin(src, bias));
    }
    let mut p = match init {
        Some(p) => {
            if p.bins() != n {
                return Err(Error::domain("solve_n_bins_gauss", "initial partition has the wrong bin count"));
            }
            Partition::new(src, bias, p.edges().to_vec())?
        }
        None => default_init(mean, std, bias, n)?,
    };
    let theta = opts.damping;
    let mut change = T::infinity();
    for it in 1..=opts.max_iter {
        let t = best_response_map(&p)?;
        change = T::zero();
        let next: Vec<T> = p
            .interior_edges()
            .iter()
            .zip(t)
            .map(|(&m, tm)| {
                let v = (T::one() - theta) * m + theta * tm;
                change = change.max((v - m).abs());
                v
            })
            .collect();
        check_order(&next, it)?;
        p = Partition::from_interior(src, bias, &next)
            .map_err(|_| Error::EdgeOrdering { iteration: it, edge: 1 })?;
        if change <= opts.tol {
            let cert = certify(&p, T::certify_tol().max(opts.tol * lit(10.0)))?;
            if cert.verdict {
                return Ok(p);
            }
        }
    }
    Err(Error::NonConvergence { iterations: opts.max_iter, last_change: change.as_f64() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_properties() {
        assert_eq!(f_two_bin(0.0f64), 0.0);
        let c = two_bin_normalized_edge(2.0f64).unwrap();
        assert!((c - 2.312404578516069344108).abs() < 1e-13, "{c}");
        let g: Vec<f64> = (-600..=600).map(|i| i as f64 * 0.01).collect();
        assert!(f_derivative_floor_check(&g) > 0.07);
    }

    #[test]
    fn peak_location() {
        let (c, v) = mills_product_peak::<f64>().unwrap();
        assert!((c - 0.839924).abs() < 1e-5, "{c}");
        assert!((v - 0.294528219011383).abs() < 1e-12);
    }

    #[test]
    fn two_bin_signs() {
        let p = solve_two_bin_gauss(0.0f64, 1.0, 0.0).unwrap();
        assert_eq!(p.interior_edges()[0], 0.0);
        assert!(solve_two_bin_gauss(0.0f64, 1.0, 0.7).unwrap().interior_edges()[0] > 0.0);
        assert!(solve_two_bin_gauss(0.0f64, 1.0, -0.7).unwrap().interior_edges()[0] < 0.0);
        let p = solve_two_bin_gauss(3.0f64, 2.0, 5.0).unwrap();
        assert!(certify(&p, 1e-9).unwrap().verdict);
    }

    #[test]
    fn bounds() {
        assert_eq!(half_line_bin_bound(1.0f64, -0.25).unwrap(), 2);
        assert_eq!(half_line_bin_bound(1.0f64, 0.6).unwrap(), 0);
        assert_eq!(half_line_bin_bound(2.0f64, 0.1).unwrap(), 10);
        assert!(half_line_bin_bound(1.0f64, 0.0).is_err());
        assert_eq!(asymptotic_bin_length(-0.3f64).unwrap(), 0.6);
    }

    #[test]
    fn n_bin_solves() {
        let a = solve_n_bins_gauss(0.0f64, 1.0, 0.3, 2, None, FixedPointOptions::default()).unwrap();
        let b = solve_two_bin_gauss(0.0f64, 1.0, 0.3).unwrap();
        assert!((a.interior_edges()[0] - b.interior_edges()[0]).abs() < 1e-9);
        let p = solve_n_bins_gauss(0.0f64, 1.0, -0.2, 4, None, FixedPointOptions::default()).unwrap();
        assert!(certify(&p, 1e-9).unwrap().verdict);
    }

    #[test]
    fn ladder_converges_small() {
        let src = SourceModel::gaussian(0.0f64, 1.0).unwrap();
        let l0 = TruncatedLadder::initial(0.0, 1.0, 0.5, 40, 5).unwrap();
        let (l, rep) = iterate_map_t(&l0, &src, FixedPointOptions::default()).unwrap();
        assert!(rep.converged && rep.max_abs_residual <= 1e-6, "{rep:?}");
        assert!(l.in_boxes(0.0, 1.0));
        let l0 = TruncatedLadder::initial(0.0, 1.0, -0.5, 40, 5).unwrap();
        let (lm, rep) = iterate_map_t(&l0, &src, FixedPointOptions::default()).unwrap();
        assert!(rep.converged && rep.max_abs_residual <= 1e-6);
        for (a, b) in l.edges().iter().zip(lm.edges().iter().rev()) {
            assert!((a + b).abs() < 1e-9);
        }
    }
}
