//! Best-response dynamics: Lloyd's Method I and the damped fixed-point map.
//!
//! Both engines repeat `m <- (1-θ) m + θ T(m)` where `T` sends the edges to
//! the nearest-neighbor edges of the current centroids; Lloyd's method is
//! `θ = 1`. Collapse and non-convergence are outcomes, not errors.

use crate::equilibrium::{decoder_best_response, nearest_neighbor_edges, Partition};
use crate::error::{Error, Result};
use crate::scalar::{lit, Real};
use crate::sources::SourceModel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const MIN_BIN_PROB: f64 = 1e-14;
const MIN_BIN_LEN: f64 = 1e-12;
const KEEP_ALL: usize = 1000;
const THIN_EVERY: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Converged,
    Collapsed { bin: usize, iteration: usize },
    MaxIter,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method<T> {
    Lloyd,
    FixedPoint { damping: T },
}

impl<T: Real> Method<T> {
    fn damping(&self) -> T {
        match *self {
            Method::Lloyd => T::one(),
            Method::FixedPoint { damping } => damping,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace<T> {
    /// Snapshots: the initial partition, then every iterate up to 1000 and
    /// every 10th after that.
    pub iterates: Vec<Partition<T>>,
    /// Iteration number of each snapshot.
    pub iterate_index: Vec<usize>,
    /// `max_k |m_k - T(m)_k|` at the start of every iteration.
    pub residual_history: Vec<T>,
    pub outcome: Outcome,
    /// Last valid partition reached.
    pub final_partition: Partition<T>,
}

impl<T: Real> IterationTrace<T> {
    pub fn iterations(&self) -> usize {
        self.residual_history.len()
    }
}

/// Why the next edges do not form a usable partition, as a 1-based bin.
fn collapsed_bin<T: Real>(src: &SourceModel<T>, edges: &[T]) -> Option<usize> {
    let (lo, hi) = src.support();
    let mut full = Vec::with_capacity(edges.len() + 2);
    full.push(lo);
    full.extend_from_slice(edges);
    full.push(hi);
    for (k, w) in full.windows(2).enumerate() {
        if w[0].is_nan() || w[1].is_nan() || !(w[0] < w[1]) {
            return Some(k + 1);
        }
        if w[0].is_finite() && w[1].is_finite() && w[1] - w[0] < lit(MIN_BIN_LEN) {
            return Some(k + 1);
        }
        if src.interval_prob(w[0], w[1]) < lit(MIN_BIN_PROB) {
            return Some(k + 1);
        }
    }
    None
}

fn run<T: Real>(
    src: &SourceModel<T>,
    bias: T,
    init: &Partition<T>,
    damping: T,
    max_iter: usize,
    tol: T,
) -> Result<IterationTrace<T>> {
    if !(damping > T::zero() && damping <= T::one()) {
        return Err(Error::domain("dynamics", format!("damping {damping} outside (0, 1]")));
    }
    let mut p = Partition::new(*src, bias, init.edges().to_vec())?;
    let mut trace = IterationTrace {
        iterates: vec![p.clone()],
        iterate_index: vec![0],
        residual_history: Vec::new(),
        outcome: Outcome::MaxIter,
        final_partition: p.clone(),
    };
    if let Some(bin) = collapsed_bin(src, p.interior_edges()) {
        trace.outcome = Outcome::Collapsed { bin, iteration: 0 };
        return Ok(trace);
    }
    for it in 1..=max_iter {
        let u = match decoder_best_response(&p) {
            Ok(u) => u,
            Err(Error::ZeroProbability { .. }) => {
                trace.outcome = Outcome::Collapsed { bin: 0, iteration: it };
                break;
            }
            Err(e) => return Err(e),
        };
        let t = nearest_neighbor_edges(u.centroids(), bias);
        let res = p
            .interior_edges()
            .iter()
            .zip(&t)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()));
        trace.residual_history.push(res);
        if res <= tol {
            trace.outcome = Outcome::Converged;
            break;
        }
        let next: Vec<T> = p
            .interior_edges()
            .iter()
            .zip(&t)
            .map(|(&m, &tm)| (T::one() - damping) * m + damping * tm)
            .collect();
        if let Some(bin) = collapsed_bin(src, &next) {
            trace.outcome = Outcome::Collapsed { bin, iteration: it };
            break;
        }
        p = Partition::from_interior(*src, bias, &next)?;
        if it <= KEEP_ALL || it % THIN_EVERY == 0 {
            trace.iterates.push(p.clone());
            trace.iterate_index.push(it);
        }
    }
    trace.final_partition = p;
    Ok(trace)
}

/// Lloyd's Method I: alternate centroid and nearest-neighbor updates.
pub fn lloyd_method_i<T: Real>(
    src: &SourceModel<T>,
    bias: T,
    init: &Partition<T>,
    max_iter: usize,
    tol: T,
) -> Result<IterationTrace<T>> {
    run(src, bias, init, T::one(), max_iter, tol)
}

/// Damped iteration of the combined best-response map.
pub fn fixed_point_iterate<T: Real>(
    src: &SourceModel<T>,
    bias: T,
    init: &Partition<T>,
    damping: T,
    max_iter: usize,
    tol: T,
) -> Result<IterationTrace<T>> {
    run(src, bias, init, damping, max_iter, tol)
}

pub fn iterate<T: Real>(
    method: Method<T>,
    src: &SourceModel<T>,
    bias: T,
    init: &Partition<T>,
    max_iter: usize,
    tol: T,
) -> Result<IterationTrace<T>> {
    run(src, bias, init, method.damping(), max_iter, tol)
}

/// `n` bins with interior edges drawn as sorted uniforms between the
/// source's 0.001 and 0.999 quantiles.
pub fn random_init<T: Real, R: Rng + ?Sized>(
    src: &SourceModel<T>,
    bias: T,
    n: usize,
    rng: &mut R,
) -> Result<Partition<T>> {
    if n == 0 {
        return Err(Error::UnsupportedBins(0));
    }
    let lo = src.quantile(lit(0.001))?;
    let hi = src.quantile(lit(0.999))?;
    loop {
        let mut e: Vec<T> = (0..n - 1)
            .map(|_| lo + (hi - lo) * T::lit(rng.gen::<f64>()))
            .collect();
        e.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if let Ok(p) = Partition::from_interior(*src, bias, &e) {
            return Ok(p);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasinSummary<T> {
    pub runs: usize,
    pub converged: usize,
    pub collapsed: usize,
    pub max_iter: usize,
    /// Distinct converged limits (interior edges), in order of first appearance.
    pub limits: Vec<Vec<T>>,
    pub cluster_sizes: Vec<usize>,
    /// Outcome of every run, by initialization index.
    pub outcomes: Vec<Outcome>,
}

impl<T: Real> BasinSummary<T> {
    pub fn fraction_converged(&self) -> f64 {
        self.converged as f64 / self.runs as f64
    }
}

/// Distance below which two converged limits count as the same equilibrium.
pub const CLUSTER_TOL: f64 = 1e-6;

/// Runs `method` from `n_inits` random starts and clusters the limits.
///
/// Run `i` draws its start from stream `i` of a ChaCha generator seeded
/// with `seed`, so results do not depend on thread scheduling.
#[allow(clippy::too_many_arguments)]
pub fn basin_probe<T: Real>(
    src: &SourceModel<T>,
    bias: T,
    n: usize,
    n_inits: usize,
    seed: u64,
    method: Method<T>,
    max_iter: usize,
    tol: T,
) -> Result<BasinSummary<T>> {
    if n_inits == 0 {
        return Err(Error::domain("basin_probe", "need at least one initialization"));
    }
    let traces: Vec<Result<IterationTrace<T>>> = (0..n_inits)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let init = random_init(src, bias, n, &mut rng)?;
            iterate(method, src, bias, &init, max_iter, tol)
        })
        .collect();
    let mut s = BasinSummary {
        runs: n_inits,
        converged: 0,
        collapsed: 0,
        max_iter: 0,
        limits: Vec::new(),
        cluster_sizes: Vec::new(),
        outcomes: Vec::with_capacity(n_inits),
    };
    for t in traces {
        let t = t?;
        s.outcomes.push(t.outcome);
        match t.outcome {
            Outcome::Converged => {
                s.converged += 1;
                let e = t.final_partition.interior_edges().to_vec();
                let hit = s.limits.iter().position(|c: &Vec<T>| {
                    c.iter().zip(&e).all(|(a, b)| (*a - *b).abs() <= lit::<T>(CLUSTER_TOL))
                });
                match hit {
                    Some(j) => s.cluster_sizes[j] += 1,
                    None => {
                        s.limits.push(e);
                        s.cluster_sizes.push(1);
                    }
                }
            }
            Outcome::Collapsed { .. } => s.collapsed += 1,
            Outcome::MaxIter => s.max_iter += 1,
        }
    }
    Ok(s)
}
