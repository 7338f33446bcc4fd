//! Partitions, best responses, certificates and costs.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sources::SourceModel;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Ordered bin edges `m_0 < m_1 < ... < m_N` over the source support.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition<T> {
    edges: Vec<T>,
    source: SourceModel<T>,
    bias: T,
}

impl<T: Real> Partition<T> {
    /// Builds a partition, adding the support endpoints if they are missing.
    pub fn new(source: SourceModel<T>, bias: T, edges: Vec<T>) -> Result<Self> {
        let (lo, hi) = source.support();
        let mut e = edges;
        if e.first() != Some(&lo) {
            e.insert(0, lo);
        }
        if e.last() != Some(&hi) {
            e.push(hi);
        }
        if !bias.is_finite() {
            return Err(Error::InvalidPartition(format!("bias {bias} not finite")));
        }
        for (k, w) in e.windows(2).enumerate() {
            if w[0].is_nan() || w[1].is_nan() || !(w[0] < w[1]) {
                return Err(Error::InvalidPartition(format!(
                    "edges not strictly increasing at bin {} ({} .. {})",
                    k + 1,
                    w[0],
                    w[1]
                )));
            }
        }
        let interior = &e[1..e.len() - 1];
        if interior.iter().any(|&m| !(m > lo && m < hi)) {
            return Err(Error::InvalidPartition(
                "interior edge outside the source support".into(),
            ));
        }
        Ok(Partition { edges: e, source, bias })
    }

    pub fn from_interior(source: SourceModel<T>, bias: T, interior: &[T]) -> Result<Self> {
        Self::new(source, bias, interior.to_vec())
    }

    /// The non-informative partition.
    pub fn single_bin(source: SourceModel<T>, bias: T) -> Self {
        let (lo, hi) = source.support();
        Partition { edges: vec![lo, hi], source, bias }
    }

    pub fn edges(&self) -> &[T] {
        &self.edges
    }

    pub fn interior_edges(&self) -> &[T] {
        &self.edges[1..self.edges.len() - 1]
    }

    pub fn bins(&self) -> usize {
        self.edges.len() - 1
    }

    pub fn source(&self) -> &SourceModel<T> {
        &self.source
    }

    pub fn bias(&self) -> T {
        self.bias
    }

    /// Bin lengths `l_k = m_k - m_{k-1}`; infinite for unbounded bins.
    pub fn lengths(&self) -> Vec<T> {
        self.edges.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Same edges under a different bias.
    pub fn with_bias(&self, bias: T) -> Self {
        Partition { bias, ..self.clone() }
    }
}

/// Decoder actions, one per bin.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionProfile<T> {
    centroids: Vec<T>,
}

impl<T: Real> ActionProfile<T> {
    pub fn new(centroids: Vec<T>) -> Result<Self> {
        if centroids.is_empty() || centroids.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidPartition(
                "centroids must be nonempty and strictly increasing".into(),
            ));
        }
        Ok(ActionProfile { centroids })
    }

    pub fn centroids(&self) -> &[T] {
        &self.centroids
    }
}

/// Nearest-neighbor residuals `r_k = m_k - (u_k + u_{k+1})/2 - b`.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumCertificate<T> {
    pub residuals: Vec<T>,
    pub max_abs_residual: T,
    pub tolerance: T,
    pub verdict: bool,
    /// Index `k` of the edge that `residuals[0]` belongs to.
    pub first_edge: usize,
}

impl<T: Real> EquilibriumCertificate<T> {
    fn from_residuals(residuals: Vec<T>, tolerance: T, first_edge: usize) -> Self {
        let max_abs_residual = residuals
            .iter()
            .fold(T::zero(), |m, r| if r.abs() > m || r.is_nan() { r.abs() } else { m });
        let verdict = max_abs_residual <= tolerance;
        EquilibriumCertificate { residuals, max_abs_residual, tolerance, verdict, first_edge }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinCost<T> {
    pub probability: T,
    pub variance: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostReport<T> {
    pub decoder_cost: T,
    pub encoder_cost: T,
    pub per_bin: Vec<BinCost<T>>,
}

/// Centroid of every bin.
pub fn decoder_best_response<T: Real>(p: &Partition<T>) -> Result<ActionProfile<T>> {
    let u = p
        .edges
        .windows(2)
        .map(|w| p.source.truncated_mean(w[0], w[1]))
        .collect::<Result<Vec<_>>>()?;
    Ok(ActionProfile { centroids: u })
}

/// Interior edges `(u_k + u_{k+1})/2 + b`, unchecked.
pub fn nearest_neighbor_edges<T: Real>(u: &[T], bias: T) -> Vec<T> {
    let half = T::lit(0.5);
    u.windows(2).map(|w| (w[0] + w[1]) * half + bias).collect()
}

/// Encoder response to the actions `u`.
///
/// Fails with [`Error::BinCollapse`] when the edges come out of order, leave
/// the support, or leave some `u_k` outside its bin.
pub fn encoder_best_response<T: Real>(
    u: &ActionProfile<T>,
    bias: T,
    source: &SourceModel<T>,
) -> Result<Partition<T>> {
    let (lo, hi) = source.support();
    let mut edges = vec![lo];
    edges.extend(nearest_neighbor_edges(&u.centroids, bias));
    edges.push(hi);
    for (k, w) in edges.windows(2).enumerate() {
        let uk = u.centroids[k];
        if !(w[0] < w[1]) {
            return Err(Error::BinCollapse {
                bin: k + 1,
                detail: format!("edges {} and {} out of order", w[0], w[1]),
            });
        }
        if !(uk > w[0] && uk < w[1]) {
            return Err(Error::BinCollapse {
                bin: k + 1,
                detail: format!("action {uk} outside its bin ({}, {})", w[0], w[1]),
            });
        }
    }
    Partition::new(*source, bias, edges).map_err(|e| Error::BinCollapse {
        bin: 1,
        detail: e.to_string(),
    })
}

/// The combined best-response map on interior edges.
pub fn best_response_map<T: Real>(p: &Partition<T>) -> Result<Vec<T>> {
    let u = decoder_best_response(p)?;
    Ok(nearest_neighbor_edges(&u.centroids, p.bias))
}

/// Residuals on every interior edge.
pub fn residuals<T: Real>(p: &Partition<T>) -> Result<Vec<T>> {
    let t = best_response_map(p)?;
    Ok(p.interior_edges().iter().zip(t).map(|(&m, tm)| m - tm).collect())
}

pub fn certify<T: Real>(p: &Partition<T>, tol: T) -> Result<EquilibriumCertificate<T>> {
    Ok(EquilibriumCertificate::from_residuals(residuals(p)?, tol, 1))
}

/// Certificate restricted to interior edges `first..=last` (1-based).
///
/// Only the bins adjacent to those edges are evaluated, so the rest of the
/// partition may be a truncation artifact.
pub fn certify_window<T: Real>(
    p: &Partition<T>,
    first: usize,
    last: usize,
    tol: T,
) -> Result<EquilibriumCertificate<T>> {
    let n_int = p.bins() - 1;
    if first < 1 || last > n_int || first > last {
        return Err(Error::InvalidPartition(format!(
            "window {first}..={last} outside interior edges 1..={n_int}"
        )));
    }
    let e = &p.edges;
    let half = T::lit(0.5);
    let mut res = Vec::with_capacity(last - first + 1);
    let mut u_left = p.source.truncated_mean(e[first - 1], e[first])?;
    for k in first..=last {
        let u_right = p.source.truncated_mean(e[k], e[k + 1])?;
        res.push(e[k] - (u_left + u_right) * half - p.bias);
        u_left = u_right;
    }
    Ok(EquilibriumCertificate::from_residuals(res, tol, first))
}

/// Expected squared decoding error, per bin and in total.
pub fn decoder_cost<T: Real>(p: &Partition<T>) -> Result<CostReport<T>> {
    let mut per_bin = Vec::with_capacity(p.bins());
    let mut total = T::zero();
    for w in p.edges.windows(2) {
        let probability = p.source.interval_prob(w[0], w[1]);
        let variance = p.source.truncated_variance(w[0], w[1])?;
        total = total + probability * variance;
        per_bin.push(BinCost { probability, variance });
    }
    Ok(CostReport {
        decoder_cost: total,
        encoder_cost: total + p.bias * p.bias,
        per_bin,
    })
}

/// Sample estimate of the decoder cost and its standard error.
pub fn monte_carlo_cost<T: Real>(p: &Partition<T>, n: usize, seed: u64) -> Result<(T, T)> {
    if n == 0 {
        return Err(Error::domain("monte_carlo_cost", "need at least one sample"));
    }
    let u: Vec<f64> = decoder_best_response(p)?
        .centroids
        .iter()
        .map(|v| v.as_f64())
        .collect();
    let cuts: Vec<f64> = p.interior_edges().iter().map(|v| v.as_f64()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut sum, mut sum_sq) = (0.0f64, 0.0f64);
    for _ in 0..n {
        let m = p.source.sample(&mut rng);
        let k = cuts.partition_point(|&c| c <= m);
        let e = (m - u[k]) * (m - u[k]);
        sum += e;
        sum_sq += e * e;
    }
    let nf = n as f64;
    let mean = sum / nf;
    let var = if n > 1 { ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0) } else { 0.0 };
    Ok((T::lit(mean), T::lit((var / nf).sqrt())))
}
