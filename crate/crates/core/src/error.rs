use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("invalid bracket [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    InvalidBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("interval [{lo}, {hi}] has zero probability under the source")]
    ZeroProbability { lo: f64, hi: f64 },

    #[error("bin {bin} collapsed: {detail}")]
    BinCollapse { bin: usize, detail: String },

    #[error("no informative equilibrium: bias {bias} is at or below the threshold {threshold}")]
    NoInformativeEquilibrium { bias: f64, threshold: f64 },

    #[error("edges out of order at edge {edge} during iteration {iteration}")]
    EdgeOrdering { iteration: usize, edge: usize },

    #[error("no convergence after {iterations} iterations (last change {last_change})")]
    NonConvergence { iterations: usize, last_change: f64 },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("unsupported bin count {0}")]
    UnsupportedBins(usize),
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain { op, detail: detail.into() }
    }

    /// True for the outcomes that mean "no equilibrium of this shape".
    pub fn is_nonexistence(&self) -> bool {
        matches!(
            self,
            Error::BinCollapse { .. } | Error::NoInformativeEquilibrium { .. }
        )
    }
}
