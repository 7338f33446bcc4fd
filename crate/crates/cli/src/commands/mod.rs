pub mod dynamics;
pub mod solve;
pub mod sweep;
pub mod verify;

use crate::args::{SourceArgs, SourceKind};
use cheaptalk::sources::SourceModel;
use cheaptalk::Error;

/// Command failure, carrying the documented exit status.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, unreadable or malformed input: exit 1.
    Usage(String),
    /// The solver reports that no such equilibrium exists, or did not
    /// produce a certified one: exit 2.
    Nonexistence(String),
    /// A result document failed re-verification: exit 3.
    Verification(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Nonexistence(_) => 2,
            Failure::Verification(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Nonexistence(m) | Failure::Verification(m) => m,
        }
    }
}

/// Maps solver errors onto exit statuses.
pub fn solver_failure(e: Error) -> Failure {
    match e {
        Error::UnsupportedBins(_) | Error::InvalidPartition(_) => Failure::Usage(e.to_string()),
        _ => Failure::Nonexistence(e.to_string()),
    }
}

pub fn source_from(a: &SourceArgs) -> Result<SourceModel<f64>, Failure> {
    let need = |v: Option<f64>, name: &str| {
        v.ok_or_else(|| Failure::Usage(format!("--{name} is required for this source")))
    };
    let src = match a.source {
        SourceKind::Exp => SourceModel::exponential(need(a.rate, "rate")?),
        SourceKind::Gauss => SourceModel::gaussian(need(a.mean, "mean")?, need(a.std, "std")?),
    };
    src.map_err(|e| Failure::Usage(e.to_string()))
}

pub fn io_failure(e: std::io::Error) -> Failure {
    Failure::Usage(format!("i/o error: {e}"))
}

pub fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Failure::Usage(format!("csv: {e}"));
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(r).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::Usage(e.to_string()))
}

pub const GAUSS_ZERO_BIAS_NOTE: &str =
    "bias 0: classical quantizer of a normal source, not a strategic equilibrium";
