use cheaptalk::equilibrium::{decoder_best_response, CostReport, EquilibriumCertificate, Partition};
use cheaptalk::sources::SourceModel;
use serde::ser::{Serialize, Serializer};
use serde_json::value::RawValue;
use serde_json::Value;
use std::io::Write;
use std::path::Path;

/// 17 significant digits; round-trips every f64.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{:.16e}", x)
    }
}

/// A float serialized as a bare JSON number, or as "inf"/"-inf"/"nan".
#[derive(Debug, Clone, Copy)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            let raw = RawValue::from_string(fmt_num(self.0)).map_err(serde::ser::Error::custom)?;
            raw.serialize(s)
        } else {
            s.serialize_str(&fmt_num(self.0))
        }
    }
}

pub fn nums(v: &[f64]) -> Vec<Num> {
    v.iter().copied().map(Num).collect()
}

pub fn join(v: &[f64]) -> String {
    v.iter().map(|&x| fmt_num(x)).collect::<Vec<_>>().join(";")
}

#[derive(serde::Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SourceDoc {
    Exponential { rate: Num },
    Gaussian { mean: Num, std: Num },
}

impl From<&SourceModel<f64>> for SourceDoc {
    fn from(s: &SourceModel<f64>) -> Self {
        match *s {
            SourceModel::Exponential { rate } => SourceDoc::Exponential { rate: Num(rate) },
            SourceModel::Gaussian { mean, std } => SourceDoc::Gaussian { mean: Num(mean), std: Num(std) },
        }
    }
}

#[derive(serde::Serialize)]
pub struct CertificateDoc {
    pub residuals: Vec<Num>,
    pub max_abs_residual: Num,
    pub tolerance: Num,
    pub verdict: bool,
    /// First and last interior edge covered by the residuals.
    pub certified_edges: [usize; 2],
}

#[derive(serde::Serialize)]
pub struct EquilibriumDoc {
    pub bins: usize,
    pub edges: Vec<Num>,
    pub centroids: Vec<Num>,
    pub lengths: Vec<Num>,
    pub certificate: CertificateDoc,
}

#[derive(serde::Serialize)]
pub struct CostsDoc {
    pub decoder: Num,
    pub encoder: Num,
}

#[derive(serde::Serialize)]
pub struct MetaDoc {
    pub tool_version: &'static str,
    pub runtime_ms: Num,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(serde::Serialize)]
pub struct ResultDoc {
    pub source: SourceDoc,
    pub bias: Num,
    pub solver: String,
    pub equilibrium: EquilibriumDoc,
    pub costs: CostsDoc,
    pub meta: MetaDoc,
}

impl ResultDoc {
    pub fn build(
        p: &Partition<f64>,
        solver: &str,
        cert: &EquilibriumCertificate<f64>,
        cost: &CostReport<f64>,
        runtime_ms: f64,
        note: Option<String>,
    ) -> cheaptalk::Result<Self> {
        let u = decoder_best_response(p)?;
        let last = cert.first_edge + cert.residuals.len().max(1) - 1;
        Ok(ResultDoc {
            source: p.source().into(),
            bias: Num(p.bias()),
            solver: solver.to_string(),
            equilibrium: EquilibriumDoc {
                bins: p.bins(),
                edges: nums(p.edges()),
                centroids: nums(u.centroids()),
                lengths: nums(&p.lengths()),
                certificate: CertificateDoc {
                    residuals: nums(&cert.residuals),
                    max_abs_residual: Num(cert.max_abs_residual),
                    tolerance: Num(cert.tolerance),
                    verdict: cert.verdict,
                    certified_edges: [cert.first_edge, last],
                },
            },
            costs: CostsDoc { decoder: Num(cost.decoder_cost), encoder: Num(cost.encoder_cost) },
            meta: MetaDoc { tool_version: env!("CARGO_PKG_VERSION"), runtime_ms: Num(runtime_ms), note },
        })
    }
}

/// Parsed back from a result document.
#[derive(Debug)]
pub struct ParsedResult {
    pub partition: Partition<f64>,
    pub tolerance: f64,
    pub certified_edges: Option<(usize, usize)>,
}

fn num_of(v: &Value, what: &str) -> Result<f64, String> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| format!("{what}: not a float")),
        Value::String(s) => match s.as_str() {
            "inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            _ => Err(format!("{what}: unexpected string {s:?}")),
        },
        _ => Err(format!("{what}: expected a number")),
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, String> {
    v.get(key).ok_or_else(|| format!("missing field `{key}`"))
}

pub fn parse_result(text: &str) -> Result<ParsedResult, String> {
    let doc: Value = serde_json::from_str(text).map_err(|e| format!("invalid JSON: {e}"))?;
    let src = field(&doc, "source")?;
    let source = match field(src, "kind")?.as_str() {
        Some("exponential") => SourceModel::exponential(num_of(field(src, "rate")?, "rate")?),
        Some("gaussian") => SourceModel::gaussian(
            num_of(field(src, "mean")?, "mean")?,
            num_of(field(src, "std")?, "std")?,
        ),
        _ => return Err("source.kind must be exponential or gaussian".into()),
    }
    .map_err(|e| e.to_string())?;
    let bias = num_of(field(&doc, "bias")?, "bias")?;
    let eq = field(&doc, "equilibrium")?;
    let edges = field(eq, "edges")?
        .as_array()
        .ok_or("equilibrium.edges must be an array")?
        .iter()
        .map(|v| num_of(v, "edge"))
        .collect::<Result<Vec<_>, _>>()?;
    let partition = Partition::new(source, bias, edges).map_err(|e| e.to_string())?;
    let cert = field(eq, "certificate")?;
    let tolerance = num_of(field(cert, "tolerance")?, "tolerance")?;
    let certified_edges = match cert.get("certified_edges") {
        Some(Value::Array(a)) if a.len() == 2 => {
            let f = a[0].as_u64().ok_or("certified_edges must hold integers")? as usize;
            let l = a[1].as_u64().ok_or("certified_edges must hold integers")? as usize;
            Some((f, l))
        }
        Some(_) => return Err("certified_edges must be a pair".into()),
        None => None,
    };
    Ok(ParsedResult { partition, tolerance, certified_edges })
}

pub fn write_output(path: Option<&Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}
