use super::{io_failure, solver_failure, source_from, Failure};
use crate::args::{DynamicsArgs, InitKind, MethodArg};
use crate::output::{nums, write_output, Num};
use cheaptalk::dynamics::{basin_probe, iterate, random_init, Method, Outcome};
use cheaptalk::equilibrium::{certify, Partition};
use cheaptalk::sources::SourceModel;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(serde::Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum OutcomeDoc {
    Converged,
    Collapsed { bin: usize, iteration: usize },
    MaxIter,
}

impl From<Outcome> for OutcomeDoc {
    fn from(o: Outcome) -> Self {
        match o {
            Outcome::Converged => OutcomeDoc::Converged,
            Outcome::Collapsed { bin, iteration } => OutcomeDoc::Collapsed { bin, iteration },
            Outcome::MaxIter => OutcomeDoc::MaxIter,
        }
    }
}

#[derive(serde::Serialize)]
struct TraceDoc {
    method: &'static str,
    damping: Num,
    bias: Num,
    bins: usize,
    seed: u64,
    outcome: OutcomeDoc,
    iterations: usize,
    /// Residual history thinned the same way as the stored iterates.
    residual_index: Vec<usize>,
    residual_history: Vec<Num>,
    initial_edges: Vec<Num>,
    final_edges: Vec<Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_abs_residual: Option<Num>,
}

#[derive(serde::Serialize)]
struct BasinDoc {
    method: &'static str,
    damping: Num,
    bias: Num,
    bins: usize,
    seed: u64,
    runs: usize,
    converged: usize,
    collapsed: usize,
    max_iter: usize,
    fraction_converged: Num,
    limits: Vec<Vec<Num>>,
    cluster_sizes: Vec<usize>,
    outcomes: Vec<OutcomeDoc>,
}

fn equal_init(src: &SourceModel<f64>, bias: f64, n: usize, width: f64) -> cheaptalk::Result<Partition<f64>> {
    let e: Vec<f64> = match *src {
        SourceModel::Exponential { .. } => (1..n).map(|k| width * k as f64).collect(),
        SourceModel::Gaussian { mean, .. } => {
            (1..n).map(|k| mean + width * (k as f64 - n as f64 / 2.0)).collect()
        }
    };
    Partition::from_interior(*src, bias, &e)
}

fn keep(i: usize) -> bool {
    i <= 1000 || i % 10 == 0
}

pub fn run(a: DynamicsArgs) -> Result<(), Failure> {
    let src = source_from(&a.source)?;
    if a.bins == 0 {
        return Err(Failure::Usage("--bins must be at least 1".into()));
    }
    if !(a.damping > 0.0 && a.damping <= 1.0) {
        return Err(Failure::Usage("--damping must lie in (0, 1]".into()));
    }
    let (method, name, damping) = match a.method {
        MethodArg::Lloyd => (Method::Lloyd, "lloyd", 1.0),
        MethodArg::FixedPoint => (Method::FixedPoint { damping: a.damping }, "fixed-point", a.damping),
    };
    let text = if a.inits > 1 {
        if a.init != InitKind::Random {
            return Err(Failure::Usage("--inits > 1 needs --init random".into()));
        }
        let s = basin_probe(&src, a.bias, a.bins, a.inits, a.seed, method, a.max_iter, a.tol)
            .map_err(solver_failure)?;
        let doc = BasinDoc {
            method: name,
            damping: Num(damping),
            bias: Num(a.bias),
            bins: a.bins,
            seed: a.seed,
            runs: s.runs,
            converged: s.converged,
            collapsed: s.collapsed,
            max_iter: s.max_iter,
            fraction_converged: Num(s.fraction_converged()),
            limits: s.limits.iter().map(|l| nums(l)).collect(),
            cluster_sizes: s.cluster_sizes.clone(),
            outcomes: s.outcomes.iter().map(|&o| o.into()).collect(),
        };
        serde_json::to_string_pretty(&doc)
    } else {
        let init = match a.init {
            InitKind::Equal => equal_init(&src, a.bias, a.bins, a.width),
            InitKind::Random => random_init(&src, a.bias, a.bins, &mut ChaCha8Rng::seed_from_u64(a.seed)),
        }
        .map_err(|e| Failure::Usage(e.to_string()))?;
        let t = iterate(method, &src, a.bias, &init, a.max_iter, a.tol).map_err(solver_failure)?;
        let max_abs_residual = match t.outcome {
            Outcome::Converged => Some(Num(certify(&t.final_partition, a.tol).map_err(solver_failure)?.max_abs_residual)),
            _ => None,
        };
        let (idx, hist): (Vec<usize>, Vec<Num>) = t
            .residual_history
            .iter()
            .enumerate()
            .map(|(i, &r)| (i + 1, Num(r)))
            .filter(|&(i, _)| keep(i))
            .unzip();
        let doc = TraceDoc {
            method: name,
            damping: Num(damping),
            bias: Num(a.bias),
            bins: a.bins,
            seed: a.seed,
            outcome: t.outcome.into(),
            iterations: t.iterations(),
            residual_index: idx,
            residual_history: hist,
            initial_edges: nums(init.edges()),
            final_edges: nums(t.final_partition.edges()),
            max_abs_residual,
        };
        serde_json::to_string_pretty(&doc)
    }
    .map_err(|e| Failure::Usage(e.to_string()))?;
    write_output(a.out.as_deref(), &(text + "\n")).map_err(io_failure)
}
