use super::{io_failure, solver_failure, Failure};
use crate::args::VerifyArgs;
use crate::output::{parse_result, Num};
use cheaptalk::equilibrium::{certify, certify_window, decoder_cost, monte_carlo_cost};

/// Monte Carlo agreement band, in standard errors.
const MC_SIGMAS: f64 = 4.0;

#[derive(serde::Serialize)]
struct VerifyDoc {
    verdict: bool,
    certificate_ok: bool,
    max_abs_residual: Num,
    tolerance: Num,
    certified_edges: [usize; 2],
    decoder_cost: Num,
    monte_carlo_cost: Num,
    monte_carlo_stderr: Num,
    monte_carlo_ok: bool,
    samples: usize,
    seed: u64,
}

pub fn run(a: VerifyArgs) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&a.input).map_err(io_failure)?;
    let parsed = parse_result(&text).map_err(Failure::Usage)?;
    let p = &parsed.partition;
    let tol = a.tol.unwrap_or(parsed.tolerance);
    let interior = p.bins() - 1;
    let cert = match parsed.certified_edges {
        Some((f, l)) if interior > 0 && (f, l) != (1, interior) => {
            certify_window(p, f, l, tol).map_err(|e| Failure::Usage(e.to_string()))?
        }
        _ => certify(p, tol).map_err(|e| Failure::Usage(e.to_string()))?,
    };
    let cost = decoder_cost(p).map_err(solver_failure)?;
    if a.samples < 2 {
        return Err(Failure::Usage("--samples must be at least 2".into()));
    }
    let (mc, se) = monte_carlo_cost(p, a.samples, a.seed).map_err(solver_failure)?;
    let mc_ok = (mc - cost.decoder_cost).abs() <= MC_SIGMAS * se + 1e-12 * cost.decoder_cost.abs();
    let last = cert.first_edge + cert.residuals.len().max(1) - 1;
    let doc = VerifyDoc {
        verdict: cert.verdict && mc_ok,
        certificate_ok: cert.verdict,
        max_abs_residual: Num(cert.max_abs_residual),
        tolerance: Num(cert.tolerance),
        certified_edges: [cert.first_edge, last],
        decoder_cost: Num(cost.decoder_cost),
        monte_carlo_cost: Num(mc),
        monte_carlo_stderr: Num(se),
        monte_carlo_ok: mc_ok,
        samples: a.samples,
        seed: a.seed,
    };
    println!("{}", serde_json::to_string_pretty(&doc).map_err(|e| Failure::Usage(e.to_string()))?);
    if !cert.verdict {
        return Err(Failure::Verification(format!(
            "certificate failed: max residual {:e} exceeds {:e}",
            cert.max_abs_residual, tol
        )));
    }
    if !mc_ok {
        return Err(Failure::Verification(format!(
            "Monte Carlo cost {mc:e} disagrees with {:e} (stderr {se:e})",
            cost.decoder_cost
        )));
    }
    Ok(())
}
