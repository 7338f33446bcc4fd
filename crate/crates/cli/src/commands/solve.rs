use super::{csv_text, io_failure, solver_failure, source_from, Failure, GAUSS_ZERO_BIAS_NOTE};
use crate::args::{Format, SolveArgs, Solver};
use crate::output::{fmt_num, join, write_output, ResultDoc};
use cheaptalk::equilibrium::{certify, certify_window, decoder_best_response, decoder_cost, Partition};
use cheaptalk::exp_solver;
use cheaptalk::gauss_solver::{self, FixedPointOptions, TruncatedLadder};
use cheaptalk::sources::SourceModel;
use std::time::Instant;

pub fn run(a: SolveArgs) -> Result<(), Failure> {
    let src = source_from(&a.source)?;
    let start = Instant::now();
    let is_exp = matches!(src, SourceModel::Exponential { .. });
    let solver = a.solver.unwrap_or(match (is_exp, a.bins) {
        (true, _) => Solver::ClosedForm,
        (false, 2) => Solver::TwoBin,
        (false, _) => Solver::FixedPoint,
    });
    let exp_solver_kind = matches!(solver, Solver::ClosedForm | Solver::Infinite);
    if exp_solver_kind != is_exp {
        return Err(Failure::Usage(format!("solver {solver:?} does not apply to this source")));
    }
    if a.bins == 0 {
        return Err(Failure::Usage("--bins must be at least 1".into()));
    }
    let opts = FixedPointOptions { damping: a.damping, max_iter: a.max_iter, tol: a.tol };

    let (p, cert, name) = match (solver, src) {
        (Solver::ClosedForm, SourceModel::Exponential { rate }) => {
            let p = if a.bins == 2 {
                exp_solver::solve_two_bin(rate, a.bias)
            } else {
                exp_solver::solve_n_bins(rate, a.bias, a.bins)
            }
            .map_err(solver_failure)?;
            let c = certify(&p, a.cert_tol).map_err(solver_failure)?;
            (p, c, "closed-form")
        }
        (Solver::Infinite, SourceModel::Exponential { rate }) => {
            let p = exp_solver::infinite_equilibrium(rate, a.bias, a.depth).map_err(solver_failure)?;
            let c = exp_solver::certify_infinite(rate, a.bias, a.depth, a.cert_tol).map_err(solver_failure)?;
            (p, c, "infinite")
        }
        (Solver::TwoBin, SourceModel::Gaussian { mean, std }) => {
            if a.bins != 2 {
                return Err(Failure::Usage("the two-bin solver needs --bins 2".into()));
            }
            let p = gauss_solver::solve_two_bin_gauss(mean, std, a.bias).map_err(solver_failure)?;
            let c = certify(&p, a.cert_tol).map_err(solver_failure)?;
            (p, c, "two-bin")
        }
        (Solver::FixedPoint, SourceModel::Gaussian { mean, std }) => {
            let p = gauss_solver::solve_n_bins_gauss(mean, std, a.bias, a.bins, None, opts)
                .map_err(solver_failure)?;
            let c = certify(&p, a.cert_tol).map_err(solver_failure)?;
            (p, c, "fixed-point")
        }
        (Solver::Ladder, SourceModel::Gaussian { mean, std }) => {
            let l0 = TruncatedLadder::initial(mean, std, a.bias, a.depth, a.margin).map_err(solver_failure)?;
            let (l, report) = gauss_solver::iterate_map_t(&l0, &src, opts).map_err(solver_failure)?;
            if !report.converged {
                return Err(Failure::Nonexistence(format!(
                    "ladder iteration did not converge in {} iterations (last change {:e})",
                    report.iterations, report.last_change
                )));
            }
            let p = l.partition(&src).map_err(solver_failure)?;
            let (f, last) = l.certified_edges();
            let c = certify_window(&p, f, last, a.cert_tol).map_err(solver_failure)?;
            (p, c, "ladder")
        }
        _ => unreachable!(),
    };
    let cost = decoder_cost(&p).map_err(solver_failure)?;
    let note = (!is_exp && a.bias == 0.0).then(|| GAUSS_ZERO_BIAS_NOTE.to_string());
    if let Some(n) = &note {
        eprintln!("note: {n}");
    }
    let ms = start.elapsed().as_secs_f64() * 1e3;
    let text = match a.output.format {
        Format::Json => {
            let doc = ResultDoc::build(&p, name, &cert, &cost, ms, note).map_err(solver_failure)?;
            let mut s = serde_json::to_string_pretty(&doc).map_err(|e| Failure::Usage(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Csv => solve_csv(&p, name, &cert, &cost)?,
    };
    write_output(a.output.out.as_deref(), &text).map_err(io_failure)?;
    if !cert.verdict {
        return Err(Failure::Nonexistence(format!(
            "result not certified: max residual {:e} exceeds {:e}",
            cert.max_abs_residual, cert.tolerance
        )));
    }
    Ok(())
}

fn solve_csv(
    p: &Partition<f64>,
    solver: &str,
    cert: &cheaptalk::equilibrium::EquilibriumCertificate<f64>,
    cost: &cheaptalk::equilibrium::CostReport<f64>,
) -> Result<String, Failure> {
    let u = decoder_best_response(p).map_err(solver_failure)?;
    let (kind, rate, mean, std) = source_columns(p.source());
    let header = [
        "source", "rate", "mean", "std", "bias", "solver", "bins", "edges", "centroids", "lengths",
        "max_abs_residual", "tolerance", "verdict", "decoder_cost", "encoder_cost",
    ];
    let row = vec![
        kind, rate, mean, std,
        fmt_num(p.bias()),
        solver.to_string(),
        p.bins().to_string(),
        join(p.edges()),
        join(u.centroids()),
        join(&p.lengths()),
        fmt_num(cert.max_abs_residual),
        fmt_num(cert.tolerance),
        cert.verdict.to_string(),
        fmt_num(cost.decoder_cost),
        fmt_num(cost.encoder_cost),
    ];
    csv_text(&header, &[row])
}

pub fn source_columns(s: &SourceModel<f64>) -> (String, String, String, String) {
    match *s {
        SourceModel::Exponential { rate } => ("exponential".into(), fmt_num(rate), String::new(), String::new()),
        SourceModel::Gaussian { mean, std } => ("gaussian".into(), String::new(), fmt_num(mean), fmt_num(std)),
    }
}
