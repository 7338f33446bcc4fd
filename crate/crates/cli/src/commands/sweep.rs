use super::{csv_text, io_failure, source_from, Failure};
use crate::args::{SweepArgs, Table};
use crate::output::{fmt_num, join, write_output};
use cheaptalk::equilibrium::{certify, decoder_cost, Partition};
use cheaptalk::exp_solver;
use cheaptalk::gauss_solver::{self, FixedPointOptions};
use cheaptalk::sources::SourceModel;
use rayon::prelude::*;

pub fn run(a: SweepArgs) -> Result<(), Failure> {
    let src = source_from(&a.source)?;
    let biases = bias_grid(&a)?;
    let bins = parse_bins(&a.bins)?;
    let rate = match src {
        SourceModel::Exponential { rate } => Some(rate),
        SourceModel::Gaussian { .. } => None,
    };
    let need_rate = |t: &str| rate.ok_or_else(|| Failure::Usage(format!("table {t} needs an exponential source")));

    let (header, rows): (Vec<&str>, Vec<Vec<String>>) = match a.table {
        Table::MaxBins => {
            let rate = need_rate("max-bins")?;
            let rows = biases
                .par_iter()
                .map(|&b| max_bins_row(rate, b, a.max_bins_cap))
                .collect();
            (vec!["bias", "max_bins", "bound", "status"], rows)
        }
        Table::FixedPoint => {
            let rate = need_rate("fixed-point")?;
            let rows = biases
                .par_iter()
                .map(|&b| {
                    let r = exp_solver::fixed_point_length(rate, b)
                        .and_then(|l| Ok((l, exp_solver::decoder_cost_infinite(rate, b)?)));
                    match r {
                        Ok((l, j)) => vec![fmt_num(b), fmt_num(l), fmt_num(j), "ok".into()],
                        Err(e) => vec![fmt_num(b), String::new(), String::new(), e.to_string()],
                    }
                })
                .collect();
            (vec!["bias", "l_star", "infinite_cost", "status"], rows)
        }
        Table::Ladder => {
            let rate = need_rate("ladder")?;
            let n_max = *bins.iter().max().unwrap();
            let per_bias: Vec<Vec<Vec<String>>> = biases
                .par_iter()
                .map(|&b| match exp_solver::cost_ladder(rate, b, n_max) {
                    Ok(l) => bins
                        .iter()
                        .map(|&n| {
                            let r = &l.rungs[n - 1];
                            vec![
                                fmt_num(b),
                                n.to_string(),
                                fmt_num(r.decoder_cost),
                                fmt_num(r.encoder_cost),
                                fmt_num(r.excess),
                                fmt_num(r.gap_to_next),
                                fmt_num(l.infinite_cost),
                                "ok".into(),
                            ]
                        })
                        .collect(),
                    Err(e) => bins
                        .iter()
                        .map(|&n| {
                            let mut r = vec![fmt_num(b), n.to_string()];
                            r.extend(std::iter::repeat(String::new()).take(5));
                            r.push(e.to_string());
                            r
                        })
                        .collect(),
                })
                .collect();
            (
                vec!["bias", "bins", "decoder_cost", "encoder_cost", "excess", "gap_to_next", "infinite_cost", "status"],
                per_bias.into_iter().flatten().collect(),
            )
        }
        Table::Solve => {
            let grid: Vec<(f64, usize)> =
                biases.iter().flat_map(|&b| bins.iter().map(move |&n| (b, n))).collect();
            let rows = grid
                .par_iter()
                .map(|&(b, n)| solve_row(&src, b, n, a.cert_tol))
                .collect();
            (
                vec!["bias", "bins", "edges", "centroids", "max_abs_residual", "verdict", "decoder_cost", "encoder_cost", "status"],
                rows,
            )
        }
    };
    let text = csv_text(&header, &rows)?;
    write_output(a.out.as_deref(), &text).map_err(io_failure)
}

fn max_bins_row(rate: f64, b: f64, cap: usize) -> Vec<String> {
    let bound = if b < 0.0 {
        match exp_solver::max_bins_negative_bias(rate, b) {
            Ok(n) => n.to_string(),
            Err(e) => return vec![fmt_num(b), String::new(), String::new(), e.to_string()],
        }
    } else {
        "inf".into()
    };
    match exp_solver::max_constructible_bins(rate, b, cap) {
        Ok(n) => vec![fmt_num(b), n.to_string(), bound, "ok".into()],
        Err(e) => vec![fmt_num(b), String::new(), bound, e.to_string()],
    }
}

fn solve_one(src: &SourceModel<f64>, b: f64, n: usize) -> cheaptalk::Result<Partition<f64>> {
    match *src {
        SourceModel::Exponential { rate } => exp_solver::solve_n_bins(rate, b, n),
        SourceModel::Gaussian { mean, std } if n == 2 => gauss_solver::solve_two_bin_gauss(mean, std, b),
        SourceModel::Gaussian { mean, std } => {
            gauss_solver::solve_n_bins_gauss(mean, std, b, n, None, FixedPointOptions::default())
        }
    }
}

fn solve_row(src: &SourceModel<f64>, b: f64, n: usize, tol: f64) -> Vec<String> {
    let r = solve_one(src, b, n).and_then(|p| {
        let c = certify(&p, tol)?;
        let cost = decoder_cost(&p)?;
        let u = cheaptalk::equilibrium::decoder_best_response(&p)?;
        Ok((p, c, cost, u))
    });
    match r {
        Ok((p, c, cost, u)) => vec![
            fmt_num(b),
            n.to_string(),
            join(p.edges()),
            join(u.centroids()),
            fmt_num(c.max_abs_residual),
            c.verdict.to_string(),
            fmt_num(cost.decoder_cost),
            fmt_num(cost.encoder_cost),
            if c.verdict { "ok".into() } else { "not certified".into() },
        ],
        Err(e) => {
            let mut row = vec![fmt_num(b), n.to_string()];
            row.extend(std::iter::repeat(String::new()).take(6));
            row.push(e.to_string());
            row
        }
    }
}

fn bias_grid(a: &SweepArgs) -> Result<Vec<f64>, Failure> {
    let mut v = a.bias.clone();
    match (a.bias_from, a.bias_to, a.bias_steps) {
        (None, None, None) => {}
        (Some(lo), Some(hi), Some(k)) => match k {
            0 => {}
            1 => v.push(lo),
            _ => v.extend((0..k).map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64)),
        },
        _ => {
            return Err(Failure::Usage(
                "--bias-from, --bias-to and --bias-steps must be given together".into(),
            ))
        }
    }
    if v.is_empty() {
        return Err(Failure::Usage("empty bias grid".into()));
    }
    if v.iter().any(|b| !b.is_finite()) {
        return Err(Failure::Usage("bias values must be finite".into()));
    }
    Ok(v)
}

/// Accepts a comma-separated list (`2,3,5`) or an inclusive range (`2..=8`).
pub fn parse_bins(s: &str) -> Result<Vec<usize>, Failure> {
    let bad = || Failure::Usage(format!("invalid --bins value {s:?}"));
    let v: Vec<usize> = if let Some((lo, hi)) = s.split_once("..=") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().parse().map_err(|_| bad())?;
        (lo..=hi).collect()
    } else {
        s.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()?
    };
    if v.is_empty() {
        return Err(Failure::Usage("empty bins grid".into()));
    }
    if v.contains(&0) {
        return Err(Failure::Usage("bin counts must be at least 1".into()));
    }
    Ok(v)
}
