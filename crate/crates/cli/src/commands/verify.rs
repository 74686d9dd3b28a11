use std::f64::consts::PI;
use std::io::Write;

use fracwhittle::simulate::NormalStream;
use fracwhittle::spectrum::{verify_lemma51, DftPlan};
use fracwhittle::{frac_coeffs, fracdiff, fracint};

use crate::error::{CliError, CliResult};
use crate::{parse_list, VerifyArgs};

/// Highest Fourier index checked per series.
pub const MAX_INDEX: usize = 32;

/// Largest residual of one check and where it occurred.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Worst {
    pub residual: f64,
    pub n: usize,
    pub d: f64,
    pub j: usize,
    pub draw: u64,
}

impl Worst {
    fn empty() -> Self {
        Self {
            residual: 0.0,
            n: 0,
            d: 0.0,
            j: 0,
            draw: 0,
        }
    }

    fn offer(&mut self, candidate: Worst) {
        if candidate.residual > self.residual || candidate.residual.is_nan() {
            *self = candidate;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub identity: Worst,
    pub roundtrip: Worst,
    pub parseval: Worst,
}

fn l1(d: f64, n: usize) -> CliResult<f64> {
    Ok(frac_coeffs(d, n - 1)?.coeffs.iter().map(|c| c.abs()).sum())
}

/// Runs every check over the grid of sample sizes, orders and draws.
pub fn run_checks(
    n_list: &[usize],
    d_list: &[f64],
    seed: u64,
    draws: u64,
) -> CliResult<VerifyReport> {
    let mut report = VerifyReport {
        identity: Worst::empty(),
        roundtrip: Worst::empty(),
        parseval: Worst::empty(),
    };
    for &n in n_list {
        if n < 2 {
            return Err(CliError::usage(format!("sample size {n} is too small")));
        }
        let plan = DftPlan::new(n);
        for draw in 0..draws {
            let x = NormalStream::new(seed, draw).take(n);
            let scale = x
                .iter()
                .fold(0.0f64, |m, v| m.max(v.abs()))
                .max(f64::MIN_POSITIVE);

            let w = plan.full(&x);
            let energy: f64 = x.iter().map(|v| v * v).sum::<f64>() / (2.0 * PI);
            let spectral: f64 = w.iter().map(|c| c.norm_sqr()).sum();
            report.parseval.offer(Worst {
                residual: (spectral - energy).abs() / energy.max(f64::MIN_POSITIVE),
                n,
                d: 0.0,
                j: 0,
                draw,
            });

            for &d in d_list {
                for j in 1..=MAX_INDEX.min(n - 1) {
                    report.identity.offer(Worst {
                        residual: verify_lemma51(&x, d, j)?,
                        n,
                        d,
                        j,
                        draw,
                    });
                }
                let back = fracdiff(&fracint(&x, d)?, d)?;
                let err = back
                    .iter()
                    .zip(&x)
                    .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
                let cond = l1(d, n)? * l1(-d, n)?;
                report.roundtrip.offer(Worst {
                    residual: err / (scale * cond),
                    n,
                    d,
                    j: 0,
                    draw,
                });
            }
        }
    }
    Ok(report)
}

pub fn run(args: &VerifyArgs, out: &mut dyn Write) -> CliResult<()> {
    let n_list: Vec<usize> = parse_list(&args.n_list, "n")?;
    let d_list: Vec<f64> = parse_list(&args.d_list, "d")?;
    if n_list.is_empty() || d_list.is_empty() {
        return Err(CliError::usage("--n-list and --d-list must be non-empty"));
    }
    if args.tol.is_nan() || args.tol < 0.0 {
        return Err(CliError::usage("--tol must be non-negative"));
    }
    let report = run_checks(&n_list, &d_list, args.seed, args.draws)?;

    let checks = [
        ("identity", report.identity),
        ("roundtrip", report.roundtrip),
        ("parseval", report.parseval),
    ];
    writeln!(out, "check,max_residual,n,d,j,draw,status")?;
    let mut failed = Vec::new();
    for (name, w) in checks {
        let pass = w.residual <= args.tol;
        writeln!(
            out,
            "{name},{:e},{},{},{},{},{}",
            w.residual,
            w.n,
            w.d,
            w.j,
            w.draw,
            if pass { "pass" } else { "fail" }
        )?;
        if !pass {
            failed.push(format!(
                "{name} residual {:e} at n = {}, d = {}, j = {}, draw = {}",
                w.residual, w.n, w.d, w.j, w.draw
            ));
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::verify(format!(
            "tolerance {:e} exceeded: {}",
            args.tol,
            failed.join("; ")
        )))
    }
}
