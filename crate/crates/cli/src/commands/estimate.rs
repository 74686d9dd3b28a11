use std::io::Write;

use fracwhittle::elw::EstimatorConfig;
use fracwhittle::mc::format_number;
use fracwhittle::EstimatorKind;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::series_file::read_series;
use crate::{parse_bounds, EstimateArgs};

#[derive(Debug, Serialize)]
struct EstimateOutput {
    estimator: EstimatorKind,
    n: usize,
    m: usize,
    ci_level: f64,
    d_hat: f64,
    g_hat: f64,
    se: f64,
    ci_low: f64,
    ci_high: f64,
    objective_at_min: f64,
    n_evals: usize,
    boundary_hit: bool,
    warnings: Vec<String>,
}

pub fn run(args: &EstimateArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let series = read_series(&args.input, args.format, args.column.as_deref())?;
    let kind: EstimatorKind = args.estimator.parse()?;
    let (lo, hi) = parse_bounds(&args.bounds)?;
    let n = series.len();
    let mut cfg = EstimatorConfig::for_length(n)
        .with_bounds(lo, hi)
        .with_mean_mode(args.mean.into());
    if let Some(m) = args.m {
        cfg = cfg.with_m(m);
    }
    cfg.ci_level = args.ci_level;
    if kind != EstimatorKind::Elw && args.mean != crate::MeanArg::None {
        writeln!(err, "note: --mean has no effect on the {kind} estimator")?;
    }

    let est = kind.run(series.as_slice(), &cfg)?;
    for w in &est.warnings {
        writeln!(err, "warning: {w}")?;
    }
    if est.boundary_hit {
        writeln!(err, "warning: estimate lies on the optimisation boundary")?;
    }

    let output = EstimateOutput {
        estimator: kind,
        n,
        m: est.m,
        ci_level: cfg.ci_level,
        d_hat: est.d_hat,
        g_hat: est.g_hat,
        se: est.se,
        ci_low: est.ci_low,
        ci_high: est.ci_high,
        objective_at_min: est.objective_at_min,
        n_evals: est.n_evals,
        boundary_hit: est.boundary_hit,
        warnings: est.warnings.iter().map(ToString::to_string).collect(),
    };
    if args.json {
        serde_json::to_writer_pretty(&mut *out, &output)?;
        writeln!(out)?;
    } else {
        write_csv(&output, out)?;
    }
    Ok(())
}

fn write_csv(o: &EstimateOutput, out: &mut dyn Write) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "estimator",
        "n",
        "m",
        "ci_level",
        "d_hat",
        "g_hat",
        "se",
        "ci_low",
        "ci_high",
        "objective_at_min",
        "n_evals",
        "boundary_hit",
    ])?;
    w.write_record([
        o.estimator.name().to_string(),
        o.n.to_string(),
        o.m.to_string(),
        format_number(o.ci_level),
        format_number(o.d_hat),
        format_number(o.g_hat),
        format_number(o.se),
        format_number(o.ci_low),
        format_number(o.ci_high),
        format_number(o.objective_at_min),
        o.n_evals.to_string(),
        o.boundary_hit.to_string(),
    ])?;
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::usage(format!("csv error: {e}")))?;
    out.write_all(&bytes)?;
    Ok(())
}
