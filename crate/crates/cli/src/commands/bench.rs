use std::fs;
use std::io::Write;

use fracwhittle::elw::default_bandwidth;
use fracwhittle::{run_mc, EstimatorKind, McConfig};

use crate::error::{CliError, CliResult};
use crate::{parse_bounds, parse_list, BenchArgs};

pub const TABLE_CSV: &str = "table.csv";
pub const TABLE_JSON: &str = "table.json";
pub const DENSITY_CSV: &str = "density.csv";

pub fn config_from_args(args: &BenchArgs) -> CliResult<McConfig> {
    let (delta1, delta2) = parse_bounds(&args.bounds)?;
    let estimators = parse_list::<String>(&args.estimators, "estimator")?
        .iter()
        .map(|s| s.parse::<EstimatorKind>())
        .collect::<Result<Vec<_>, _>>()?;
    let workers = args
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if workers == 0 {
        return Err(CliError::usage("--workers must be at least 1"));
    }
    Ok(McConfig {
        n: args.n,
        m: args.m.unwrap_or_else(|| default_bandwidth(args.n)),
        reps: args.reps,
        d_values: parse_list(&args.d_list, "d")?,
        estimators,
        seed: args.seed,
        workers,
        delta1,
        delta2,
        density_points: if args.density { args.density_points } else { 0 },
        ..McConfig::new(Vec::new(), Vec::new())
    })
}

pub fn run(args: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let cfg = config_from_args(args)?;
    writeln!(
        err,
        "running {} replications, n = {}, m = {}, {} worker(s)",
        cfg.reps, cfg.n, cfg.m, cfg.workers
    )?;
    let report = run_mc(&cfg)?;

    fs::create_dir_all(&args.out_dir)?;
    let write = |name: &str, body: String| {
        let path = args.out_dir.join(name);
        fs::write(&path, body)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
    };
    write(TABLE_CSV, report.table_csv()?)?;
    write(TABLE_JSON, report.to_json()? + "\n")?;
    if args.density {
        write(DENSITY_CSV, report.density_csv()?)?;
    }

    writeln!(
        out,
        "n = {}, m = {}, reps = {}",
        report.n, report.m, report.reps
    )?;
    writeln!(
        out,
        "{:<9} {:>6} {:>9} {:>8} {:>9} {:>8}",
        "estimator", "d", "bias", "sd", "mse", "failures"
    )?;
    for r in &report.rows {
        writeln!(
            out,
            "{:<9} {:>6.2} {:>9.4} {:>8.4} {:>9.4} {:>8}",
            r.estimator.name(),
            r.d,
            r.bias,
            r.sd,
            r.mse,
            r.failures
        )?;
    }
    Ok(())
}
