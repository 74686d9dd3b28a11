use std::io::Write;

use fracwhittle::{gen_fractional, SimSpec};

use crate::error::{CliError, CliResult};
use crate::series_file::format_plain;
use crate::SimulateArgs;

pub fn run(args: &SimulateArgs, out: &mut dyn Write) -> CliResult<()> {
    if args.n == 0 {
        return Err(CliError::usage("--n must be at least 1"));
    }
    let series = gen_fractional(&SimSpec::gaussian(args.n, args.d, args.seed))?;
    let text = format_plain(series.as_slice());
    match &args.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}
