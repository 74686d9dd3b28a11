//! Reading and writing series files: plain text (one value per line) or CSV
//! with a header row.

use std::fs;
use std::path::Path;

use clap::ValueEnum;
use fracwhittle::mc::format_number;
use fracwhittle::TimeSeries;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesFormat {
    Plain,
    Csv,
}

/// Minimum usable series length.
pub const MIN_OBSERVATIONS: usize = 2;

pub fn read_series(
    path: &Path,
    format: SeriesFormat,
    column: Option<&str>,
) -> CliResult<TimeSeries> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    let values = match format {
        SeriesFormat::Plain => parse_plain(&text)?,
        SeriesFormat::Csv => parse_csv(&text, column)?,
    };
    if values.len() < MIN_OBSERVATIONS {
        return Err(CliError::usage(format!(
            "{} holds {} observation(s); at least {MIN_OBSERVATIONS} are needed",
            path.display(),
            values.len()
        )));
    }
    Ok(TimeSeries::new(values)?)
}

fn parse_value(raw: &str, line: usize) -> CliResult<f64> {
    let v: f64 = raw
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("line {line}: '{}' is not a number", raw.trim())))?;
    if !v.is_finite() {
        return Err(CliError::usage(format!(
            "line {line}: non-finite value {v}"
        )));
    }
    Ok(v)
}

fn parse_plain(text: &str) -> CliResult<Vec<f64>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| parse_value(l, i + 1))
        .collect()
}

fn parse_csv(text: &str, column: Option<&str>) -> CliResult<Vec<f64>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers()?.clone();
    let idx = match column {
        None => 0,
        Some(name) => headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| CliError::usage(format!("no column named '{name}'")))?,
    };
    rdr.records()
        .enumerate()
        .map(|(i, rec)| {
            let rec = rec?;
            let cell = rec
                .get(idx)
                .ok_or_else(|| CliError::usage(format!("row {} has no column {idx}", i + 2)))?;
            parse_value(cell, i + 2)
        })
        .collect()
}

/// One value per line, 17 significant digits.
pub fn format_plain(values: &[f64]) -> String {
    values.iter().map(|v| format_number(*v) + "\n").collect()
}
