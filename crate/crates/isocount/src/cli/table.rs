//! CSV rows, numeric arguments and the flat config file.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::counting::{CensusResult, Engine};

use super::CliError;

pub const CSV_HEADER: &str = "N,X,count,engine";

/// Parse a positive height bound: a plain integer or `mantissa e exponent`
/// with an integral value, e.g. `1000000`, `1e6`, `2.5e3`.
pub fn parse_x(s: &str) -> Result<u64, CliError> {
    let bad = || CliError::Usage(format!("'{s}' is not a positive integer bound"));
    let s = s.trim().replace('_', "");
    let (mant, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m.to_string(), e.parse::<u32>().map_err(|_| bad())?),
        None => (s.clone(), 0),
    };
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((&mant, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let frac_len = frac_part.len() as u32;
    let digits: u128 = format!("{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let value = if exp >= frac_len {
        digits.checked_mul(10u128.checked_pow(exp - frac_len).ok_or_else(bad)?).ok_or_else(bad)?
    } else {
        let div = 10u128.pow(frac_len - exp);
        if digits % div != 0 {
            return Err(bad());
        }
        digits / div
    };
    match u64::try_from(value) {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(bad()),
    }
}

/// Comma-separated, strictly increasing bounds.
pub fn parse_grid(s: &str) -> Result<Vec<u64>, CliError> {
    let grid: Vec<u64> = s.split(',').map(parse_x).collect::<Result<_, _>>()?;
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage(format!("malformed grid '{s}': bounds must increase strictly")));
    }
    Ok(grid)
}

/// Comma-separated levels.
pub fn parse_levels(s: &str) -> Result<Vec<u32>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|_| CliError::Usage(format!("bad level '{t}'"))))
        .collect()
}

/// `key=value` lines with `#` comments.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!("config line {}: expected key=value", k + 1)));
        };
        out.insert(key.trim().replace('-', "_"), value.trim().to_string());
    }
    Ok(out)
}

pub fn read_config(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config(&text)
}

/// Header plus rows sorted by `(N, X)`; the engine breaks ties.
pub fn render_csv(rows: &[CensusResult]) -> Result<String, CliError> {
    if rows.is_empty() {
        return Err(CliError::Usage("no rows to write".into()));
    }
    let mut sorted: Vec<&CensusResult> = rows.iter().collect();
    sorted.sort_by_key(|r| (r.level, r.x, r.engine));
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in sorted {
        out.push_str(&format!("{},{},{},{}\n", r.level, r.x, r.count, r.engine));
    }
    Ok(out)
}

pub fn write_csv(rows: &[CensusResult], path: &Path) -> Result<(), CliError> {
    let text = render_csv(rows)?;
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn parse_csv(text: &str) -> Result<Vec<CensusResult>, CliError> {
    let mut lines = text.lines();
    if lines.next().map(str::trim_end) != Some(CSV_HEADER) {
        return Err(CliError::Usage(format!("CSV must start with '{CSV_HEADER}'")));
    }
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let bad = || CliError::Usage(format!("malformed CSV line {}: '{line}'", k + 2));
        let f: Vec<&str> = line.trim_end().split(',').collect();
        if f.len() != 4 {
            return Err(bad());
        }
        rows.push(CensusResult {
            level: f[0].parse().map_err(|_| bad())?,
            x: f[1].parse().map_err(|_| bad())?,
            count: f[2].parse().map_err(|_| bad())?,
            engine: f[3].parse::<Engine>().map_err(|_| bad())?,
            elapsed: 0.0,
        });
    }
    Ok(rows)
}

pub fn read_csv(path: &Path) -> Result<Vec<CensusResult>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_csv(&text)
}
