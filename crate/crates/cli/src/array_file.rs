//! The array file: `M <count>` on the first line, then one integer per line.
//!
//! Files hold the logical values, never the stored cells.

use std::fmt::Write as _;
use std::path::Path;

use crate::CliError;

pub fn parse(text: &str) -> Result<Vec<i64>, CliError> {
    let mut lines = text.lines().enumerate().map(|(n, l)| (n + 1, l.trim()));
    let (_, header) = lines.next().ok_or_else(|| CliError::Input("empty array file".into()))?;
    let count = header
        .strip_prefix("M ")
        .and_then(|c| c.trim().parse::<usize>().ok())
        .ok_or_else(|| CliError::Input(format!("line 1: expected `M <count>`, found `{header}`")))?;

    let mut values = Vec::with_capacity(count);
    for (n, line) in lines {
        if line.is_empty() {
            continue;
        }
        let v = line
            .parse::<i64>()
            .map_err(|e| CliError::Input(format!("line {n}: `{line}`: {e}")))?;
        values.push(v);
    }
    if values.len() != count {
        return Err(CliError::Input(format!("declared {count} values, found {}", values.len())));
    }
    Ok(values)
}

pub fn render(values: &[i64]) -> String {
    let mut out = format!("M {}\n", values.len());
    for v in values {
        let _ = writeln!(out, "{v}");
    }
    out
}

pub fn read(path: &Path) -> Result<Vec<i64>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| match e {
        CliError::Input(msg) => CliError::Input(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write(path: &Path, values: &[i64]) -> Result<(), CliError> {
    std::fs::write(path, render(values)).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}
