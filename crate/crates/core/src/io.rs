//! Plain-text formats for instances and placements.
//!
//! Instance:
//!
//! ```text
//! # optional comment lines
//! 3 4
//! 0110
//! 1001
//! 0000
//! ```
//!
//! The header is `n m` separated by one space, followed by `n` lines of exactly `m`
//! characters from `{0,1}`. Lines end with LF.
//!
//! Placement: one zero-based `i j` pair per line.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::types::{Instance, Placement};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_usize(tok: &str, line: usize) -> Result<usize> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_err(line, format!("'{tok}' is not an ASCII decimal")));
    }
    tok.parse()
        .map_err(|_| parse_err(line, format!("'{tok}' is out of range")))
}

fn parse_pair(text: &str, line: usize) -> Result<(usize, usize)> {
    let mut parts = text.split(' ');
    match (parts.next(), parts.next(), parts.next()) {
        (Some(a), Some(b), None) => Ok((parse_usize(a, line)?, parse_usize(b, line)?)),
        _ => Err(parse_err(
            line,
            format!("expected two numbers separated by one space, got '{text}'"),
        )),
    }
}

/// Data lines with their 1-based line numbers, skipping `#` comments.
fn data_lines(text: &str) -> Result<Vec<(usize, &str)>> {
    let mut out = Vec::new();
    for (k, line) in text.split('\n').enumerate() {
        if line.contains('\r') {
            return Err(parse_err(
                k + 1,
                "carriage return found, lines must end with LF",
            ));
        }
        if line.starts_with('#') {
            continue;
        }
        out.push((k + 1, line));
    }
    // a trailing LF produces one empty final segment
    if out.last().is_some_and(|(_, l)| l.is_empty()) {
        out.pop();
    }
    Ok(out)
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let lines = data_lines(text)?;
    let mut it = lines.into_iter();
    let (hline, header) = it
        .next()
        .ok_or_else(|| parse_err(1, "missing 'n m' header"))?;
    let (n, m) = parse_pair(header, hline)?;
    if n == 0 || m == 0 {
        return Err(parse_err(hline, "dimensions must be positive"));
    }
    let mut rows = Vec::with_capacity(n);
    for (line, row) in it.by_ref().take(n) {
        if row.len() != m {
            return Err(parse_err(
                line,
                format!("expected {m} characters, found {}", row.len()),
            ));
        }
        let parsed = row
            .bytes()
            .map(|b| match b {
                b'0' => Ok(0u8),
                b'1' => Ok(1u8),
                _ => Err(parse_err(
                    line,
                    format!("unexpected character '{}'", b as char),
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(parsed);
    }
    if rows.len() != n {
        return Err(parse_err(
            hline,
            format!("header promises {n} rows, found {}", rows.len()),
        ));
    }
    if let Some((line, _)) = it.next() {
        return Err(parse_err(line, "unexpected data after the last row"));
    }
    Instance::from_rows(&rows)
}

pub fn format_instance(instance: &Instance) -> String {
    let mut out = format!("{} {}\n", instance.rows(), instance.cols());
    for row in instance.to_rows() {
        out.extend(row.iter().map(|&v| if v == 1 { '1' } else { '0' }));
        out.push('\n');
    }
    out
}

/// Parses a placement. Blank lines and `#` comments are skipped.
pub fn parse_placement(text: &str) -> Result<Placement> {
    let mut coords = Vec::new();
    for (line, l) in data_lines(text)? {
        if l.is_empty() {
            continue;
        }
        coords.push(parse_pair(l, line)?);
    }
    Ok(Placement::new(coords))
}

pub fn format_placement(placement: &Placement) -> String {
    let mut out = String::new();
    for (i, j) in placement.iter() {
        let _ = writeln!(out, "{i} {j}");
    }
    out
}
