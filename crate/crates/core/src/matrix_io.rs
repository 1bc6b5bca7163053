//! Plain-text matrix format.
//!
//! ```text
//! 3
//! 0.5 0 0
//! 0 0.3 0.1-0.05j
//! 0 0.1+0.05j 0.2
//! ```
//!
//! First line: dimension `n`. Then `n` rows of `n` whitespace-separated
//! entries, each `re`, `imj`, or `re±imj`. Blank lines and lines starting
//! with `#` are ignored.

use std::path::Path;

use crate::error::{Error, Result};
use crate::{CMatrix, C64};

/// Parses one complex entry.
pub fn parse_complex(tok: &str) -> Result<C64> {
    let bad = || Error::Parse(format!("bad complex entry '{tok}'"));
    let t = tok.trim();
    let Some(body) = t.strip_suffix(['j', 'J', 'i']) else {
        return t.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        s => s,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.parse().map_err(|_| bad())?;
    Ok(C64::new(re, im))
}

/// Parses the whole text format into a square matrix.
pub fn parse_matrix(text: &str) -> Result<CMatrix> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))?;
    let n: usize = header
        .parse()
        .map_err(|_| Error::Parse(format!("first line must be the dimension, got '{header}'")))?;
    if n == 0 {
        return Err(Error::Parse("dimension must be positive".into()));
    }
    let mut entries = Vec::with_capacity(n * n);
    for row in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {n} rows, found {row}")))?;
        let vals = line
            .split_whitespace()
            .map(parse_complex)
            .collect::<Result<Vec<_>>>()?;
        if vals.len() != n {
            return Err(Error::Parse(format!(
                "row {} has {} entries, expected {n}",
                row + 1,
                vals.len()
            )));
        }
        entries.extend(vals);
    }
    if lines.next().is_some() {
        return Err(Error::Parse(format!("trailing data after {n} rows")));
    }
    Ok(CMatrix::from_row_slice(n, n, &entries))
}

pub fn read_matrix(path: &Path) -> Result<CMatrix> {
    let text = std::fs::read_to_string(path)?;
    parse_matrix(&text)
}

/// Formats a real number with 17 significant digits.
pub fn format_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    format!("{x:.16e}")
}

fn format_complex(z: C64) -> String {
    if z.im == 0.0 {
        format_f64(z.re)
    } else {
        let sign = if z.im.is_sign_negative() { '-' } else { '+' };
        format!("{}{}{}j", format_f64(z.re), sign, format_f64(z.im.abs()))
    }
}

/// Writes a square matrix in the text format.
pub fn format_matrix(m: &CMatrix) -> String {
    let n = m.nrows();
    let mut out = format!("{n}\n");
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format_complex(m[(i, j)])).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
