//! Plain-text matrix format.
//!
//! ```text
//! n=<int>
//! <n+2 rows of n+2 space-separated decimals>
//! ```

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Serializes with 17 significant digits so values round-trip exactly.
pub fn write_matrix(n: usize, mat: &DMatrix<f64>) -> String {
    let mut out = format!("n={n}\n");
    for i in 0..mat.nrows() {
        let row: Vec<String> = (0..mat.ncols()).map(|j| format!("{:.16e}", mat[(i, j)])).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<(usize, DMatrix<f64>)> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let n: usize = header
        .strip_prefix("n=")
        .ok_or_else(|| Error::Parse(format!("expected header \"n=<int>\", got {header:?}")))?
        .trim()
        .parse()
        .map_err(|e| Error::Parse(format!("bad n: {e}")))?;
    if n == 0 {
        return Err(Error::Parse("n must be at least 1".into()));
    }
    let size = n + 2;
    let mut mat = DMatrix::zeros(size, size);
    for i in 0..size {
        let line = lines.next().ok_or_else(|| Error::Parse(format!("expected {size} rows, found {i}")))?;
        let values: Vec<f64> = line
            .split_whitespace()
            .map(|tok| tok.parse::<f64>().map_err(|e| Error::Parse(format!("row {}: {tok:?}: {e}", i + 1))))
            .collect::<Result<_>>()?;
        if values.len() != size {
            return Err(Error::Parse(format!("row {} has {} entries, expected {size}", i + 1, values.len())));
        }
        for (j, x) in values.into_iter().enumerate() {
            mat[(i, j)] = x;
        }
    }
    if let Some(extra) = lines.next() {
        return Err(Error::Parse(format!("trailing content: {extra:?}")));
    }
    Ok((n, mat))
}
