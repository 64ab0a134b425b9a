//! Text and JSON ingestion/emission for matrices, vectors, and reports.
//!
//! Matrix files are whitespace-delimited, one row per line. Lines starting
//! with `#` are comments; an optional first comment of the form `# n d`
//! declares the expected dimensions and is checked against the parsed body.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use std::path::Path;

/// Parses a whitespace-delimited matrix. Dimensions are inferred from the
/// body; a leading `# n d` header, when present, must agree with them.
pub fn parse_matrix(text: &str) -> Result<DMatrix<f64>> {
    let mut header: Option<(usize, usize)> = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if header.is_none() && rows.is_empty() {
                let dims: Vec<usize> = rest
                    .split_whitespace()
                    .map_while(|t| t.parse::<usize>().ok())
                    .collect();
                if dims.len() == 2 {
                    header = Some((dims[0], dims[1]));
                }
            }
            continue;
        }
        let row: Vec<f64> = line
            .split_whitespace()
            .map(|t| {
                t.parse::<f64>().map_err(|_| {
                    Error::InvalidArgument(format!(
                        "line {}: cannot parse '{t}' as a number",
                        lineno + 1
                    ))
                })
            })
            .collect::<Result<_>>()?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::InvalidArgument(format!(
                    "line {}: expected {} entries, got {}",
                    lineno + 1,
                    first.len(),
                    row.len()
                )));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::InvalidArgument(
            "matrix file has no data rows".into(),
        ));
    }
    let (r, c) = (rows.len(), rows[0].len());
    if let Some((hn, hd)) = header {
        if (hn, hd) != (r, c) {
            return Err(Error::InvalidArgument(format!(
                "header declares {hn}x{hd} but body is {r}x{c}"
            )));
        }
    }
    Ok(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
}

/// Parses a vector: a matrix file with one column, or a single row.
pub fn parse_vector(text: &str) -> Result<DVector<f64>> {
    let m = parse_matrix(text)?;
    if m.ncols() == 1 {
        Ok(DVector::from_column_slice(m.column(0).as_slice()))
    } else if m.nrows() == 1 {
        Ok(DVector::from_row_slice(m.transpose().column(0).as_slice()))
    } else {
        Err(Error::InvalidArgument(format!(
            "expected a vector, got a {}x{} matrix",
            m.nrows(),
            m.ncols()
        )))
    }
}

/// Reads and parses a matrix file.
pub fn read_matrix(path: &Path) -> Result<DMatrix<f64>> {
    let text = std::fs::read_to_string(path)?;
    parse_matrix(&text)
}

/// Reads and parses a vector file.
pub fn read_vector(path: &Path) -> Result<DVector<f64>> {
    let text = std::fs::read_to_string(path)?;
    parse_vector(&text)
}

/// Writes a matrix in the same text format (17 significant digits, which
/// round-trips every f64).
pub fn write_matrix(path: &Path, m: &DMatrix<f64>) -> Result<()> {
    let mut out = format!("# {} {}\n", m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|j| format!("{:.17e}", m[(i, j)]))
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Serializes a value as pretty JSON with a trailing newline.
pub fn to_json_string<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Writes a value as pretty JSON.
pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, to_json_string(value)?)?;
    Ok(())
}

/// Reads a JSON file into a deserializable value.
pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_matrix_with_header_and_comments() {
        let text = "# 3 2\n# columns are unit vectors\n1 0\n0 0.6\n0 0.8\n";
        let m = parse_matrix(text).unwrap();
        assert_eq!((m.nrows(), m.ncols()), (3, 2));
        assert_eq!(m[(2, 1)], 0.8);
    }

    #[test]
    fn rejects_header_mismatch_and_ragged_rows() {
        assert!(parse_matrix("# 2 2\n1 0\n").is_err());
        assert!(parse_matrix("1 0\n1\n").is_err());
        assert!(parse_matrix("1 x\n").is_err());
        assert!(parse_matrix("# only comments\n").is_err());
    }

    #[test]
    fn vector_accepts_row_or_column() {
        let col = parse_vector("0.6\n0.8\n").unwrap();
        let row = parse_vector("0.6 0.8\n").unwrap();
        assert_eq!(col, row);
        assert!(parse_vector("1 0\n0 1\n").is_err());
    }

    #[test]
    fn matrix_write_round_trips_exactly() {
        let dir = std::env::temp_dir().join("subspace-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("m.txt");
        let m = DMatrix::from_row_slice(2, 2, &[1.0 / 3.0, -2.0f64.sqrt(), 0.0, 1e-17]);
        write_matrix(&path, &m).unwrap();
        let back = read_matrix(&path).unwrap();
        assert_eq!(m, back);
    }
}
