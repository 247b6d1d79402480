use std::io::{BufRead, Write};

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::kernels::Dataset;

fn malformed(line: usize, reason: impl Into<String>) -> Error {
    Error::MalformedLine { line, reason: reason.into() }
}

fn finite(token: &str, line: usize) -> Result<f64> {
    match token.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(malformed(line, format!("not a finite number: {token:?}"))),
    }
}

/// Read LIBSVM text: `label idx:val idx:val ...` per line with 1-based,
/// strictly increasing indices. Blank lines are skipped. The result is
/// dense with `d` equal to the largest index seen; line numbers in errors
/// are 1-based.
pub fn parse_libsvm(reader: impl BufRead, name: &str) -> Result<Dataset> {
    let mut labels = Vec::new();
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut d = 0;
    for (k, line) in reader.lines().enumerate() {
        let line_no = k + 1;
        let line = line.map_err(|e| malformed(line_no, e.to_string()))?;
        let mut tokens = line.split_whitespace();
        let Some(label) = tokens.next() else { continue };
        labels.push(finite(label, line_no)?);
        let mut row = Vec::new();
        let mut last = 0;
        for tok in tokens {
            let (idx, val) = tok.split_once(':').ok_or_else(|| malformed(line_no, format!("expected idx:val, got {tok:?}")))?;
            let idx: usize = idx.parse().map_err(|_| malformed(line_no, format!("bad index {idx:?}")))?;
            if idx <= last {
                return Err(malformed(line_no, format!("index {idx} does not increase")));
            }
            last = idx;
            row.push((idx - 1, finite(val, line_no)?));
        }
        d = d.max(last);
        rows.push(row);
    }
    if rows.is_empty() || d == 0 {
        return Err(Error::EmptyInput);
    }
    let mut points = DMatrix::zeros(rows.len(), d);
    for (i, row) in rows.iter().enumerate() {
        for &(f, v) in row {
            points[(i, f)] = v;
        }
    }
    Dataset::new(name, points, Some(labels))
}

/// Write LIBSVM text, omitting zero entries. Missing labels are written as
/// `0`. Values use the shortest representation that parses back exactly.
pub fn serialize_libsvm(ds: &Dataset, mut out: impl Write) -> std::io::Result<()> {
    for i in 0..ds.n() {
        let label = ds.labels().map_or(0.0, |l| l[i]);
        write!(out, "{label}")?;
        for f in 0..ds.d() {
            let v = ds.points()[(i, f)];
            if v != 0.0 {
                write!(out, " {}:{v}", f + 1)?;
            }
        }
        writeln!(out)?;
    }
    Ok(())
}
