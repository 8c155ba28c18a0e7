//! MatrixMarket `coordinate integer general` reader and writer.

use std::io::{BufRead, Write};

use num_bigint::BigInt;

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

const HEADER: &str = "%%MatrixMarket matrix coordinate integer general";

pub fn write_matrix_market<W: Write>(m: &IntMatrix, mut out: W) -> Result<()> {
    writeln!(out, "{HEADER}")?;
    writeln!(out, "{} {} {}", m.rows(), m.cols(), m.nnz())?;
    for (r, c, v) in m.iter() {
        writeln!(out, "{} {} {}", r + 1, c + 1, v)?;
    }
    Ok(())
}

pub fn read_matrix_market<R: BufRead>(input: R) -> Result<IntMatrix> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("empty MatrixMarket file".into()))??;
    let fields: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if fields.len() != 5
        || fields[0] != "%%matrixmarket"
        || fields[1] != "matrix"
        || fields[2] != "coordinate"
        || fields[3] != "integer"
        || fields[4] != "general"
    {
        return Err(Error::Format(format!("unsupported header `{header}`")));
    }
    let mut body = lines.filter(|l| match l {
        Ok(l) => !l.starts_with('%') && !l.trim().is_empty(),
        Err(_) => true,
    });
    let size = body
        .next()
        .ok_or_else(|| Error::Format("missing size line".into()))??;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Format(format!("bad size line `{size}`"))))
        .collect::<Result<_>>()?;
    let [rows, cols, nnz] = dims[..] else {
        return Err(Error::Format(format!("bad size line `{size}`")));
    };
    let mut m = IntMatrix::zeros(rows, cols);
    let mut seen = 0;
    for line in body {
        let line = line?;
        let t: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::Format(format!("bad entry `{line}`"));
        if t.len() != 3 {
            return Err(bad());
        }
        let r: usize = t[0].parse().map_err(|_| bad())?;
        let c: usize = t[1].parse().map_err(|_| bad())?;
        let v: BigInt = t[2].parse().map_err(|_| bad())?;
        if r == 0 || c == 0 || r > rows || c > cols {
            return Err(Error::Format(format!("entry ({r},{c}) outside {rows}x{cols}")));
        }
        m.add_to(r - 1, c - 1, &v);
        seen += 1;
    }
    if seen != nnz {
        return Err(Error::Format(format!("expected {nnz} entries, found {seen}")));
    }
    Ok(m)
}
