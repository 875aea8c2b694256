//! LibSVM text format: `label idx:val idx:val …`, 1-based strictly increasing
//! indices, `#` comment lines.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use fcco_core::data::{SparseDataset, SparseRow};

use crate::error::{HarnessError, Result};

fn malformed(line: usize, message: impl Into<String>) -> HarnessError {
    HarnessError::Libsvm { line, message: message.into() }
}

fn parse_line(text: &str, line: usize) -> Result<SparseRow> {
    let mut tokens = text.split_whitespace();
    let label_tok = tokens.next().ok_or_else(|| malformed(line, "missing label"))?;
    let label: f64 = label_tok.parse().map_err(|_| malformed(line, format!("bad label `{label_tok}`")))?;
    let mut entries = Vec::new();
    let mut last = 0u32;
    for tok in tokens {
        let (idx, val) = tok.split_once(':').ok_or_else(|| malformed(line, format!("bad token `{tok}`")))?;
        let idx: u32 = idx.parse().map_err(|_| malformed(line, format!("bad index in `{tok}`")))?;
        let val: f64 = val.parse().map_err(|_| malformed(line, format!("bad value in `{tok}`")))?;
        if idx == 0 {
            return Err(malformed(line, "feature indices are 1-based"));
        }
        if idx <= last {
            return Err(malformed(line, format!("index {idx} does not increase (previous {last})")));
        }
        last = idx;
        entries.push((idx, val));
    }
    Ok(SparseRow { label, entries })
}

pub fn parse_libsvm<R: BufRead>(reader: R) -> Result<SparseDataset> {
    let mut rows = Vec::new();
    for (k, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        rows.push(parse_line(text, k + 1)?);
    }
    Ok(SparseDataset::new(rows)?)
}

pub fn read_libsvm(path: &Path) -> Result<SparseDataset> {
    let file = File::open(path).map_err(|source| HarnessError::File { path: path.to_owned(), source })?;
    parse_libsvm(BufReader::new(file))
}

/// Writes one line per row. Values use the shortest representation that
/// parses back to the same `f64`.
pub fn write_libsvm<W: Write>(data: &SparseDataset, mut out: W) -> std::io::Result<()> {
    for row in &data.rows {
        write!(out, "{}", row.label)?;
        for (idx, val) in &row.entries {
            write!(out, " {idx}:{val}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}
