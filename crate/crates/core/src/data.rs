//! Plain-text dataset ingestion.
//!
//! One observation per line by default. Lines starting with `#` and blank
//! lines are skipped. With a column index, each line is split on the
//! delimiter (any run of whitespace when none is given) and the 1-based
//! column is read.

use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ColumnSpec {
    /// 1-based column; `None` reads the whole line.
    pub column: Option<usize>,
    pub delimiter: Option<char>,
}

pub fn parse_values(text: &str, spec: &ColumnSpec) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let field = match spec.column {
            None => line,
            Some(0) => {
                return Err(Error::InvalidParameter("column index is 1-based".into()));
            }
            Some(k) => {
                let mut fields: Box<dyn Iterator<Item = &str>> = match spec.delimiter {
                    Some(d) => Box::new(line.split(d)),
                    None => Box::new(line.split_whitespace()),
                };
                fields.nth(k - 1).map(str::trim).ok_or_else(|| Error::Parse {
                    line: line_no,
                    message: format!("no column {k}"),
                })?
            }
        };
        let v: f64 = field.parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("not a number: '{field}'"),
        })?;
        if !v.is_finite() {
            return Err(Error::Parse { line: line_no, message: format!("non-finite value '{field}'") });
        }
        out.push(v);
    }
    if out.is_empty() {
        return Err(Error::DegenerateData("no observations found".into()));
    }
    Ok(out)
}

pub fn read_values(path: &Path, spec: &ColumnSpec) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_values(&text, spec)
}
