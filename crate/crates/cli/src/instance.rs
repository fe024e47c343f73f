//! Plain-text instance files.
//!
//! ```text
//! # r=2
//! # k=3
//! # pattern=01;11
//! 3 4
//! 0101
//! 1100
//! 0011
//! ```
//!
//! Comment lines of the form `# key=value` may precede the header and are
//! kept in key order; other `#` lines and blank lines are ignored.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use binapprox::pmatrix::PatternMatrix;
use binapprox::{BinaryMatrix, BitVector};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub matrix: BinaryMatrix,
    pub meta: BTreeMap<String, String>,
}

impl InstanceFile {
    pub fn new(matrix: BinaryMatrix) -> Self {
        InstanceFile { matrix, meta: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.insert(key.to_string(), value.to_string());
        self
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        std::fs::read_to_string(path)?.parse()
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        std::fs::write(path, self.to_string())?;
        Ok(())
    }

    /// Numeric metadata value, if present.
    pub fn usize_meta(&self, key: &str) -> CliResult<Option<usize>> {
        self.meta
            .get(key)
            .map(|v| v.parse().map_err(|_| CliError::Parse(format!("{key}={v} is not a number"))))
            .transpose()
    }

    pub fn pattern_meta(&self) -> CliResult<Option<PatternMatrix>> {
        self.meta.get("pattern").map(|p| parse_pattern(p)).transpose()
    }
}

/// Parses `01;11` style rows separated by semicolons.
pub fn parse_pattern(text: &str) -> CliResult<PatternMatrix> {
    let rows: Vec<&str> = text.split(';').map(str::trim).collect();
    let matrix = BinaryMatrix::parse_rows(&rows).map_err(|e| CliError::Parse(format!("pattern {text}: {e}")))?;
    PatternMatrix::new(matrix).map_err(|e| CliError::Parse(format!("pattern {text}: {e}")))
}

pub fn format_pattern(p: &PatternMatrix) -> String {
    p.matrix().rows().iter().map(ToString::to_string).collect::<Vec<_>>().join(";")
}

impl FromStr for InstanceFile {
    type Err = CliError;

    fn from_str(text: &str) -> CliResult<Self> {
        let mut meta = BTreeMap::new();
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = loop {
            let Some(line) = lines.next() else {
                return Err(CliError::Parse("missing header line".into()));
            };
            if let Some(comment) = line.strip_prefix('#') {
                if let Some((key, value)) = comment.split_once('=') {
                    meta.insert(key.trim().to_string(), value.trim().to_string());
                }
                continue;
            }
            break line;
        };
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| CliError::Parse(format!("bad header {header:?}"))))
            .collect::<CliResult<_>>()?;
        let [m, n] = dims[..] else {
            return Err(CliError::Parse(format!("header {header:?} must be \"m n\"")));
        };
        let rows: Vec<&str> = lines.filter(|l| !l.starts_with('#')).collect();
        if rows.len() != m {
            return Err(CliError::Parse(format!("expected {m} rows, found {}", rows.len())));
        }
        let rows = rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                if row.len() != n {
                    return Err(CliError::Parse(format!("row {i} has length {}, expected {n}", row.len())));
                }
                BitVector::parse(row).map_err(|e| CliError::Parse(format!("row {i}: {e}")))
            })
            .collect::<CliResult<Vec<_>>>()?;
        let matrix = BinaryMatrix::from_rows(n, rows).map_err(|e| CliError::Parse(e.to_string()))?;
        Ok(InstanceFile { matrix, meta })
    }
}

impl fmt::Display for InstanceFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (key, value) in &self.meta {
            writeln!(f, "# {key}={value}")?;
        }
        let (m, n) = self.matrix.shape();
        writeln!(f, "{m} {n}")?;
        for row in self.matrix.rows() {
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}
