//! Exponent matrices over `Z_N` and their plain-text format.
//!
//! The text format is line oriented:
//!
//! ```text
//! # comment lines start with '#'
//! m n N
//! b_00 b_01 ... b_0(n-1)
//! ...
//! b_(m-1)0 ... b_(m-1)(n-1)
//! ```
//!
//! Blank lines are ignored. Every entry must lie in `[0, N-1]`; masked
//! (infinite) entries are not representable.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ParseError;

/// A fully connected `m x n` exponent matrix with lifting degree `N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix", into = "RawMatrix")]
pub struct ExponentMatrix {
    rows: usize,
    cols: usize,
    lift: u32,
    entries: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct RawMatrix {
    rows: usize,
    cols: usize,
    lift: u32,
    entries: Vec<Vec<u32>>,
}

impl From<ExponentMatrix> for RawMatrix {
    fn from(b: ExponentMatrix) -> Self {
        RawMatrix {
            rows: b.rows,
            cols: b.cols,
            lift: b.lift,
            entries: b.row_vecs(),
        }
    }
}

impl TryFrom<RawMatrix> for ExponentMatrix {
    type Error = MatrixError;

    fn try_from(raw: RawMatrix) -> Result<Self, Self::Error> {
        let m = ExponentMatrix::from_rows(raw.lift, &raw.entries)?;
        if m.rows != raw.rows || m.cols != raw.cols {
            return Err(MatrixError::Shape {
                rows: raw.rows,
                cols: raw.cols,
            });
        }
        Ok(m)
    }
}

/// Construction errors for [`ExponentMatrix`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("matrix must have at least one row and one column (got {rows}x{cols})")]
    Shape { rows: usize, cols: usize },
    #[error("lifting degree must be at least 2 (got {0})")]
    Lift(u32),
    #[error("entry ({row}, {col}) = {value} is outside [0, {max}]", row = .row + 1, col = .col + 1, max = .lift - 1)]
    OutOfRange {
        row: usize,
        col: usize,
        value: u64,
        lift: u32,
    },
    #[error("ragged rows: row {row} has {len} entries, expected {expected}", row = .row + 1)]
    Ragged {
        row: usize,
        len: usize,
        expected: usize,
    },
}

impl ExponentMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, lift: u32, entries: Vec<u32>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(MatrixError::Shape { rows, cols });
        }
        if lift < 2 {
            return Err(MatrixError::Lift(lift));
        }
        if let Some(pos) = entries.iter().position(|&v| v >= lift) {
            return Err(MatrixError::OutOfRange {
                row: pos / cols,
                col: pos % cols,
                value: entries[pos] as u64,
                lift,
            });
        }
        Ok(ExponentMatrix {
            rows,
            cols,
            lift,
            entries,
        })
    }

    pub fn from_rows<R: AsRef<[u32]>>(lift: u32, rows: &[R]) -> Result<Self, MatrixError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(MatrixError::Ragged {
                    row: i,
                    len: r.len(),
                    expected: cols,
                });
            }
            entries.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, lift, entries)
    }

    /// Expands a `(m-1) x (n-1)` block into the normalized `m x n` matrix
    /// whose first row and first column are zero.
    pub fn normalized_from_block<R: AsRef<[u32]>>(lift: u32, block: &[R]) -> Result<Self, MatrixError> {
        let inner = block.first().map_or(0, |r| r.as_ref().len());
        let mut rows = vec![vec![0u32; inner + 1]];
        for r in block {
            let mut row = Vec::with_capacity(inner + 1);
            row.push(0);
            row.extend_from_slice(r.as_ref());
            rows.push(row);
        }
        Self::from_rows(lift, &rows)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Lifting degree `N`.
    #[inline]
    pub fn lift(&self) -> u32 {
        self.lift
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.entries[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[u32] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Returns a copy with one entry replaced (reduced mod `N`).
    pub fn with_entry(&self, row: usize, col: usize, value: u64) -> Self {
        let mut out = self.clone();
        out.entries[row * self.cols + col] = (value % self.lift as u64) as u32;
        out
    }

    /// True when the first row and first column are all zero.
    pub fn is_normalized(&self) -> bool {
        self.row(0).iter().all(|&v| v == 0) && (0..self.rows).all(|i| self.get(i, 0) == 0)
    }

    /// Difference `b[row][c1] - b[row][c2]` reduced into `[0, N)`.
    #[inline]
    pub fn diff(&self, row: usize, c1: usize, c2: usize) -> u32 {
        let n = self.lift;
        (self.get(row, c1) + n - self.get(row, c2)) % n
    }
}

impl fmt::Display for ExponentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.rows, self.cols, self.lift)?;
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(u32::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for ExponentMatrix {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_exponent_matrix(s)
    }
}

fn parse_numbers(line: &str, lineno: usize) -> Result<Vec<u64>, ParseError> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<u64>().map_err(|_| ParseError::Syntax {
                line: lineno,
                message: format!("'{tok}' is not a non-negative decimal integer"),
            })
        })
        .collect()
}

/// Parses the exponent-matrix text format. Errors carry 1-based line numbers.
pub fn parse_exponent_matrix(text: &str) -> Result<ExponentMatrix, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(ParseError::Empty)?;
    let header = parse_numbers(header, hline)?;
    let [m, n, lift] = header[..] else {
        return Err(ParseError::Syntax {
            line: hline,
            message: format!("header must be \"m n N\", found {} fields", header.len()),
        });
    };
    if m == 0 || n == 0 {
        return Err(ParseError::Syntax {
            line: hline,
            message: "m and n must be positive".into(),
        });
    }
    if !(2..=u32::MAX as u64).contains(&lift) {
        return Err(ParseError::Syntax {
            line: hline,
            message: format!("lifting degree {lift} must be at least 2"),
        });
    }
    let (m, n, lift) = (m as usize, n as usize, lift as u32);

    let mut entries = Vec::with_capacity(m * n);
    let mut last_line = hline;
    for row in 0..m {
        let Some((lineno, line)) = lines.next() else {
            return Err(ParseError::RowCount {
                line: last_line,
                expected: m,
                found: row,
            });
        };
        last_line = lineno;
        let values = parse_numbers(line, lineno)?;
        if values.len() != n {
            return Err(ParseError::ColumnCount {
                line: lineno,
                expected: n,
                found: values.len(),
            });
        }
        for (col, v) in values.into_iter().enumerate() {
            if v >= lift as u64 {
                return Err(ParseError::OutOfRange {
                    line: lineno,
                    row: row + 1,
                    col: col + 1,
                    value: v,
                    lift,
                });
            }
            entries.push(v as u32);
        }
    }
    if let Some((lineno, _)) = lines.next() {
        return Err(ParseError::RowCount {
            line: lineno,
            expected: m,
            found: m + 1,
        });
    }
    ExponentMatrix::new(m, n, lift, entries).map_err(|e| ParseError::Syntax {
        line: hline,
        message: e.to_string(),
    })
}
