use thiserror::Error;

/// Errors from the exponent-matrix and alist text readers. Line numbers are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty input: no header line")]
    Empty,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: entry ({row}, {col}) = {value} is outside [0, {}]", .lift - 1)]
    OutOfRange {
        line: usize,
        row: usize,
        col: usize,
        value: u64,
        lift: u32,
    },
    #[error("line {line}: expected {expected} rows, found {found}")]
    RowCount {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: expected {expected} entries, found {found}")]
    ColumnCount {
        line: usize,
        expected: usize,
        found: usize,
    },
}
