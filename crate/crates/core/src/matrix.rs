//! Square 0/1 matrices stored as one bit mask per row.
//!
//! Cells are addressed `(row, col)` with zero-based indices internally; row 0 is
//! the top row and column 0 the leftmost one. All text formats and diagnostics
//! use one-based positions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest side length a [`BinaryMatrix`] can hold (one `u64` per row).
pub const MAX_SIZE: usize = 64;

/// A zero-based `(row, col)` position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub const fn new(row: usize, col: usize) -> Self {
        Cell { row, col }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row + 1, self.col + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseMatrixError {
    #[error("empty input")]
    Empty,
    #[error("line {line}: expected {expected} characters, found {found} (ragged lines)")]
    Ragged {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("matrix is not square: {rows} lines of length {cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("line {line}, column {column}: illegal character {ch:?}")]
    IllegalChar {
        line: usize,
        column: usize,
        ch: char,
    },
    #[error("side length {0} exceeds the supported maximum of {MAX_SIZE}")]
    TooLarge(usize),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryMatrix {
    n: usize,
    rows: Vec<u64>,
}

impl BinaryMatrix {
    /// All-zero matrix of side `n`.
    ///
    /// Panics if `n` is zero or larger than [`MAX_SIZE`].
    pub fn zeros(n: usize) -> Self {
        assert!((1..=MAX_SIZE).contains(&n), "side length {n} out of range");
        BinaryMatrix {
            n,
            rows: vec![0; n],
        }
    }

    /// Builds a matrix from row bit masks; bit `c` of `rows[r]` is cell `(r, c)`.
    ///
    /// Returns `None` when a mask has bits outside the first `rows.len()` columns.
    pub fn from_row_masks(rows: Vec<u64>) -> Option<Self> {
        let n = rows.len();
        if n == 0 || n > MAX_SIZE {
            return None;
        }
        let full = full_mask(n);
        if rows.iter().any(|&r| r & !full != 0) {
            return None;
        }
        Some(BinaryMatrix { n, rows })
    }

    pub fn from_cells(n: usize, cells: impl IntoIterator<Item = Cell>) -> Self {
        let mut m = BinaryMatrix::zeros(n);
        for c in cells {
            m.set(c.row, c.col, true);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        debug_assert!(row < self.n && col < self.n);
        self.rows[row] >> col & 1 == 1
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        assert!(row < self.n && col < self.n, "cell out of range");
        if value {
            self.rows[row] |= 1 << col;
        } else {
            self.rows[row] &= !(1 << col);
        }
    }

    pub fn row_mask(&self, row: usize) -> u64 {
        self.rows[row]
    }

    pub fn row_masks(&self) -> &[u64] {
        &self.rows
    }

    /// Bit `r` is set iff cell `(r, col)` is set.
    pub fn col_mask(&self, col: usize) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (r, &bits)| acc | ((bits >> col & 1) << r))
    }

    pub fn count_ones(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    /// Set cells in row-major order.
    pub fn ones(&self) -> impl Iterator<Item = Cell> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, &bits)| BitIter(bits).map(move |c| Cell::new(r, c)))
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.n).map(|c| self.col_mask(c)).collect();
        BinaryMatrix { n: self.n, rows }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        self.rows.swap(a, b);
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for bits in &mut self.rows {
            let x = (*bits >> a ^ *bits >> b) & 1;
            *bits ^= (x << a) | (x << b);
        }
    }

    /// Text form: one line of `0`/`1` per row, each line newline-terminated.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.n * (self.n + 1));
        for r in 0..self.n {
            for c in 0..self.n {
                s.push(if self.get(r, c) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }

    /// Integer copy of the matrix, for exact arithmetic.
    pub fn to_integer_rows(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|r| (0..self.n).map(|c| self.get(r, c) as i64).collect())
            .collect()
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryMatrix[")?;
        for r in 0..self.n {
            if r > 0 {
                write!(f, "/")?;
            }
            for c in 0..self.n {
                write!(f, "{}", self.get(r, c) as u8)?;
            }
        }
        write!(f, "]")
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for BinaryMatrix {
    type Err = ParseMatrixError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_matrix(s)
    }
}

/// Parses the matrix text format. A single trailing newline is accepted; a
/// `\r` before each newline is ignored.
pub fn parse_matrix(text: &str) -> Result<BinaryMatrix, ParseMatrixError> {
    let lines: Vec<&str> = text
        .strip_suffix('\n')
        .unwrap_or(text)
        .split('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .collect();
    if lines.len() == 1 && lines[0].is_empty() {
        return Err(ParseMatrixError::Empty);
    }
    let width = lines[0].chars().count();
    for (i, line) in lines.iter().enumerate() {
        let found = line.chars().count();
        if found != width {
            return Err(ParseMatrixError::Ragged {
                line: i + 1,
                expected: width,
                found,
            });
        }
    }
    if width != lines.len() {
        return Err(ParseMatrixError::NotSquare {
            rows: lines.len(),
            cols: width,
        });
    }
    let n = width;
    if n > MAX_SIZE {
        return Err(ParseMatrixError::TooLarge(n));
    }
    let mut rows = vec![0u64; n];
    for (r, line) in lines.iter().enumerate() {
        for (c, ch) in line.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => rows[r] |= 1 << c,
                _ => {
                    return Err(ParseMatrixError::IllegalChar {
                        line: r + 1,
                        column: c + 1,
                        ch,
                    })
                }
            }
        }
    }
    Ok(BinaryMatrix { n, rows })
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Mask of the bits strictly below position `i`.
pub(crate) fn below(i: usize) -> u64 {
    (1u64 << i) - 1
}

/// Iterates the positions of set bits, lowest first.
#[derive(Clone, Copy)]
pub(crate) struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_single_cell() {
        let m = parse_matrix("1").unwrap();
        assert_eq!(m.size(), 1);
        assert!(m.get(0, 0));
    }

    #[test]
    fn parses_two_by_two_with_trailing_newline() {
        let m = parse_matrix("11\n10\n").unwrap();
        assert_eq!(m.size(), 2);
        assert_eq!(m.to_text(), "11\n10\n");
        assert_eq!(m.count_ones(), 3);
    }

    #[test]
    fn rejects_ragged_lines() {
        assert_eq!(
            parse_matrix("10\n1"),
            Err(ParseMatrixError::Ragged {
                line: 2,
                expected: 2,
                found: 1
            })
        );
    }

    #[test]
    fn rejects_non_square_and_illegal() {
        assert_eq!(
            parse_matrix("10\n01\n11"),
            Err(ParseMatrixError::NotSquare { rows: 3, cols: 2 })
        );
        assert_eq!(
            parse_matrix("10\n0x"),
            Err(ParseMatrixError::IllegalChar {
                line: 2,
                column: 2,
                ch: 'x'
            })
        );
        assert_eq!(parse_matrix(""), Err(ParseMatrixError::Empty));
    }

    #[test]
    fn swaps_and_transpose() {
        let mut m = parse_matrix("110\n001\n100").unwrap();
        m.swap_cols(0, 2);
        assert_eq!(m.to_text(), "011\n100\n001\n");
        m.swap_rows(0, 1);
        assert_eq!(m.to_text(), "100\n011\n001\n");
        assert_eq!(m.transpose().to_text(), "100\n010\n011\n");
        assert_eq!(m.col_mask(2), 0b110);
    }
}
