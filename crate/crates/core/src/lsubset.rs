//! L-subsets and the criterion for a leaf matrix to carry exactly one CNAT.

use thiserror::Error;

use crate::matrix::Cell;
use crate::permutation::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("L-subset index {k} outside 2..={n}")]
pub struct LSubsetRangeError {
    pub n: usize,
    pub k: usize,
}

/// The `k`-th L-subset of an `n`×`n` matrix: row `k` up to column `k`
/// together with column `k` up to row `k` (one-based ordinal `k`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LSubset {
    k: usize,
    cells: Vec<Cell>,
}

impl LSubset {
    pub fn new(n: usize, k: usize) -> Result<Self, LSubsetRangeError> {
        if k < 2 || k > n {
            return Err(LSubsetRangeError { n, k });
        }
        let corner = k - 1;
        let mut cells: Vec<Cell> = (0..=corner).map(|c| Cell::new(corner, c)).collect();
        cells.extend((0..corner).rev().map(|r| Cell::new(r, corner)));
        Ok(LSubset { k, cells })
    }

    pub fn ordinal(&self) -> usize {
        self.k
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn corner(&self) -> Cell {
        Cell::new(self.k - 1, self.k - 1)
    }

    pub fn contains(&self, cell: Cell) -> bool {
        let corner = self.k - 1;
        (cell.row == corner && cell.col <= corner) || (cell.col == corner && cell.row <= corner)
    }
}

/// Convenience wrapper over [`LSubset::new`].
pub fn l_subset(n: usize, k: usize) -> Result<LSubset, LSubsetRangeError> {
    LSubset::new(n, k)
}

/// True iff `p`'s matrix has no 1 on the main diagonal, exactly one 1 in each
/// L-subset `2..n-1`, and exactly two in the last one.
pub fn is_unique_leaf_matrix(p: &Permutation) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    // Every 1 lies in the L-subset indexed by max(row, col); the diagonal ones
    // are the L corners.
    let mut counts = vec![0usize; n];
    for (col, &row) in p.as_slice().iter().enumerate() {
        if row == col {
            return false;
        }
        counts[row.max(col)] += 1;
    }
    counts[1..n - 1].iter().all(|&c| c == 1) && counts[n - 1] == 2
}
