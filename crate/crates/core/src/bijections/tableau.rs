//! Tree-like tableaux and their correspondence with upper-diagonal CNMs.
//!
//! Text format: one line per row, top to bottom, `*` for a pointed cell and
//! `.` for an empty one; rows are left-aligned and weakly decreasing.
//!
//! The map from an upper-diagonal CNM of size `n` keeps the cells strictly
//! above the anti-diagonal and deletes the point-free rows and columns. Every
//! anti-diagonal leaf `(i, n+1-i)` has its parent either to its left (row `i`
//! survives, write `R`) or above it (column `n+1-i` survives, write `C`), so
//! the CNM induces a word `w_1 ... w_n` over `{R, C}`. The surviving row of
//! the `k`-th `R` has as many cells as there are `C`s after it, which makes
//! `w` the boundary path of the tableau's shape. The inverse reads `w` back
//! off the shape and puts every cell back where it came from.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnm::{validate_cnm, Cnm};
use crate::matrix::{BinaryMatrix, Cell};
use crate::sequences::second_diagonal;

/// Largest size accepted by [`enumerate_tlts`].
pub const TLT_ENUMERATION_MAX: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableauError {
    #[error("a tableau needs at least one row")]
    Empty,
    #[error("line {line}: illegal character {ch:?}")]
    IllegalChar { line: usize, ch: char },
    #[error("row {row} is longer than the row above it")]
    NotAShape { row: usize },
    #[error("row {row} is empty")]
    EmptyRow { row: usize },
    #[error("the top-left cell holds no point")]
    MissingRoot,
    #[error("point {0} has no point to its left or above it")]
    NoPrecursor(Cell),
    #[error("point {0} has points both to its left and above it")]
    TwoPrecursors(Cell),
    #[error("row {0} holds no point")]
    PointlessRow(usize),
    #[error("column {0} holds no point")]
    PointlessColumn(usize),
    #[error("size {n} exceeds the enumeration limit of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("input is not an upper-diagonal CNM")]
    NotUpperDiagonal,
    #[error("rebuilt matrix is not a valid upper-diagonal CNM:\n{0}")]
    Reconstruction(String),
}

/// Left-aligned rows of empty (`false`) or pointed (`true`) cells.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TreeLikeTableau {
    rows: Vec<Vec<bool>>,
}

impl TreeLikeTableau {
    pub fn new(rows: Vec<Vec<bool>>) -> Result<Self, TableauError> {
        if rows.is_empty() {
            return Err(TableauError::Empty);
        }
        for (r, row) in rows.iter().enumerate() {
            if row.is_empty() {
                return Err(TableauError::EmptyRow { row: r + 1 });
            }
            if r > 0 && row.len() > rows[r - 1].len() {
                return Err(TableauError::NotAShape { row: r + 1 });
            }
        }
        if !rows[0][0] {
            return Err(TableauError::MissingRoot);
        }
        let width = rows[0].len();
        for (r, row) in rows.iter().enumerate() {
            if !row.contains(&true) {
                return Err(TableauError::PointlessRow(r + 1));
            }
            for (c, &pointed) in row.iter().enumerate() {
                if !pointed || (r, c) == (0, 0) {
                    continue;
                }
                let left = row[..c].contains(&true);
                let above = rows[..r].iter().any(|up| up[c]);
                if left == above {
                    let cell = Cell::new(r, c);
                    return Err(if left {
                        TableauError::TwoPrecursors(cell)
                    } else {
                        TableauError::NoPrecursor(cell)
                    });
                }
            }
        }
        for c in 0..width {
            if !rows.iter().any(|row| row.get(c) == Some(&true)) {
                return Err(TableauError::PointlessColumn(c + 1));
            }
        }
        Ok(TreeLikeTableau { rows })
    }

    /// Number of pointed cells.
    pub fn size(&self) -> usize {
        self.rows.iter().flatten().filter(|&&p| p).count()
    }

    /// Row lengths, top to bottom.
    pub fn shape(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }

    pub fn is_pointed(&self, cell: Cell) -> bool {
        self.rows
            .get(cell.row)
            .and_then(|r| r.get(cell.col))
            .copied()
            .unwrap_or(false)
    }

    pub fn points(&self) -> impl Iterator<Item = Cell> + '_ {
        self.rows.iter().enumerate().flat_map(|(r, row)| {
            row.iter()
                .enumerate()
                .filter(|&(_, &p)| p)
                .map(move |(c, _)| Cell::new(r, c))
        })
    }

    /// Cells with no cell below or to the right: the last cell of every row
    /// that is strictly longer than the next one.
    pub fn corners(&self) -> Vec<Cell> {
        let shape = self.shape();
        (0..shape.len())
            .filter(|&r| shape.get(r + 1).map_or(true, |&next| next < shape[r]))
            .map(|r| Cell::new(r, shape[r] - 1))
            .collect()
    }
}

/// Corners holding a point.
pub fn occupied_corners(t: &TreeLikeTableau) -> Vec<Cell> {
    t.corners()
        .into_iter()
        .filter(|&c| t.is_pointed(c))
        .collect()
}

impl fmt::Display for TreeLikeTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let line: String = row.iter().map(|&p| if p { '*' } else { '.' }).collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

impl FromStr for TreeLikeTableau {
    type Err = TableauError;

    fn from_str(s: &str) -> Result<Self, TableauError> {
        let rows = s
            .lines()
            .map(str::trim_end)
            .filter(|l| !l.is_empty())
            .enumerate()
            .map(|(i, line)| {
                line.chars()
                    .map(|ch| match ch {
                        '*' => Ok(true),
                        '.' => Ok(false),
                        ch => Err(TableauError::IllegalChar { line: i + 1, ch }),
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        TreeLikeTableau::new(rows)
    }
}

/// Where the cells of a tableau sit inside its upper-diagonal CNM.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableauEmbedding {
    pub tableau: TreeLikeTableau,
    /// CNM row of each tableau row.
    pub rows: Vec<usize>,
    /// CNM column of each tableau column.
    pub cols: Vec<usize>,
}

impl TableauEmbedding {
    pub fn cnm_cell(&self, cell: Cell) -> Cell {
        Cell::new(self.rows[cell.row], self.cols[cell.col])
    }

    pub fn tableau_cell(&self, cell: Cell) -> Option<Cell> {
        let r = self.rows.iter().position(|&x| x == cell.row)?;
        let c = self.cols.iter().position(|&x| x == cell.col)?;
        (c < self.tableau.rows[r].len()).then(|| Cell::new(r, c))
    }
}

/// Like [`udcnm_to_tlt`], also returning the row and column embedding.
pub fn udcnm_to_tlt_embedding(c: &Cnm) -> Result<TableauEmbedding, TableauError> {
    if !c.is_upper_diagonal() {
        return Err(TableauError::NotUpperDiagonal);
    }
    let n = c.size();
    if n == 1 {
        // Its tableau would have size 0.
        return Err(TableauError::Empty);
    }
    let m = c.matrix();
    // A = cells (i, j) with i + j < n - 1 (zero-based); internal vertices are
    // exactly the ones of A.
    let rows: Vec<usize> = (0..n)
        .filter(|&i| (0..n - 1 - i).any(|j| m.get(i, j)))
        .collect();
    let cols: Vec<usize> = (0..n)
        .filter(|&j| (0..n.saturating_sub(1 + j)).any(|i| m.get(i, j)))
        .collect();
    let cells = rows
        .iter()
        .map(|&i| {
            cols.iter()
                .take_while(|&&j| i + j < n - 1)
                .map(|&j| m.get(i, j))
                .collect()
        })
        .collect();
    let tableau =
        TreeLikeTableau::new(cells).map_err(|e| TableauError::Reconstruction(e.to_string()))?;
    Ok(TableauEmbedding {
        tableau,
        rows,
        cols,
    })
}

/// Keeps the internal vertices of an upper-diagonal CNM of size `n` and drops
/// the empty lines; the result has size `n - 1`.
pub fn udcnm_to_tlt(c: &Cnm) -> Result<TreeLikeTableau, TableauError> {
    Ok(udcnm_to_tlt_embedding(c)?.tableau)
}

/// The row/column word of a shape: `R C^(λ1-λ2) R C^(λ2-λ3) ... R C^(λr)`,
/// `true` for `R`.
fn boundary_word(shape: &[usize]) -> Vec<bool> {
    let mut w = Vec::new();
    for (k, &len) in shape.iter().enumerate() {
        let next = shape.get(k + 1).copied().unwrap_or(0);
        w.push(true);
        w.extend(std::iter::repeat(false).take(len - next));
    }
    w
}

/// Inverse of [`udcnm_to_tlt`].
pub fn tlt_to_udcnm(t: &TreeLikeTableau) -> Result<Cnm, TableauError> {
    let w = boundary_word(&t.shape());
    let n = w.len();
    let rows: Vec<usize> = (0..n).filter(|&i| w[i]).collect();
    // The m-th column from the left is the m-th C counted from the end.
    let cols: Vec<usize> = (0..n).rev().filter(|&i| !w[i]).map(|i| n - 1 - i).collect();
    let mut m = BinaryMatrix::zeros(n);
    for i in 0..n {
        m.set(i, n - 1 - i, true);
    }
    for cell in t.points() {
        m.set(rows[cell.row], cols[cell.col], true);
    }
    let text = m.to_text();
    let c = validate_cnm(m).map_err(|e| TableauError::Reconstruction(format!("{text}{e}")))?;
    if !c.is_upper_diagonal() {
        return Err(TableauError::Reconstruction(text));
    }
    Ok(c)
}

/// Vertices of `c` on the second diagonal, in diagonal order.
pub fn second_diagonal_vertices(c: &Cnm) -> Vec<Cell> {
    second_diagonal(c.size())
        .into_iter()
        .filter(|&cell| c.is_vertex(cell))
        .collect()
}

/// All tree-like tableaux of size `n`, sorted. Shapes have at most `n + 1`
/// rows plus columns, since the first point of every row after the first and
/// of every column after the first are distinct non-root points.
pub fn enumerate_tlts(n: usize) -> Result<Vec<TreeLikeTableau>, TableauError> {
    if n == 0 {
        return Err(TableauError::Empty);
    }
    if n > TLT_ENUMERATION_MAX {
        return Err(TableauError::TooLarge {
            n,
            max: TLT_ENUMERATION_MAX,
        });
    }
    let mut out = Vec::new();
    for rows in 1..=n {
        let max_width = n + 1 - rows;
        let mut shape = Vec::with_capacity(rows);
        shapes(rows, max_width, &mut shape, &mut |shape| {
            if shape[0] + rows <= n + 1 {
                fill(shape, n, &mut out);
            }
        });
    }
    out.sort();
    Ok(out)
}

/// Weakly decreasing sequences of `rows` positive parts, each at most `max`.
fn shapes(rows: usize, max: usize, acc: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if acc.len() == rows {
        f(acc);
        return;
    }
    for len in 1..=max {
        acc.push(len);
        shapes(rows, len, acc, f);
        acc.pop();
    }
}

struct Filler<'a> {
    shape: &'a [usize],
    cells: Vec<Vec<bool>>,
    col_has: Vec<bool>,
    target: usize,
    out: &'a mut Vec<TreeLikeTableau>,
}

impl Filler<'_> {
    fn go(&mut self, r: usize, c: usize, placed: usize) {
        if c == self.shape[r] {
            if !self.cells[r].contains(&true) {
                return;
            }
            if r + 1 == self.shape.len() {
                if placed == self.target && self.col_has.iter().all(|&x| x) {
                    self.out.push(TreeLikeTableau {
                        rows: self.cells.clone(),
                    });
                }
                return;
            }
            self.go(r + 1, 0, placed);
            return;
        }
        // Leave empty.
        self.go(r, c + 1, placed);
        if placed == self.target {
            return;
        }
        let left = self.cells[r][..c].contains(&true);
        let above = self.col_has[c];
        if (r, c) == (0, 0) || left != above {
            let had = self.col_has[c];
            self.cells[r][c] = true;
            self.col_has[c] = true;
            self.go(r, c + 1, placed + 1);
            self.cells[r][c] = false;
            self.col_has[c] = had;
        }
    }
}

fn fill(shape: &[usize], n: usize, out: &mut Vec<TreeLikeTableau>) {
    let mut f = Filler {
        shape,
        cells: shape.iter().map(|&l| vec![false; l]).collect(),
        col_has: vec![false; shape[0]],
        target: n,
        out,
    };
    // The root is mandatory.
    f.cells[0][0] = true;
    f.col_has[0] = true;
    f.go(0, 1, 1);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_cnats_with_leaf_matrix;
    use crate::matrix::parse_matrix;
    use crate::permutation::Permutation;

    #[test]
    fn parse_and_print() {
        let t: TreeLikeTableau = "**..*\n.**..\n*..*\n".parse().unwrap();
        assert_eq!(t.size(), 7);
        assert_eq!(t.shape(), vec![5, 5, 4]);
        assert_eq!(t.to_string(), "**..*\n.**..\n*..*\n");
        assert_eq!(occupied_corners(&t), vec![Cell::new(2, 3)]);
        assert_eq!(t.corners(), vec![Cell::new(1, 4), Cell::new(2, 3)]);
    }

    #[test]
    fn rejects_bad_tableaux() {
        assert_eq!(
            ".".parse::<TreeLikeTableau>(),
            Err(TableauError::MissingRoot)
        );
        assert_eq!(
            "**\n**".parse::<TreeLikeTableau>(),
            Err(TableauError::TwoPrecursors(Cell::new(1, 1)))
        );
        assert_eq!(
            "*.".parse::<TreeLikeTableau>(),
            Err(TableauError::PointlessColumn(2))
        );
        assert_eq!(
            "*\n**".parse::<TreeLikeTableau>(),
            Err(TableauError::NotAShape { row: 2 })
        );
        assert!(matches!(
            "*x".parse::<TreeLikeTableau>(),
            Err(TableauError::IllegalChar { .. })
        ));
    }

    #[test]
    fn smallest_case() {
        let c = validate_cnm(parse_matrix("11\n10").unwrap()).unwrap();
        let t = udcnm_to_tlt(&c).unwrap();
        assert_eq!(t.to_string(), "*\n");
        assert_eq!(occupied_corners(&t), vec![Cell::new(0, 0)]);
        assert_eq!(tlt_to_udcnm(&t).unwrap(), c);
    }

    #[test]
    fn counts_are_factorials() {
        let expected = [1, 2, 6, 24, 120, 720];
        for (n, &count) in (1..=6).zip(expected.iter()) {
            assert_eq!(enumerate_tlts(n).unwrap().len(), count, "n = {n}");
        }
    }

    #[test]
    fn bijection_round_trips() {
        for n in 2..=6 {
            let mut images = Vec::new();
            for c in enumerate_cnats_with_leaf_matrix(&Permutation::reversal(n)) {
                let e = udcnm_to_tlt_embedding(&c).unwrap();
                assert_eq!(e.tableau.size(), n - 1);
                assert_eq!(tlt_to_udcnm(&e.tableau).unwrap(), c);
                let diag: Vec<Cell> = second_diagonal_vertices(&c)
                    .into_iter()
                    .map(|v| e.tableau_cell(v).unwrap())
                    .collect();
                let mut corners = occupied_corners(&e.tableau);
                let mut diag_sorted = diag.clone();
                diag_sorted.sort();
                corners.sort();
                assert_eq!(diag_sorted, corners);
                images.push(e.tableau);
            }
            images.sort();
            assert_eq!(images, enumerate_tlts(n - 1).unwrap());
        }
    }

    #[test]
    fn rejects_non_upper_diagonal() {
        let c = validate_cnm(parse_matrix("111\n100\n010").unwrap()).unwrap();
        assert_eq!(udcnm_to_tlt(&c), Err(TableauError::NotUpperDiagonal));
    }
}
