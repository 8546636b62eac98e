//! Complete non-ambiguous matrices and the four axioms that define them.
//!
//! A vertex is any set cell. Its *precursors* are the set cells strictly above
//! it in its column or strictly left of it in its row. The parent of a
//! non-root vertex is the nearest precursor; its children are therefore the
//! nearest vertex to its right and the nearest vertex below it, when those
//! vertices do not have the other kind of precursor too.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{below, BinaryMatrix, BitIter, Cell};
use crate::permutation::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axiom {
    Root,
    NonAmbiguity,
    Minimality,
    Completeness,
}

impl Axiom {
    pub fn code(self) -> &'static str {
        match self {
            Axiom::Root => "root",
            Axiom::NonAmbiguity => "non-ambiguity",
            Axiom::Minimality => "minimality",
            Axiom::Completeness => "completeness",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    MissingRoot,
    NoPrecursor(Cell),
    TwoPrecursors(Cell),
    EmptyRow(usize),
    EmptyColumn(usize),
    ChildCount { cell: Cell, children: usize },
}

impl Violation {
    pub fn axiom(&self) -> Axiom {
        match self {
            Violation::MissingRoot => Axiom::Root,
            Violation::NoPrecursor(_) | Violation::TwoPrecursors(_) => Axiom::NonAmbiguity,
            Violation::EmptyRow(_) | Violation::EmptyColumn(_) => Axiom::Minimality,
            Violation::ChildCount { .. } => Axiom::Completeness,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] ", self.axiom().code())?;
        match self {
            Violation::MissingRoot => write!(f, "cell (1,1) is not a vertex"),
            Violation::NoPrecursor(c) => write!(f, "vertex {c} has no precursor"),
            Violation::TwoPrecursors(c) => {
                write!(f, "vertex {c} has a precursor above and one to the left")
            }
            Violation::EmptyRow(r) => write!(f, "row {} is empty", r + 1),
            Violation::EmptyColumn(c) => write!(f, "column {} is empty", c + 1),
            Violation::ChildCount { cell, children } => {
                write!(
                    f,
                    "vertex {cell} has {children} child(ren), expected 0 or 2"
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not a complete non-ambiguous matrix: {}", summary(.violations))]
pub struct ValidationError {
    pub violations: Vec<Violation>,
}

impl ValidationError {
    pub fn violates(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom() == axiom)
    }
}

fn summary(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VertexKind {
    Leaf,
    Internal,
}

/// A validated complete non-ambiguous matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cnm {
    matrix: BinaryMatrix,
    /// Column of the unique leaf in each row.
    leaf_col: Vec<usize>,
}

impl Cnm {
    pub fn matrix(&self) -> &BinaryMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> BinaryMatrix {
        self.matrix
    }

    pub fn size(&self) -> usize {
        self.matrix.size()
    }

    pub fn is_vertex(&self, cell: Cell) -> bool {
        self.matrix.get(cell.row, cell.col)
    }

    pub fn kind(&self, cell: Cell) -> Option<VertexKind> {
        if !self.is_vertex(cell) {
            None
        } else if self.leaf_col[cell.row] == cell.col {
            Some(VertexKind::Leaf)
        } else {
            Some(VertexKind::Internal)
        }
    }

    /// Nearest precursor of a non-root vertex.
    pub fn parent(&self, cell: Cell) -> Option<Cell> {
        if !self.is_vertex(cell) || cell == Cell::new(0, 0) {
            return None;
        }
        let left = self.matrix.row_mask(cell.row) & below(cell.col);
        if left != 0 {
            return Some(Cell::new(cell.row, 63 - left.leading_zeros() as usize));
        }
        let above = self.matrix.col_mask(cell.col) & below(cell.row);
        Some(Cell::new(63 - above.leading_zeros() as usize, cell.col))
    }

    /// Right child then down child, for an internal vertex; empty for a leaf.
    pub fn children(&self, cell: Cell) -> Vec<Cell> {
        if self.kind(cell) != Some(VertexKind::Internal) {
            return Vec::new();
        }
        let right = self.matrix.row_mask(cell.row) >> cell.col >> 1;
        let down = self.matrix.col_mask(cell.col) >> cell.row >> 1;
        vec![
            Cell::new(cell.row, cell.col + 1 + right.trailing_zeros() as usize),
            Cell::new(cell.row + 1 + down.trailing_zeros() as usize, cell.col),
        ]
    }

    /// Leaves in row order.
    pub fn leaves(&self) -> impl Iterator<Item = Cell> + '_ {
        self.leaf_col
            .iter()
            .enumerate()
            .map(|(r, &c)| Cell::new(r, c))
    }

    pub fn internal_vertices(&self) -> impl Iterator<Item = Cell> + '_ {
        self.matrix
            .ones()
            .filter(move |c| self.leaf_col[c.row] != c.col)
    }

    /// The matrix with every internal vertex cleared.
    pub fn leaf_matrix(&self) -> BinaryMatrix {
        BinaryMatrix::from_cells(self.size(), self.leaves())
    }

    pub fn associated_permutation(&self) -> Permutation {
        let mut map = vec![0; self.size()];
        for leaf in self.leaves() {
            map[leaf.col] = leaf.row;
        }
        Permutation::from_map(map).expect("leaves form a permutation")
    }

    /// True iff the leaf matrix is the anti-diagonal.
    pub fn is_upper_diagonal(&self) -> bool {
        let n = self.size();
        self.leaf_col
            .iter()
            .enumerate()
            .all(|(r, &c)| r + c == n - 1)
    }
}

impl fmt::Display for Cnm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.matrix.fmt(f)
    }
}

impl TryFrom<BinaryMatrix> for Cnm {
    type Error = ValidationError;

    fn try_from(m: BinaryMatrix) -> Result<Self, Self::Error> {
        validate_cnm(m)
    }
}

/// Fast membership test on row masks of an `n`×`n` matrix.
pub fn is_cnm(rows: &[u64]) -> bool {
    let n = rows.len();
    if n == 0 || rows[0] & 1 == 0 {
        return false;
    }
    let mut cols = [0u64; 64];
    for (r, &bits) in rows.iter().enumerate() {
        if bits == 0 {
            return false;
        }
        for c in BitIter(bits) {
            cols[c] |= 1 << r;
        }
    }
    if cols[..n].contains(&0) {
        return false;
    }
    for (r, &bits) in rows.iter().enumerate() {
        for c in BitIter(bits) {
            if r == 0 && c == 0 {
                continue;
            }
            let left = bits & below(c) != 0;
            let above = cols[c] & below(r) != 0;
            if left == above {
                return false;
            }
            let right = bits >> c >> 1 != 0;
            let down = cols[c] >> r >> 1 != 0;
            if right != down {
                return false;
            }
        }
    }
    // The root's children.
    (rows[0] >> 1 != 0) == (cols[0] >> 1 != 0)
}

/// Checks all four axioms and reports every violation found.
pub fn validate_cnm(m: BinaryMatrix) -> Result<Cnm, ValidationError> {
    if is_cnm(m.row_masks()) {
        let leaf_col = m
            .row_masks()
            .iter()
            .map(|&bits| 63 - bits.leading_zeros() as usize)
            .collect();
        return Ok(Cnm {
            matrix: m,
            leaf_col,
        });
    }
    Err(ValidationError {
        violations: diagnose(&m),
    })
}

fn diagnose(m: &BinaryMatrix) -> Vec<Violation> {
    let n = m.size();
    let cols: Vec<u64> = (0..n).map(|c| m.col_mask(c)).collect();
    let mut out = Vec::new();
    if !m.get(0, 0) {
        out.push(Violation::MissingRoot);
    }
    // Parent of each vertex when it has exactly one kind of precursor.
    let mut children = vec![vec![0usize; n]; n];
    for cell in m.ones() {
        let Cell { row: r, col: c } = cell;
        if r == 0 && c == 0 {
            continue;
        }
        let left = m.row_mask(r) & below(c);
        let above = cols[c] & below(r);
        match (left != 0, above != 0) {
            (false, false) => out.push(Violation::NoPrecursor(cell)),
            (true, true) => out.push(Violation::TwoPrecursors(cell)),
            (true, false) => children[r][63 - left.leading_zeros() as usize] += 1,
            (false, true) => children[63 - above.leading_zeros() as usize][c] += 1,
        }
    }
    for r in 0..n {
        if m.row_mask(r) == 0 {
            out.push(Violation::EmptyRow(r));
        }
    }
    for (c, &bits) in cols.iter().enumerate() {
        if bits == 0 {
            out.push(Violation::EmptyColumn(c));
        }
    }
    for cell in m.ones() {
        let k = children[cell.row][cell.col];
        if k == 1 || k > 2 {
            out.push(Violation::ChildCount { cell, children: k });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::parse_matrix;

    fn m(text: &str) -> BinaryMatrix {
        parse_matrix(text).unwrap()
    }

    #[test]
    fn single_cell_is_valid_with_one_leaf() {
        let c = validate_cnm(m("1")).unwrap();
        assert_eq!(c.leaves().count(), 1);
        assert_eq!(c.internal_vertices().count(), 0);
        assert_eq!(c.kind(Cell::new(0, 0)), Some(VertexKind::Leaf));
    }

    #[test]
    fn only_two_by_two_cnm() {
        let valid: Vec<_> = (0u64..16)
            .filter_map(|bits| BinaryMatrix::from_row_masks(vec![bits & 3, bits >> 2]))
            .filter(|x| validate_cnm(x.clone()).is_ok())
            .collect();
        assert_eq!(valid, vec![m("11\n10")]);
        let c = validate_cnm(m("11\n10")).unwrap();
        assert_eq!(
            c.children(Cell::new(0, 0)),
            vec![Cell::new(0, 1), Cell::new(1, 0)]
        );
        assert_eq!(c.parent(Cell::new(1, 0)), Some(Cell::new(0, 0)));
    }

    #[test]
    fn identity_two_has_no_precursor_at_corner() {
        let err = validate_cnm(m("10\n01")).unwrap_err();
        assert!(err
            .violations
            .contains(&Violation::NoPrecursor(Cell::new(1, 1))));
        assert!(err.violates(Axiom::NonAmbiguity));
        assert!(!err.violates(Axiom::Completeness));
    }

    #[test]
    fn reports_every_axiom() {
        let err = validate_cnm(m("000\n011\n000")).unwrap_err();
        for axiom in [Axiom::Root, Axiom::NonAmbiguity, Axiom::Minimality] {
            assert!(err.violates(axiom), "{axiom:?} missing from {err}");
        }
        let err = validate_cnm(m("111\n100\n100")).unwrap_err();
        assert_eq!(
            err.violations,
            vec![
                Violation::ChildCount {
                    cell: Cell::new(0, 1),
                    children: 1
                },
                Violation::ChildCount {
                    cell: Cell::new(1, 0),
                    children: 1
                }
            ]
        );
        let err = validate_cnm(m("11\n11")).unwrap_err();
        assert_eq!(
            err.violations,
            vec![Violation::TwoPrecursors(Cell::new(1, 1))]
        );
    }

    #[test]
    fn fast_check_agrees_with_diagnosis_on_all_3x3() {
        for bits in 0u64..512 {
            let mat =
                BinaryMatrix::from_row_masks(vec![bits & 7, bits >> 3 & 7, bits >> 6]).unwrap();
            assert_eq!(
                is_cnm(mat.row_masks()),
                diagnose(&mat).is_empty(),
                "{mat:?}"
            );
        }
    }

    #[test]
    fn parent_and_children_are_consistent() {
        let c = validate_cnm(m("111\n010\n100")).unwrap();
        for v in c.internal_vertices() {
            for child in c.children(v) {
                assert_eq!(c.parent(child), Some(v));
            }
        }
        assert!(c.is_upper_diagonal());
        assert_eq!(c.associated_permutation(), Permutation::reversal(3));
    }
}
