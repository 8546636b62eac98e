//! Reduction of a CNM to upper-diagonal form by row and column swaps, every
//! intermediate matrix being a CNM.
//!
//! 1. The leaf of the first column is alone in its row; adjacent row swaps
//!    carry that row to the bottom.
//! 2. Without the first column the tree falls apart into the right subtrees
//!    of the first-column vertices. They use disjoint rows and columns, never
//!    the first column, and each is reduced recursively on its own flattened
//!    matrix; swaps are translated back through the sorted row and column
//!    lists (so a translated swap need not be adjacent in the full grid).
//! 3. For rows `n-1, n-2, ..., 1` in turn, adjacent column swaps move the
//!    row's leaf left into column `n+1-row`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnm::{is_cnm, validate_cnm, Cnm, ValidationError};
use crate::matrix::{BinaryMatrix, BitIter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SwapKind {
    Row,
    Col,
}

/// Exchange of two rows or two columns; indices are zero-based and printed
/// one-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Swap {
    pub kind: SwapKind,
    pub i: usize,
    pub j: usize,
}

impl Swap {
    pub fn row(i: usize, j: usize) -> Self {
        Swap {
            kind: SwapKind::Row,
            i,
            j,
        }
    }

    pub fn col(i: usize, j: usize) -> Self {
        Swap {
            kind: SwapKind::Col,
            i,
            j,
        }
    }

    fn apply_rows(&self, rows: &mut [u64]) {
        match self.kind {
            SwapKind::Row => rows.swap(self.i, self.j),
            SwapKind::Col => {
                let (a, b) = (self.i, self.j);
                for r in rows.iter_mut() {
                    let (x, y) = (*r >> a & 1, *r >> b & 1);
                    if x != y {
                        *r ^= (1 << a) | (1 << b);
                    }
                }
            }
        }
    }
}

impl fmt::Display for Swap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind {
            SwapKind::Row => 'R',
            SwapKind::Col => 'C',
        };
        write!(f, "{tag} {} {}", self.i + 1, self.j + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("swap index {index} outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("line {line}: cannot parse {text:?} as a swap")]
    BadTraceLine { line: usize, text: String },
    #[error("step {step} ({swap}) leaves an invalid matrix:\n{matrix}{reason}")]
    InvalidIntermediate {
        step: usize,
        swap: Swap,
        matrix: String,
        reason: String,
    },
    #[error("reduction ended on a matrix that is not upper-diagonal:\n{0}")]
    NotUpperDiagonal(String),
    #[error("leaf of row {row} sits left of its target column {target}")]
    LeafLeftOfTarget { row: usize, target: usize },
}

/// Swaps in order, with optional snapshots of the matrix after each one.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapTrace {
    pub steps: Vec<Swap>,
    #[serde(skip)]
    pub snapshots: Option<Vec<BinaryMatrix>>,
}

impl SwapTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

impl fmt::Display for SwapTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for SwapTrace {
    type Err = ReduceError;

    fn from_str(s: &str) -> Result<Self, ReduceError> {
        let mut steps = Vec::new();
        for (line, text) in s.lines().enumerate() {
            let text = text.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let bad = || ReduceError::BadTraceLine {
                line: line + 1,
                text: text.to_string(),
            };
            let parts: Vec<&str> = text.split_whitespace().collect();
            let [tag, i, j] = parts[..] else {
                return Err(bad());
            };
            let i: usize = i.parse().map_err(|_| bad())?;
            let j: usize = j.parse().map_err(|_| bad())?;
            if i == 0 || j == 0 {
                return Err(bad());
            }
            let swap = match tag {
                "R" | "r" => Swap::row(i - 1, j - 1),
                "C" | "c" => Swap::col(i - 1, j - 1),
                _ => return Err(bad()),
            };
            steps.push(swap);
        }
        Ok(SwapTrace {
            steps,
            snapshots: None,
        })
    }
}

fn check_index(swap: Swap, n: usize) -> Result<(), ReduceError> {
    for index in [swap.i, swap.j] {
        if index >= n {
            return Err(ReduceError::IndexOutOfRange {
                index: index + 1,
                n,
            });
        }
    }
    Ok(())
}

/// Exchanges two rows or columns of `m`; the flag tells whether the result
/// is still a CNM.
pub fn apply_swap(m: &BinaryMatrix, swap: Swap) -> Result<(BinaryMatrix, bool), ReduceError> {
    check_index(swap, m.size())?;
    let mut rows = m.row_masks().to_vec();
    swap.apply_rows(&mut rows);
    let valid = is_cnm(&rows);
    Ok((
        BinaryMatrix::from_row_masks(rows).expect("same size"),
        valid,
    ))
}

/// Re-applies `trace` to `m`, validating after every step. Returns the final
/// matrix as a CNM.
pub fn replay(m: &BinaryMatrix, trace: &SwapTrace) -> Result<Cnm, ReduceError> {
    let mut current = m.clone();
    for (step, &swap) in trace.steps.iter().enumerate() {
        let (next, _) = apply_swap(&current, swap)?;
        if let Err(e) = validate_cnm(next.clone()) {
            return Err(invalid(step, swap, &next, &e));
        }
        current = next;
    }
    validate_cnm(current.clone()).map_err(|e| ReduceError::InvalidIntermediate {
        step: 0,
        swap: Swap::row(0, 0),
        matrix: current.to_text(),
        reason: e.to_string(),
    })
}

fn invalid(step: usize, swap: Swap, m: &BinaryMatrix, e: &ValidationError) -> ReduceError {
    ReduceError::InvalidIntermediate {
        step: step + 1,
        swap,
        matrix: m.to_text(),
        reason: e.to_string(),
    }
}

/// Rightmost vertex of each row: the leaf column of that row.
fn leaf_col(rows: &[u64], r: usize) -> usize {
    63 - rows[r].leading_zeros() as usize
}

fn nearest_right(rows: &[u64], r: usize, c: usize) -> Option<usize> {
    let rest = rows[r].checked_shr((c + 1) as u32).unwrap_or(0);
    (rest != 0).then(|| c + 1 + rest.trailing_zeros() as usize)
}

fn nearest_below(rows: &[u64], r: usize, c: usize) -> Option<usize> {
    (r + 1..rows.len()).find(|&i| rows[i] >> c & 1 == 1)
}

/// Row and column sets of the subtree rooted at `(r, c)`.
fn subtree_lines(rows: &[u64], r: usize, c: usize) -> (Vec<usize>, Vec<usize>) {
    let n = rows.len();
    let mut in_row = vec![false; n];
    let mut in_col = vec![false; n];
    let mut stack = vec![(r, c)];
    while let Some((r, c)) = stack.pop() {
        in_row[r] = true;
        in_col[c] = true;
        if let Some(rc) = nearest_right(rows, r, c) {
            stack.push((r, rc));
        }
        if let Some(br) = nearest_below(rows, r, c) {
            stack.push((br, c));
        }
    }
    let pick = |v: Vec<bool>| {
        v.iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
            .collect()
    };
    (pick(in_row), pick(in_col))
}

fn extract(rows: &[u64], row_list: &[usize], col_list: &[usize]) -> Vec<u64> {
    row_list
        .iter()
        .map(|&r| {
            col_list
                .iter()
                .enumerate()
                .filter(|&(_, &c)| rows[r] >> c & 1 == 1)
                .fold(0u64, |acc, (k, _)| acc | 1 << k)
        })
        .collect()
}

/// Plans the swaps for a CNM given by row masks, applying them to `rows` as
/// it goes.
fn plan(rows: &mut [u64], out: &mut Vec<Swap>) -> Result<(), ReduceError> {
    let n = rows.len();
    if n <= 1 {
        return Ok(());
    }
    let push = |rows: &mut [u64], swap: Swap, out: &mut Vec<Swap>| {
        swap.apply_rows(rows);
        out.push(swap);
    };

    // 1. Send the first column's leaf to the bottom row.
    let k = (0..n)
        .rev()
        .find(|&r| rows[r] & 1 == 1)
        .expect("column 1 has a leaf");
    for r in k..n - 1 {
        push(rows, Swap::row(r, r + 1), out);
    }

    // 2. Reduce each subtree hanging to the right of a first-column vertex.
    for r in 0..n - 1 {
        if rows[r] & 1 == 0 {
            continue;
        }
        let c = nearest_right(rows, r, 0).expect("internal first-column vertex has a right child");
        let (row_list, col_list) = subtree_lines(rows, r, c);
        let mut sub = extract(rows, &row_list, &col_list);
        let mut sub_swaps = Vec::new();
        plan(&mut sub, &mut sub_swaps)?;
        for s in sub_swaps {
            let translated = match s.kind {
                SwapKind::Row => Swap::row(row_list[s.i], row_list[s.j]),
                SwapKind::Col => Swap::col(col_list[s.i], col_list[s.j]),
            };
            push(rows, translated, out);
        }
    }

    // 3. Interweave: row n-2 gets its leaf into column 1, row n-3 into
    //    column 2, and so on (zero-based).
    for r in (0..n - 1).rev() {
        let target = n - 1 - r;
        let d = leaf_col(rows, r);
        if d < target {
            return Err(ReduceError::LeafLeftOfTarget {
                row: r + 1,
                target: target + 1,
            });
        }
        for c in (target..d).rev() {
            push(rows, Swap::col(c, c + 1), out);
        }
    }
    Ok(())
}

fn reduce(c: &Cnm, keep_snapshots: bool) -> Result<(SwapTrace, Cnm), ReduceError> {
    let mut planned = c.matrix().row_masks().to_vec();
    let mut steps = Vec::new();
    plan(&mut planned, &mut steps)?;

    let mut rows = c.matrix().row_masks().to_vec();
    let mut snapshots = keep_snapshots.then(Vec::new);
    for (step, &swap) in steps.iter().enumerate() {
        swap.apply_rows(&mut rows);
        if !is_cnm(&rows) {
            let m = BinaryMatrix::from_row_masks(rows).expect("same size");
            let e = validate_cnm(m.clone()).expect_err("fast check failed");
            return Err(invalid(step, swap, &m, &e));
        }
        if let Some(s) = snapshots.as_mut() {
            s.push(BinaryMatrix::from_row_masks(rows.clone()).expect("same size"));
        }
    }
    debug_assert_eq!(rows, planned);
    let m = BinaryMatrix::from_row_masks(rows).expect("same size");
    let out = validate_cnm(m).expect("checked above");
    if !out.is_upper_diagonal() {
        return Err(ReduceError::NotUpperDiagonal(out.matrix().to_text()));
    }
    Ok((SwapTrace { steps, snapshots }, out))
}

/// Reduces `c` to an upper-diagonal CNM. Every intermediate matrix is checked;
/// an invalid one is reported as an error (it would contradict the theorem
/// this follows).
pub fn reduce_to_upper_diagonal(c: &Cnm) -> Result<(SwapTrace, Cnm), ReduceError> {
    reduce(c, false)
}

/// As [`reduce_to_upper_diagonal`], keeping a snapshot after every swap.
pub fn reduce_with_snapshots(c: &Cnm) -> Result<(SwapTrace, Cnm), ReduceError> {
    reduce(c, true)
}

/// Number of first-column subtrees, i.e. the components left after deleting
/// the first column once its leaf is at the bottom.
pub fn first_column_components(c: &Cnm) -> usize {
    let rows = c.matrix().row_masks();
    BitIter(c.matrix().col_mask(0))
        .filter(|&r| rows[r] != 1)
        .count()
}
