//! Permutations stored in one-line form under the column→row convention:
//! `map[col] = row` locates the unique 1 of column `col` in a permutation
//! matrix. Indices are zero-based; [`Permutation::one_line`] and the cycle
//! notation helpers print one-based letters.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{BinaryMatrix, Cell, MAX_SIZE};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermutationError {
    #[error("a permutation needs at least one letter")]
    Empty,
    #[error("value {value} at position {position} is out of range 1..={n}")]
    OutOfRange {
        position: usize,
        value: usize,
        n: usize,
    },
    #[error("value {0} appears more than once")]
    Repeated(usize),
    #[error("could not parse {0:?} as a letter")]
    BadToken(String),
    #[error("matrix is not a permutation matrix")]
    NotPermutationMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from a zero-based image vector.
    pub fn from_map(map: Vec<usize>) -> Result<Self, PermutationError> {
        let n = map.len();
        if n == 0 {
            return Err(PermutationError::Empty);
        }
        let mut seen = vec![false; n];
        for (position, &v) in map.iter().enumerate() {
            if v >= n {
                return Err(PermutationError::OutOfRange {
                    position: position + 1,
                    value: v + 1,
                    n,
                });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(PermutationError::Repeated(v + 1));
            }
        }
        Ok(Permutation { map })
    }

    /// Builds a permutation from one-based letters, e.g. `[3, 1, 2]`.
    pub fn from_one_line(word: &[usize]) -> Result<Self, PermutationError> {
        let n = word.len();
        let mut map = Vec::with_capacity(n);
        for (position, &v) in word.iter().enumerate() {
            if v == 0 || v > n {
                return Err(PermutationError::OutOfRange {
                    position: position + 1,
                    value: v,
                    n,
                });
            }
            map.push(v - 1);
        }
        Self::from_map(map)
    }

    /// Parses a one-line word of one-based letters separated by whitespace
    /// and/or commas.
    pub fn parse_one_line(text: &str) -> Result<Self, PermutationError> {
        let word = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| PermutationError::BadToken(t.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_one_line(&word)
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1);
        Permutation {
            map: (0..n).collect(),
        }
    }

    /// The order-reversing permutation `(n, n-1, ..., 1)`; its matrix is the
    /// anti-diagonal.
    pub fn reversal(n: usize) -> Self {
        assert!(n >= 1);
        Permutation {
            map: (0..n).rev().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Row holding the 1 of column `col`.
    pub fn image(&self, col: usize) -> usize {
        self.map[col]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    /// One-based one-line word.
    pub fn one_line(&self) -> Vec<usize> {
        self.map.iter().map(|&v| v + 1).collect()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { map: inv }
    }

    /// Cycles of length at least two, each starting at its smallest letter,
    /// ordered by that letter. Zero-based.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.map[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.map[x];
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Cycle notation such as `(13)(254)`. Letters are separated by spaces once
    /// some letter needs two digits; the identity prints as `()`.
    pub fn cycle_notation(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        let sep = if self.len() >= 10 { " " } else { "" };
        cycles
            .iter()
            .map(|c| {
                let body: Vec<String> = c.iter().map(|v| (v + 1).to_string()).collect();
                format!("({})", body.join(sep))
            })
            .collect()
    }

    /// Sign via cycle parity: `+1` for even, `-1` for odd permutations.
    pub fn sign(&self) -> i8 {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// True iff no proper prefix `{1..j}` with `1 <= j < n` is mapped onto itself.
    pub fn is_irreducible(&self) -> bool {
        let mut max = 0;
        for (j, &v) in self.map.iter().enumerate().take(self.len() - 1) {
            max = max.max(v);
            if max == j {
                return false;
            }
        }
        true
    }

    pub fn to_matrix(&self) -> BinaryMatrix {
        BinaryMatrix::from_cells(
            self.len(),
            self.map.iter().enumerate().map(|(c, &r)| Cell::new(r, c)),
        )
    }

    pub fn from_matrix(m: &BinaryMatrix) -> Result<Self, PermutationError> {
        let n = m.size();
        if m.row_masks().iter().any(|r| r.count_ones() != 1) {
            return Err(PermutationError::NotPermutationMatrix);
        }
        let mut map = vec![usize::MAX; n];
        for cell in m.ones() {
            if map[cell.col] != usize::MAX {
                return Err(PermutationError::NotPermutationMatrix);
            }
            map[cell.col] = cell.row;
        }
        Self::from_map(map).map_err(|_| PermutationError::NotPermutationMatrix)
    }

    /// Advances to the lexicographically next permutation; false when `self`
    /// was the last one (and is left unchanged).
    pub fn next_lexicographic(&mut self) -> bool {
        let a = &mut self.map;
        let Some(i) = (0..a.len().saturating_sub(1))
            .rev()
            .find(|&i| a[i] < a[i + 1])
        else {
            return false;
        };
        let j = (i + 1..a.len()).rev().find(|&j| a[j] > a[i]).unwrap();
        a.swap(i, j);
        a[i + 1..].reverse();
        true
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = PermutationError;

    fn try_from(map: Vec<usize>) -> Result<Self, Self::Error> {
        Permutation::from_map(map)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.map
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self.one_line().iter().map(|v| v.to_string()).collect();
        f.write_str(&words.join(" "))
    }
}

/// All permutations of `n` letters in lexicographic order.
pub fn permutations(n: usize) -> Permutations {
    assert!((1..=MAX_SIZE).contains(&n));
    Permutations {
        next: Some(Permutation::identity(n)),
    }
}

pub struct Permutations {
    next: Option<Permutation>,
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if succ.next_lexicographic() {
            self.next = Some(succ);
        }
        Some(current)
    }
}
