//! Exact values of `f(n,k)`, `s(n,k)` and `a(n)`, plus binomial transforms
//! of `b(n,k)` columns.
//!
//! `f(n,k)` counts the `n`×`n` upper-diagonal CNMs whose second diagonal, read
//! from `(1,n-1)` down to `(n-1,1)`, starts with exactly `k` zeros followed by
//! a one; `f(n,n-1)` counts those with an all-zero second diagonal and
//! `f(n,-1) = 0`. Everything is arbitrary precision.
//!
//! The binomial-transform observations on `b(n,k)` columns hold for the
//! *inverse* transform `c_m = sum_i (-1)^(m-i) C(m,i) s_i`, applied to the
//! column starting at its first non-zero entry with one zero prepended. The
//! forward transform is provided too, for completeness.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::cnm::Cnm;
use crate::enumerate::{enumerate_cnats_with_leaf_matrix, CountTable};
use crate::matrix::Cell;
use crate::permutation::Permutation;

/// Largest size accepted by [`f_count_oracle`].
pub const ORACLE_MAX: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("f({n},{k}) is undefined: need n >= 2 and -1 <= k <= n-1")]
    OutOfRange { n: usize, k: i64 },
    #[error("size {n} exceeds the enumeration limit of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("a(n) needs n >= 1")]
    Empty,
}

fn check(n: usize, k: i64) -> Result<(), SequenceError> {
    if n < 2 || k < -1 || k > n as i64 - 1 {
        Err(SequenceError::OutOfRange { n, k })
    } else {
        Ok(())
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn sign(j: usize) -> BigInt {
    if j % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Memo table for the two recurrences, keyed `(n,k)` and grown on demand.
#[derive(Debug, Default, Clone)]
pub struct FTable {
    rec: HashMap<(usize, i64), BigInt>,
    simple: HashMap<(usize, i64), BigInt>,
}

impl FTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// `f(n,k)` by the three-case recursion over `f(n-1, ·)`.
    pub fn rec(&mut self, n: usize, k: i64) -> Result<BigInt, SequenceError> {
        check(n, k)?;
        Ok(self.rec_unchecked(n, k))
    }

    fn rec_unchecked(&mut self, n: usize, k: i64) -> BigInt {
        if k == -1 {
            return BigInt::zero();
        }
        if n == 2 {
            return if k == 0 {
                BigInt::one()
            } else {
                BigInt::zero()
            };
        }
        if let Some(v) = self.rec.get(&(n, k)) {
            return v.clone();
        }
        let top = n as i64 - 1;
        let v: BigInt = if k < top {
            (k - 1..=top - 1)
                .map(|j| self.rec_unchecked(n - 1, j))
                .sum()
        } else {
            (0..=top - 3)
                .map(|j| BigInt::from(top - 2 - j) * self.rec_unchecked(n - 1, j))
                .sum()
        };
        self.rec.insert((n, k), v.clone());
        v
    }

    /// `f(n,k)` by the simplified recurrence, which stays within row `n`
    /// except for one look-ahead to `f(n+1,n-1)` in the last column.
    pub fn simple(&mut self, n: usize, k: i64) -> Result<BigInt, SequenceError> {
        check(n, k)?;
        Ok(self.simple_unchecked(n, k))
    }

    fn simple_unchecked(&mut self, n: usize, k: i64) -> BigInt {
        if k == -1 {
            return BigInt::zero();
        }
        if n == 2 {
            return if k == 0 {
                BigInt::one()
            } else {
                BigInt::zero()
            };
        }
        if k == 0 {
            return factorial(n - 2);
        }
        if let Some(v) = self.simple.get(&(n, k)) {
            return v.clone();
        }
        let top = n as i64 - 1;
        let v: BigInt = if k < top {
            self.simple_unchecked(n, k - 1) - self.simple_unchecked(n - 1, k - 2)
        } else {
            self.simple_unchecked(n + 1, top) - self.simple_unchecked(n, top - 1)
        };
        self.simple.insert((n, k), v.clone());
        v
    }

    /// `s(n,k) = f(n,0) + ... + f(n,k)`.
    pub fn s(&mut self, n: usize, k: i64) -> Result<BigInt, SequenceError> {
        check(n, k)?;
        Ok((0..=k).map(|j| self.rec_unchecked(n, j)).sum())
    }
}

pub fn f_rec(n: usize, k: i64) -> Result<BigInt, SequenceError> {
    FTable::new().rec(n, k)
}

pub fn f_simple(n: usize, k: i64) -> Result<BigInt, SequenceError> {
    FTable::new().simple(n, k)
}

/// `f(n,k)` as an alternating binomial-factorial sum; `f(n,-1) = 0`.
pub fn f_closed(n: usize, k: i64) -> Result<BigInt, SequenceError> {
    check(n, k)?;
    if k == -1 {
        return Ok(BigInt::zero());
    }
    let k = k as usize;
    let v: BigInt = if k < n - 1 {
        (0..=k)
            .filter(|&j| j + 2 <= n)
            .map(|j| binomial(k - j, j) * sign(j) * factorial(n - 2 - j))
            .sum()
    } else {
        (0..n)
            .map(|j| binomial(n - j, j) * sign(j) * factorial(n - 1 - j))
            .sum()
    };
    Ok(v)
}

/// `a(n) = sum_{k=ceil((n-1)/2)}^{n} C(k+1, n-k) (-1)^(n-k) k!`, the number of
/// tree-like tableaux of size `n` without an occupied corner.
pub fn a(n: usize) -> Result<BigInt, SequenceError> {
    if n == 0 {
        return Err(SequenceError::Empty);
    }
    Ok((n / 2..=n)
        .filter(|&k| 2 * k + 1 >= n)
        .map(|k| binomial(k + 1, n - k) * sign(n - k) * factorial(k))
        .sum())
}

/// The second-diagonal cells `(1,n-1), (2,n-2), ..., (n-1,1)` of an `n`×`n`
/// matrix, in that order (zero-based in the result).
pub fn second_diagonal(n: usize) -> Vec<Cell> {
    (0..n.saturating_sub(1))
        .map(|i| Cell::new(i, n - 2 - i))
        .collect()
}

/// Number of leading zeros on the second diagonal of `c`; `n-1` when it is
/// all zero.
pub fn second_diagonal_leading_zeros(c: &Cnm) -> usize {
    let cells = second_diagonal(c.size());
    cells
        .iter()
        .position(|cell| c.is_vertex(*cell))
        .unwrap_or(cells.len())
}

/// Counts of upper-diagonal CNMs of size `n` by leading-zero run, by direct
/// enumeration: entry `k` is `f(n,k)` for `0 <= k <= n-1`.
pub fn f_count_row(n: usize) -> Result<Vec<BigUint>, SequenceError> {
    if n < 2 {
        return Err(SequenceError::OutOfRange { n, k: 0 });
    }
    if n > ORACLE_MAX {
        return Err(SequenceError::TooLarge { n, max: ORACLE_MAX });
    }
    let mut row = vec![BigUint::zero(); n];
    for c in enumerate_cnats_with_leaf_matrix(&Permutation::reversal(n)) {
        row[second_diagonal_leading_zeros(&c)] += 1u32;
    }
    Ok(row)
}

/// `f(n,k)` counted directly over the upper-diagonal CNMs of size `n`.
pub fn f_count_oracle(n: usize, k: i64) -> Result<BigInt, SequenceError> {
    check(n, k)?;
    if k == -1 {
        return Ok(BigInt::zero());
    }
    Ok(BigInt::from(f_count_row(n)?[k as usize].clone()))
}

/// Forward transform `c_m = sum_i C(m,i) s_i`.
pub fn binomial_transform(seq: &[BigInt]) -> Vec<BigInt> {
    (0..seq.len())
        .map(|m| (0..=m).map(|i| binomial(m, i) * &seq[i]).sum())
        .collect()
}

/// Inverse transform `c_m = sum_i (-1)^(m-i) C(m,i) s_i`.
pub fn inverse_binomial_transform(seq: &[BigInt]) -> Vec<BigInt> {
    (0..seq.len())
        .map(|m| {
            (0..=m)
                .map(|i| sign(m - i) * binomial(m, i) * &seq[i])
                .sum()
        })
        .collect()
}

/// The `b(·,k)` column over `tables` (consecutive sizes), starting at its
/// first non-zero entry, with one zero prepended.
pub fn padded_column(tables: &[CountTable], k: u64) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero()];
    out.extend(
        tables
            .iter()
            .map(|t| BigInt::from(t.b(k)))
            .skip_while(|v| v.is_zero()),
    );
    out
}

/// Inverse binomial transform of the padded `b(·,k)` column.
pub fn column_transform(tables: &[CountTable], k: u64) -> Vec<BigInt> {
    inverse_binomial_transform(&padded_column(tables, k))
}

/// `n,k,f` rows for `2 <= n <= n_max` and `0 <= k <= n-1`.
pub fn f_table_csv(n_max: usize) -> String {
    let mut table = FTable::new();
    let mut s = String::from("n,k,f\n");
    for n in 2..=n_max {
        for k in 0..n as i64 {
            let v = table.rec(n, k).expect("in range");
            s.push_str(&format!("{n},{k},{v}\n"));
        }
    }
    s
}

/// True iff every value is non-negative; the counting sequences must be.
pub fn all_non_negative(values: &[BigInt]) -> bool {
    values.iter().all(|v| !v.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn small_values() {
        assert_eq!(f_rec(4, 0).unwrap(), int(2));
        assert_eq!(f_rec(3, 0).unwrap(), int(1));
        assert_eq!(f_rec(3, 1).unwrap(), int(1));
        assert_eq!(f_rec(3, 2).unwrap(), int(0));
        assert_eq!(f_rec(2, 1).unwrap(), int(0));
        assert_eq!(f_rec(7, -1).unwrap(), int(0));
        assert!(f_rec(1, 0).is_err());
        assert!(f_rec(4, 4).is_err());
    }

    #[test]
    fn three_way_agreement() {
        let mut t = FTable::new();
        for n in 2..=12 {
            for k in -1..n as i64 {
                let r = t.rec(n, k).unwrap();
                assert_eq!(r, t.simple(n, k).unwrap(), "simple f({n},{k})");
                assert_eq!(r, f_closed(n, k).unwrap(), "closed f({n},{k})");
            }
            assert_eq!(t.s(n, n as i64 - 1).unwrap(), factorial(n - 1));
        }
    }

    #[test]
    fn simplified_identities() {
        let mut t = FTable::new();
        assert_eq!(
            t.simple(6, 3).unwrap(),
            t.simple(6, 2).unwrap() - t.simple(5, 1).unwrap()
        );
        assert_eq!(
            t.simple(4, 3).unwrap(),
            t.simple(5, 3).unwrap() - t.simple(4, 2).unwrap()
        );
        for n in 3..10 {
            assert_eq!(t.simple(n, 1).unwrap(), factorial(n - 2));
        }
    }

    #[test]
    fn a_small_values() {
        assert_eq!(a(1).unwrap(), int(0));
        assert_eq!(a(2).unwrap(), int(0));
        assert_eq!(a(3).unwrap(), int(1));
        assert_eq!(a(4).unwrap(), int(6));
        for n in 1..=12 {
            assert_eq!(a(n).unwrap(), f_closed(n + 1, n as i64).unwrap());
        }
    }

    #[test]
    fn oracle_matches_recursion() {
        for n in 2..=6 {
            let row = f_count_row(n).unwrap();
            let total: BigUint = row.iter().sum();
            assert_eq!(BigInt::from(total), factorial(n - 1));
            for k in 0..n as i64 {
                assert_eq!(
                    BigInt::from(row[k as usize].clone()),
                    f_rec(n, k).unwrap(),
                    "f({n},{k})"
                );
            }
        }
        assert_eq!(f_count_oracle(2, 1).unwrap(), int(0));
    }

    #[test]
    fn transforms() {
        let seq: Vec<BigInt> = [0, 1, 4, 12, 32, 80].into_iter().map(int).collect();
        let inv = inverse_binomial_transform(&seq);
        assert_eq!(inv, (0..6).map(int).collect::<Vec<_>>());
        assert_eq!(binomial_transform(&inv), seq);
        let zeros = vec![int(0); 4];
        assert_eq!(binomial_transform(&zeros), zeros);
        assert_eq!(inverse_binomial_transform(&zeros), zeros);
    }

    #[test]
    fn csv_shape() {
        let csv = f_table_csv(3);
        assert_eq!(csv, "n,k,f\n2,0,1\n2,1,0\n3,0,1\n3,1,1\n3,2,0\n");
    }
}
