//! Determinant of a CNM, computed by clearing internal vertices and checked
//! against the sign of the associated permutation.

use crate::cnm::Cnm;

/// Runs the clearing process on an integer copy of `c`: for every leaf, the
/// row or column that holds nothing but that leaf is subtracted from each line
/// meeting the leaf's other line. Determinant-preserving; the result is the
/// leaf matrix.
#[allow(clippy::needless_range_loop)]
pub fn clear_internal_vertices(c: &Cnm) -> Vec<Vec<i64>> {
    let n = c.size();
    let mut a = c.matrix().to_integer_rows();
    for leaf in c.leaves() {
        let (i, j) = (leaf.row, leaf.col);
        let row_is_alone = (0..n).all(|k| k == j || a[i][k] == 0);
        if row_is_alone {
            // Clear column j using row i.
            for k in 0..n {
                if k != i && a[k][j] != 0 {
                    let factor = a[k][j];
                    for col in 0..n {
                        a[k][col] -= factor * a[i][col];
                    }
                }
            }
        } else {
            // Column j holds only the leaf; clear row i using column j.
            debug_assert!((0..n).all(|k| k == i || a[k][j] == 0));
            for k in 0..n {
                if k != j && a[i][k] != 0 {
                    let factor = a[i][k];
                    for row in a.iter_mut() {
                        row[k] -= factor * row[j];
                    }
                }
            }
        }
    }
    a
}

/// Exact integer determinant by fraction-free (Bareiss) elimination.
pub fn bareiss_determinant(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return 0;
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Determinant of `c`, which is `+1` or `-1`.
///
/// Panics if the clearing route and the permutation-sign route disagree.
pub fn determinant_sign(c: &Cnm) -> i8 {
    let cleared = clear_internal_vertices(c);
    let leaf = c.leaf_matrix().to_integer_rows();
    assert_eq!(
        cleared, leaf,
        "clearing process did not reduce to the leaf matrix"
    );
    let by_clearing = bareiss_determinant(&cleared);
    let by_parity = c.associated_permutation().sign();
    assert_eq!(
        by_clearing,
        by_parity as i128,
        "determinant routes disagree for {:?}",
        c.matrix()
    );
    by_parity
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnm::validate_cnm;
    use crate::matrix::parse_matrix;

    fn cnm(text: &str) -> Cnm {
        validate_cnm(parse_matrix(text).unwrap()).unwrap()
    }

    #[test]
    fn small_signs() {
        assert_eq!(determinant_sign(&cnm("1")), 1);
        assert_eq!(determinant_sign(&cnm("11\n10")), -1);
        assert_eq!(bareiss_determinant(&[vec![1, 1], vec![1, 0]]), -1);
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        fn cofactor(m: &[Vec<i64>]) -> i128 {
            if m.len() == 1 {
                return m[0][0] as i128;
            }
            (0..m.len())
                .map(|j| {
                    let minor: Vec<Vec<i64>> = m[1..]
                        .iter()
                        .map(|r| {
                            r.iter()
                                .enumerate()
                                .filter(|&(k, _)| k != j)
                                .map(|(_, &x)| x)
                                .collect()
                        })
                        .collect();
                    let s = if j % 2 == 0 { 1 } else { -1 };
                    s * m[0][j] as i128 * cofactor(&minor)
                })
                .sum()
        }
        let samples = [
            vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]],
            vec![vec![2, -1, 3], vec![0, 4, 1], vec![5, 2, 0]],
            vec![
                vec![1, 1, 1, 0],
                vec![1, 0, 1, 1],
                vec![0, 1, 1, 1],
                vec![1, 1, 0, 1],
            ],
            vec![vec![0, 0], vec![0, 1]],
        ];
        for m in samples {
            assert_eq!(bareiss_determinant(&m), cofactor(&m));
        }
    }

    #[test]
    fn clearing_leaves_leaf_matrix() {
        let c = cnm("101\n110\n100");
        assert_eq!(
            clear_internal_vertices(&c),
            c.leaf_matrix().to_integer_rows()
        );
        assert_eq!(
            bareiss_determinant(&c.matrix().to_integer_rows()),
            determinant_sign(&c) as i128
        );
    }
}
