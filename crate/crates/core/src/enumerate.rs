//! Exhaustive generation of CNMs and the aggregate statistics built on it.
//!
//! Generation over a fixed leaf matrix uses the root decomposition: the
//! root's right subtree and down subtree are CNMs on complementary sets of
//! rows and columns (the right one owns row 1, the down one column 1), and
//! any two such CNMs recombine under a common root. Walking every split of
//! the leaf matrix therefore reaches each CNM exactly once.
//!
//! The inductive existence construction (join the rightmost and bottom-most
//! leaves at `(row(l_x), col(l_y))`, hook every enclosed leaf to the left or
//! upwards, recurse) is kept as [`constructive_family`]. It always yields a
//! witness for an irreducible leaf matrix, but it misses CNMs whose enclosed
//! leaves share internal vertices, e.g. `1001/1110/0100/1000`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::rc::Rc;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnm::{is_cnm, validate_cnm, Cnm};
use crate::matrix::{below, BinaryMatrix, Cell, MAX_SIZE};
use crate::permutation::{permutations, Permutation};

/// Largest size accepted by [`brute_force_cnms`].
pub const BRUTE_FORCE_MAX: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("size {n} exceeds the limit of {max} for this generator")]
    TooLarge { n: usize, max: usize },
    #[error("size must be at least 1")]
    Empty,
    #[error("permutation {0} is reducible")]
    Reducible(String),
    #[error("extension needs at least two letters")]
    TooSmall,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Choice {
    Left,
    Up,
}

/// One step of the construction, planned from the current permutation
/// submatrix of unfinished leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionStep {
    /// Leaf with the largest column (`l_x`).
    pub rightmost: Cell,
    /// Leaf with the largest row (`l_y`).
    pub bottommost: Cell,
    /// `(row(l_x), col(l_y))`, the common parent of the two.
    pub connection: Cell,
    /// Leaves strictly below and right of the connection point, by column.
    pub enclosed: Vec<Cell>,
}

impl ConstructionStep {
    /// Plans a step over `active`, the unfinished points. `None` when fewer
    /// than two points remain or when the rightmost and bottom-most point
    /// coincide (the submatrix is reducible).
    pub fn plan(active: &[Cell]) -> Option<Self> {
        if active.len() < 2 {
            return None;
        }
        let rightmost = *active.iter().max_by_key(|c| c.col)?;
        let bottommost = *active.iter().max_by_key(|c| c.row)?;
        if rightmost == bottommost {
            return None;
        }
        let connection = Cell::new(rightmost.row, bottommost.col);
        let mut enclosed: Vec<Cell> = active
            .iter()
            .copied()
            .filter(|v| v.row > connection.row && v.col > connection.col)
            .collect();
        enclosed.sort_by_key(|c| c.col);
        Some(ConstructionStep {
            rightmost,
            bottommost,
            connection,
            enclosed,
        })
    }

    /// The vertex added for `leaf` under `choice`.
    pub fn attachment(&self, leaf: Cell, choice: Choice) -> Cell {
        match choice {
            Choice::Up => Cell::new(self.connection.row, leaf.col),
            Choice::Left => Cell::new(leaf.row, self.connection.col),
        }
    }

    /// The points left unfinished after this step.
    pub fn remaining(&self, active: &[Cell]) -> Vec<Cell> {
        let mut next: Vec<Cell> = active
            .iter()
            .copied()
            .filter(|&v| v != self.rightmost && v != self.bottommost && !self.enclosed.contains(&v))
            .collect();
        next.push(self.connection);
        next
    }
}

/// The first construction step for leaf matrix `p`.
pub fn first_construction_step(p: &Permutation) -> Option<ConstructionStep> {
    ConstructionStep::plan(&leaf_cells(p))
}

fn leaf_cells(p: &Permutation) -> Vec<Cell> {
    p.as_slice()
        .iter()
        .enumerate()
        .map(|(col, &row)| Cell::new(row, col))
        .collect()
}

struct Search<'f, F: FnMut(&[u64])> {
    grid: Vec<u64>,
    emit: &'f mut F,
}

impl<F: FnMut(&[u64])> Search<'_, F> {
    fn run(&mut self, active: &[Cell]) {
        if active.len() == 1 {
            if is_cnm(&self.grid) {
                (self.emit)(&self.grid);
            }
            return;
        }
        let Some(step) = ConstructionStep::plan(active) else {
            return;
        };
        let next = step.remaining(active);
        let p = step.connection;
        debug_assert_eq!(self.grid[p.row] >> p.col & 1, 0);
        self.grid[p.row] |= 1 << p.col;
        let e = step.enclosed.len();
        for mask in 0u64..(1 << e) {
            let added: Vec<Cell> = step
                .enclosed
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    let choice = if mask >> i & 1 == 1 {
                        Choice::Up
                    } else {
                        Choice::Left
                    };
                    step.attachment(v, choice)
                })
                .collect();
            for a in &added {
                self.grid[a.row] |= 1 << a.col;
            }
            self.run(&next);
            for a in &added {
                self.grid[a.row] &= !(1 << a.col);
            }
        }
        self.grid[p.row] &= !(1 << p.col);
    }
}

#[derive(Hash, PartialEq, Eq)]
enum Key {
    Packed(u128),
    Rows(Box<[u64]>),
}

fn canonical_key(rows: &[u64]) -> Key {
    let n = rows.len();
    if n * n <= 128 {
        let packed = rows.iter().fold(0u128, |acc, &r| (acc << n) | r as u128);
        Key::Packed(packed)
    } else {
        Key::Rows(rows.into())
    }
}

fn dedup_sorted(mut found: Vec<Vec<u64>>) -> Vec<Cnm> {
    let mut seen = HashSet::new();
    found.retain(|rows| seen.insert(canonical_key(rows)));
    let mut out: Vec<Cnm> = found
        .into_iter()
        .map(|rows| {
            let m = BinaryMatrix::from_row_masks(rows).expect("in range");
            validate_cnm(m).expect("generator emits valid matrices")
        })
        .collect();
    out.sort();
    out
}

/// The CNMs reachable through the choice tree of the inductive existence
/// construction: at every step each enclosed leaf is joined to the left or
/// upwards, nothing else. Non-empty iff `p` is irreducible, but in general a
/// proper subset of [`enumerate_cnats_with_leaf_matrix`].
pub fn constructive_family(p: &Permutation) -> Vec<Cnm> {
    let mut found = Vec::new();
    let mut emit = |rows: &[u64]| found.push(rows.to_vec());
    let leaves = leaf_cells(p);
    let mut grid = vec![0u64; p.len()];
    for c in &leaves {
        grid[c.row] |= 1 << c.col;
    }
    Search {
        grid,
        emit: &mut emit,
    }
    .run(&leaves);
    dedup_sorted(found)
}

/// A leaf matrix in local coordinates: `map[col] = row`.
type Pattern = Vec<usize>;

/// Splits of a pattern at its root: the columns (never column 0) carrying the
/// leaves of the root's right subtree, as a bit mask. The right subtree owns
/// row 0 and the remaining lines belong to the down subtree.
fn root_splits(map: &[usize]) -> impl Iterator<Item = u64> + '_ {
    let m = map.len();
    let top_leaf_col = map.iter().position(|&r| r == 0).unwrap_or(0);
    let free = if m >= 2 {
        crate::matrix::full_mask(m) & !1
    } else {
        0
    };
    let required = 1u64 << top_leaf_col;
    let feasible = m >= 2 && top_leaf_col != 0;
    // Subsets of `free` containing `required`.
    let rest = free & !required;
    let mut sub = rest;
    let mut done = !feasible;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let current = sub | required;
        if sub == 0 {
            done = true;
        } else {
            sub = (sub - 1) & rest;
        }
        Some(current)
    })
}

/// Restricts `map` to the columns in `cols` and the rows they hit, flattening
/// both to `0..`. Returns the pattern with the global column and row lists.
fn sub_pattern(map: &[usize], cols: u64) -> (Pattern, Vec<usize>, Vec<usize>) {
    let col_list: Vec<usize> = (0..map.len()).filter(|&c| cols >> c & 1 == 1).collect();
    let mut row_list: Vec<usize> = col_list.iter().map(|&c| map[c]).collect();
    row_list.sort_unstable();
    let pattern = col_list
        .iter()
        .map(|&c| row_list.binary_search(&map[c]).expect("row present"))
        .collect();
    (pattern, col_list, row_list)
}

fn pattern_is_irreducible(map: &[usize]) -> bool {
    let mut max = 0;
    for (j, &v) in map.iter().enumerate().take(map.len() - 1) {
        max = max.max(v);
        if max == j {
            return false;
        }
    }
    true
}

fn embed(target: &mut [u64], local: &[u64], rows: &[usize], cols: &[usize]) {
    for (lr, &bits) in local.iter().enumerate() {
        let mut out = 0u64;
        for lc in crate::matrix::BitIter(bits) {
            out |= 1 << cols[lc];
        }
        target[rows[lr]] |= out;
    }
}

type Memo = HashMap<Pattern, Rc<Vec<Vec<u64>>>>;

/// All CNMs over a pattern, by the root decomposition: the root's right
/// subtree and down subtree are CNMs on complementary sets of rows and
/// columns, and every compatible pair of such subtrees recombines.
fn cnms_over(map: &[usize], memo: &mut Memo) -> Rc<Vec<Vec<u64>>> {
    if let Some(hit) = memo.get(map) {
        return hit.clone();
    }
    let m = map.len();
    let mut out = Vec::new();
    if m == 1 {
        out.push(vec![1u64]);
    } else if pattern_is_irreducible(map) {
        for right_cols in root_splits(map) {
            let (right, rc, rr) = sub_pattern(map, right_cols);
            let down_cols = crate::matrix::full_mask(m) & !right_cols;
            let (down, dc, dr) = sub_pattern(map, down_cols);
            if !pattern_is_irreducible(&right) || !pattern_is_irreducible(&down) {
                continue;
            }
            let rights = cnms_over(&right, memo);
            if rights.is_empty() {
                continue;
            }
            let downs = cnms_over(&down, memo);
            for d in downs.iter() {
                let mut base = vec![0u64; m];
                base[0] |= 1;
                embed(&mut base, d, &dr, &dc);
                for r in rights.iter() {
                    let mut rows = base.clone();
                    embed(&mut rows, r, &rr, &rc);
                    out.push(rows);
                }
            }
        }
    }
    let out = Rc::new(out);
    memo.insert(map.to_vec(), out.clone());
    out
}

fn count_over(map: &[usize], memo: &mut HashMap<Pattern, u64>) -> u64 {
    if let Some(&hit) = memo.get(map) {
        return hit;
    }
    let m = map.len();
    let mut total = 0;
    if m == 1 {
        total = 1;
    } else if pattern_is_irreducible(map) {
        for right_cols in root_splits(map) {
            let (right, _, _) = sub_pattern(map, right_cols);
            let (down, _, _) = sub_pattern(map, crate::matrix::full_mask(m) & !right_cols);
            let r = count_over(&right, memo);
            if r > 0 {
                total += r * count_over(&down, memo);
            }
        }
    }
    memo.insert(map.to_vec(), total);
    total
}

/// Streams every distinct CNM whose leaf matrix is `p` (as row masks).
/// Returns the number emitted.
pub fn for_each_cnm_with_leaf_matrix(p: &Permutation, mut f: impl FnMut(&[u64])) -> u64 {
    let mut memo = Memo::new();
    let all = cnms_over(p.as_slice(), &mut memo);
    let mut seen = HashSet::with_capacity(all.len());
    let mut count = 0;
    for rows in all.iter() {
        debug_assert!(is_cnm(rows));
        if seen.insert(canonical_key(rows)) {
            count += 1;
            f(rows);
        }
    }
    count
}

/// Every CNM whose leaf matrix is `p`, sorted. Empty iff `p` is reducible.
pub fn enumerate_cnats_with_leaf_matrix(p: &Permutation) -> Vec<Cnm> {
    let mut found = Vec::new();
    for_each_cnm_with_leaf_matrix(p, |rows| found.push(rows.to_vec()));
    dedup_sorted(found)
}

/// Number of CNMs whose leaf matrix is `p`, without materializing them.
pub fn count_with_leaf_matrix(p: &Permutation) -> u64 {
    count_over(p.as_slice(), &mut HashMap::new())
}

/// Every CNM of size `n`, grouped by leaf matrix in lexicographic order of
/// the permutation.
pub fn all_cnms(n: usize) -> Vec<Cnm> {
    assert!((1..=MAX_SIZE).contains(&n));
    permutations(n)
        .filter(Permutation::is_irreducible)
        .flat_map(|p| enumerate_cnats_with_leaf_matrix(&p))
        .collect()
}

/// All CNMs of size `n` by cell-by-cell backtracking in row-major order,
/// independent of the leaf-matrix construction. Sorted.
pub fn brute_force_cnms(n: usize) -> Result<Vec<Cnm>, EnumerateError> {
    if n == 0 {
        return Err(EnumerateError::Empty);
    }
    if n > BRUTE_FORCE_MAX {
        return Err(EnumerateError::TooLarge {
            n,
            max: BRUTE_FORCE_MAX,
        });
    }
    let mut rows = vec![0u64; n];
    let mut cols = vec![0u64; n];
    let mut out = Vec::new();
    rows[0] = 1;
    cols[0] = 1;
    brute_fill(n, 1, 1, &mut rows, &mut cols, &mut out);
    out.sort();
    Ok(out)
}

fn brute_fill(
    n: usize,
    pos: usize,
    ones: usize,
    rows: &mut [u64],
    cols: &mut [u64],
    out: &mut Vec<Cnm>,
) {
    if pos % n == 0 && rows[pos / n - 1] == 0 {
        return;
    }
    if pos == n * n {
        if is_cnm(rows) {
            let m = BinaryMatrix::from_row_masks(rows.to_vec()).expect("in range");
            out.push(validate_cnm(m).expect("checked"));
        }
        return;
    }
    let (r, c) = (pos / n, pos % n);
    brute_fill(n, pos + 1, ones, rows, cols, out);
    if ones < 2 * n - 1 {
        let left = rows[r] & below(c) != 0;
        let above = cols[c] & below(r) != 0;
        if left != above {
            rows[r] |= 1 << c;
            cols[c] |= 1 << r;
            brute_fill(n, pos + 1, ones + 1, rows, cols, out);
            rows[r] &= !(1 << c);
            cols[c] &= !(1 << r);
        }
    }
}

/// Determinant of a small 0/1 matrix by fraction-free elimination.
fn small_determinant(rows: &[u64]) -> i64 {
    const CAP: usize = 16;
    let n = rows.len();
    assert!(n <= CAP, "determinant tally supports n <= {CAP}");
    let mut a = [[0i64; CAP]; CAP];
    for (r, &bits) in rows.iter().enumerate() {
        for (c, cell) in a[r].iter_mut().enumerate().take(n) {
            *cell = (bits >> c & 1) as i64;
        }
    }
    let mut sign = 1;
    let mut prev = 1;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(s) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return 0;
            };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Aggregate statistics over all CNMs of one size.
///
/// `by_k[k]` is the number of permutations that are the leaf matrix of
/// exactly `k >= 1` CNMs; zero entries are not stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountTable {
    pub n: usize,
    pub by_k: BTreeMap<u64, BigUint>,
    pub total: BigUint,
    /// CNMs with determinant `+1`; zero unless determinants were tallied.
    pub det_plus: BigUint,
    /// CNMs with determinant `-1`; zero unless determinants were tallied.
    pub det_minus: BigUint,
}

impl CountTable {
    pub fn empty(n: usize) -> Self {
        CountTable {
            n,
            by_k: BTreeMap::new(),
            total: BigUint::zero(),
            det_plus: BigUint::zero(),
            det_minus: BigUint::zero(),
        }
    }

    pub fn b(&self, k: u64) -> BigUint {
        self.by_k.get(&k).cloned().unwrap_or_default()
    }

    pub fn max_k(&self) -> u64 {
        self.by_k.keys().next_back().copied().unwrap_or(0)
    }

    /// Number of permutations carrying at least one CNM.
    pub fn leaf_matrices(&self) -> BigUint {
        self.by_k.values().sum()
    }

    /// `sum_k k * b(n,k)`, which must equal [`CountTable::total`].
    pub fn weighted_sum(&self) -> BigUint {
        self.by_k.iter().map(|(&k, b)| b * BigUint::from(k)).sum()
    }

    pub fn det_difference(&self) -> BigInt {
        BigInt::from(self.det_plus.clone()) - BigInt::from(self.det_minus.clone())
    }

    pub fn merge(mut self, other: CountTable) -> CountTable {
        assert_eq!(self.n, other.n);
        for (k, b) in other.by_k {
            *self.by_k.entry(k).or_default() += b;
        }
        self.total += other.total;
        self.det_plus += other.det_plus;
        self.det_minus += other.det_minus;
        self
    }

    /// Rows `n,k,b` with a header line. Non-zero entries are listed, plus the
    /// always-empty `k = 5` column once the table reaches past it.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,k,b\n");
        let mut ks: Vec<u64> = self.by_k.keys().copied().collect();
        if self.max_k() > 5 && !self.by_k.contains_key(&5) {
            ks.push(5);
            ks.sort_unstable();
        }
        for k in ks {
            s.push_str(&format!("{},{},{}\n", self.n, k, self.b(k)));
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurveyOptions {
    /// Number of shards; permutations are dealt round-robin in lexicographic
    /// order. Zero means the available parallelism.
    pub shards: usize,
    /// Also tally determinants of every enumerated CNM.
    pub determinants: bool,
}

impl Default for SurveyOptions {
    fn default() -> Self {
        SurveyOptions {
            shards: 0,
            determinants: true,
        }
    }
}

impl SurveyOptions {
    pub fn counts_only() -> Self {
        SurveyOptions {
            determinants: false,
            ..Self::default()
        }
    }

    pub fn with_shards(mut self, shards: usize) -> Self {
        self.shards = shards;
        self
    }
}

fn resolve_shards(shards: usize) -> usize {
    if shards == 0 {
        std::thread::available_parallelism().map_or(1, |p| p.get())
    } else {
        shards
    }
}

/// Tallies one shard: permutations at lexicographic positions `shard`,
/// `shard + shards`, ...
pub fn survey_shard(n: usize, shard: usize, shards: usize, determinants: bool) -> CountTable {
    let mut table = CountTable::empty(n);
    for p in permutations(n)
        .skip(shard)
        .step_by(shards)
        .filter(Permutation::is_irreducible)
    {
        let (mut plus, mut minus) = (0u64, 0u64);
        let k = if determinants {
            for_each_cnm_with_leaf_matrix(&p, |rows| match small_determinant(rows) {
                1 => plus += 1,
                -1 => minus += 1,
                d => panic!("determinant {d} of a CNM is not a unit"),
            })
        } else {
            count_with_leaf_matrix(&p)
        };
        if k > 0 {
            *table.by_k.entry(k).or_default() += 1u32;
            table.total += k;
            table.det_plus += plus;
            table.det_minus += minus;
        }
    }
    table
}

/// Enumerates all CNMs of size `n` over every irreducible leaf matrix,
/// in parallel across shards. The result does not depend on the shard count.
pub fn survey(n: usize, options: SurveyOptions) -> CountTable {
    assert!((1..=MAX_SIZE).contains(&n));
    let shards = resolve_shards(options.shards);
    (0..shards)
        .into_par_iter()
        .map(|s| survey_shard(n, s, shards, options.determinants))
        .reduce(|| CountTable::empty(n), CountTable::merge)
}

/// `T(n)`, the number of CNMs of size `n`.
pub fn count_all_cnats(n: usize) -> BigUint {
    survey(n, SurveyOptions::counts_only()).total
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetParity {
    pub plus: BigUint,
    pub minus: BigUint,
}

impl DetParity {
    pub fn difference(&self) -> BigInt {
        BigInt::from(self.plus.clone()) - BigInt::from(self.minus.clone())
    }
}

/// Counts of CNMs of size `n` with determinant `+1` and `-1`.
pub fn det_parity_counts(n: usize) -> DetParity {
    let t = survey(n, SurveyOptions::default());
    DetParity {
        plus: t.det_plus,
        minus: t.det_minus,
    }
}

pub fn b_table(n: usize) -> CountTable {
    survey(n, SurveyOptions::counts_only())
}

/// The two size-`n+1` leaf matrices obtained by splitting the last-column
/// leaf, respectively the last-row leaf, into a new pair of leaves on the
/// new outermost row and column. Both carry as many CNMs as `p`.
pub fn extend_leaf_matrix(p: &Permutation) -> Result<(Permutation, Permutation), EnumerateError> {
    let n = p.len();
    if n < 2 {
        return Err(EnumerateError::TooSmall);
    }
    if !p.is_irreducible() {
        return Err(EnumerateError::Reducible(p.to_string()));
    }
    let map = p.as_slice();
    let last_col_row = map[n - 1];
    let last_row_col = p.inverse().as_slice()[n - 1];

    let mut via_column = map.to_vec();
    via_column[n - 1] = n;
    via_column.push(last_col_row);

    let mut via_row = map.to_vec();
    via_row[last_row_col] = n;
    via_row.push(n - 1);

    Ok((
        Permutation::from_map(via_column).expect("valid extension"),
        Permutation::from_map(via_row).expect("valid extension"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::parse_matrix;

    #[test]
    fn two_by_two() {
        let all = enumerate_cnats_with_leaf_matrix(&Permutation::reversal(2));
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].matrix(), &parse_matrix("11\n10").unwrap());
        assert!(enumerate_cnats_with_leaf_matrix(&Permutation::identity(2)).is_empty());
    }

    #[test]
    fn reversal_of_four_gives_six() {
        let all = enumerate_cnats_with_leaf_matrix(&Permutation::reversal(4));
        assert_eq!(all.len(), 6);
        assert!(all.iter().all(Cnm::is_upper_diagonal));
    }

    #[test]
    fn step_on_reversal_three() {
        let step = first_construction_step(&Permutation::reversal(3)).unwrap();
        assert_eq!(step.rightmost, Cell::new(0, 2));
        assert_eq!(step.bottommost, Cell::new(2, 0));
        assert_eq!(step.connection, Cell::new(0, 0));
        assert_eq!(step.enclosed, vec![Cell::new(1, 1)]);
        assert_eq!(
            step.attachment(Cell::new(1, 1), Choice::Up),
            Cell::new(0, 1)
        );
        assert_eq!(
            step.attachment(Cell::new(1, 1), Choice::Left),
            Cell::new(1, 0)
        );
    }

    #[test]
    fn constructive_family_is_a_witnessing_subset() {
        let mut strict = 0;
        for p in permutations(5) {
            let family = constructive_family(&p);
            let all = enumerate_cnats_with_leaf_matrix(&p);
            assert_eq!(family.is_empty(), !p.is_irreducible(), "{p}");
            assert!(family.iter().all(|c| all.binary_search(c).is_ok()));
            assert_eq!(all.len() as u64, count_with_leaf_matrix(&p));
            strict += usize::from(family.len() < all.len());
        }
        assert!(strict > 0);
        let missing = parse_matrix("1001\n1110\n0100\n1000").unwrap();
        let rev = constructive_family(&Permutation::reversal(4));
        assert!(rev.iter().all(|c| c.matrix() != &missing));
    }

    #[test]
    fn matches_brute_force() {
        for n in 1..=5 {
            let mut ours = all_cnms(n);
            ours.sort();
            assert_eq!(ours, brute_force_cnms(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn brute_force_small_counts() {
        assert_eq!(brute_force_cnms(1).unwrap().len(), 1);
        assert_eq!(brute_force_cnms(2).unwrap().len(), 1);
        assert_eq!(brute_force_cnms(3).unwrap().len(), 4);
        assert_eq!(brute_force_cnms(4).unwrap().len(), 33);
        assert!(matches!(
            brute_force_cnms(6),
            Err(EnumerateError::TooLarge { .. })
        ));
    }

    #[test]
    fn small_determinant_matches_sign() {
        for c in all_cnms(4) {
            let d = small_determinant(c.matrix().row_masks());
            assert_eq!(d, c.associated_permutation().sign() as i64);
        }
    }

    #[test]
    fn extension_of_two() {
        let (a, b) = extend_leaf_matrix(&Permutation::reversal(2)).unwrap();
        assert_eq!(a.one_line(), vec![2, 3, 1]);
        assert_eq!(b.one_line(), vec![3, 1, 2]);
        assert_eq!(count_with_leaf_matrix(&a), 1);
        assert_eq!(count_with_leaf_matrix(&b), 1);
        assert!(matches!(
            extend_leaf_matrix(&Permutation::identity(3)),
            Err(EnumerateError::Reducible(_))
        ));
    }

    #[test]
    fn table_for_four() {
        let t = survey(4, SurveyOptions::default().with_shards(3));
        assert_eq!(t.total, BigUint::from(33u32));
        let b: Vec<u64> = (1..=6).map(|k| t.b(k).try_into().unwrap()).collect();
        assert_eq!(b, vec![4, 4, 1, 3, 0, 1]);
        assert_eq!(t.det_plus, BigUint::from(17u32));
        assert_eq!(t.det_minus, BigUint::from(16u32));
        assert!(t.to_csv().contains("4,5,0\n"));
    }
}
