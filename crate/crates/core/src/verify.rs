//! Golden fixtures and the check suites behind `cnat verify`.
//!
//! Fixtures live in `fixtures/` as plain text with a provenance header and are
//! compiled in. A suite recomputes every value in range and compares.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use crate::bijections::ftt::{all_ud_ftts, permutation_to_udftt, udftt_to_permutation};
use crate::bijections::tableau::{
    enumerate_tlts, occupied_corners, second_diagonal_vertices, tlt_to_udcnm,
    udcnm_to_tlt_embedding, TreeLikeTableau,
};
use crate::bijections::ud_cnms;
use crate::cnm::validate_cnm;
use crate::enumerate::{
    all_cnms, brute_force_cnms, count_with_leaf_matrix, extend_leaf_matrix, survey, CountTable,
    SurveyOptions,
};
use crate::lsubset::is_unique_leaf_matrix;
use crate::matrix::{BinaryMatrix, Cell};
use crate::permutation::{permutations, Permutation};
use crate::reduce::{reduce_to_upper_diagonal, replay, SwapTrace};
use crate::sequences::{a, column_transform, f_closed, f_count_row, factorial, FTable};

const COUNTS: &str = include_str!("../fixtures/cnat_counts.txt");
const B_TABLE: &str = include_str!("../fixtures/b_table.txt");
const TRANSFORMS: &str = include_str!("../fixtures/binomial_transforms.txt");
const IRREDUCIBLE: &str = include_str!("../fixtures/irreducible_counts.txt");
const REDUCTION: &str = include_str!("../fixtures/reduction_example.txt");
const TABLEAUX: &str = include_str!("../fixtures/tableaux.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// Sizes up to 5.
    Fast,
    /// Sizes up to 7.
    Full,
    /// Full plus `n = 8`.
    Slow,
}

impl Suite {
    pub fn max_n(self) -> usize {
        match self {
            Suite::Fast => 5,
            Suite::Full => 7,
            Suite::Slow => 8,
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fast" => Ok(Suite::Fast),
            "full" => Ok(Suite::Full),
            "slow" => Ok(Suite::Slow),
            other => Err(format!("unknown suite {other:?} (fast, full, slow)")),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Fast => "fast",
            Suite::Full => "full",
            Suite::Slow => "slow",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixtureCheck {
    pub id: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl FixtureCheck {
    fn new(id: impl Into<String>, expected: impl ToString, actual: impl ToString) -> Self {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        FixtureCheck {
            id: id.into(),
            pass: expected == actual,
            expected,
            actual,
        }
    }

    fn holds(id: impl Into<String>, ok: bool, detail: impl ToString) -> Self {
        FixtureCheck {
            id: id.into(),
            expected: "true".into(),
            actual: if ok {
                "true".into()
            } else {
                format!("false ({})", detail.to_string())
            },
            pass: ok,
        }
    }
}

/// Data rows of a fixture: non-empty lines not starting with `#`.
fn data_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

fn fields<T: FromStr>(line: &str) -> Vec<T>
where
    T::Err: fmt::Debug,
{
    line.split_whitespace()
        .map(|t| t.parse().expect("well-formed fixture"))
        .collect()
}

/// `[name]` sections of a fixture.
fn sections(text: &str) -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = Vec::new();
    for line in data_lines(text) {
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            out.push((name.to_string(), String::new()));
        } else if let Some((_, body)) = out.last_mut() {
            body.push_str(line);
            body.push('\n');
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountRow {
    pub n: usize,
    pub total: BigUint,
    pub det_plus: BigUint,
    pub det_minus: BigUint,
}

pub fn count_fixture() -> Vec<CountRow> {
    data_lines(COUNTS)
        .map(|l| {
            let v: Vec<String> = fields(l);
            CountRow {
                n: v[0].parse().expect("n"),
                total: v[1].parse().expect("T"),
                det_plus: v[2].parse().expect("A"),
                det_minus: v[3].parse().expect("B"),
            }
        })
        .collect()
}

/// `(n, k, b(n,k))`.
pub fn b_fixture() -> Vec<(usize, u64, u64)> {
    data_lines(B_TABLE)
        .map(|l| {
            let v: Vec<u64> = fields(l);
            (v[0] as usize, v[1], v[2])
        })
        .collect()
}

/// `(k, expected prefix)`.
pub fn transform_fixture() -> Vec<(u64, Vec<BigInt>)> {
    data_lines(TRANSFORMS)
        .map(|l| {
            let v: Vec<i64> = fields(l);
            (
                v[0] as u64,
                v[1..].iter().map(|&x| BigInt::from(x)).collect(),
            )
        })
        .collect()
}

pub fn irreducible_fixture() -> Vec<(usize, u64)> {
    data_lines(IRREDUCIBLE)
        .map(|l| {
            let v: Vec<u64> = fields(l);
            (v[0] as usize, v[1])
        })
        .collect()
}

pub fn reduction_fixture() -> (BinaryMatrix, SwapTrace) {
    let s = sections(REDUCTION);
    let matrix = s[0].1.parse().expect("fixture matrix");
    let trace = s[1].1.parse().expect("fixture trace");
    (matrix, trace)
}

/// `(name, tableau, occupied corners)`, corners zero-based.
pub fn tableau_fixture() -> Vec<(String, TreeLikeTableau, Vec<Cell>)> {
    let s = sections(TABLEAUX);
    s.chunks(2)
        .map(|pair| {
            let tableau = pair[0].1.parse().expect("fixture tableau");
            let corners = pair[1]
                .1
                .lines()
                .map(|l| {
                    let (r, c) = l.split_once(',').expect("r,c");
                    Cell::new(
                        r.parse::<usize>().expect("row") - 1,
                        c.parse::<usize>().expect("col") - 1,
                    )
                })
                .collect();
            (pair[0].0.clone(), tableau, corners)
        })
        .collect()
}

/// Runs every check of `suite`; `jobs = 0` uses the available parallelism.
pub fn run_suite(suite: Suite, jobs: usize) -> Vec<FixtureCheck> {
    let max_n = suite.max_n();
    let mut out = Vec::new();

    let tables: Vec<CountTable> = (1..=max_n)
        .map(|n| survey(n, SurveyOptions::default().with_shards(jobs)))
        .collect();

    for row in count_fixture().into_iter().filter(|r| r.n <= max_n) {
        let t = &tables[row.n - 1];
        out.push(FixtureCheck::new(
            format!("counts/T/{}", row.n),
            &row.total,
            &t.total,
        ));
        out.push(FixtureCheck::new(
            format!("counts/A/{}", row.n),
            &row.det_plus,
            &t.det_plus,
        ));
        out.push(FixtureCheck::new(
            format!("counts/B/{}", row.n),
            &row.det_minus,
            &t.det_minus,
        ));
    }
    for (n, k, b) in b_fixture().into_iter().filter(|r| r.0 <= max_n) {
        out.push(FixtureCheck::new(
            format!("b/{n}/{k}"),
            b,
            tables[n - 1].b(k),
        ));
    }
    for t in &tables {
        out.push(FixtureCheck::new(
            format!("b/weighted-sum/{}", t.n),
            &t.total,
            t.weighted_sum(),
        ));
        out.push(FixtureCheck::new(
            format!("b/max-k/{}", t.n),
            factorial(t.n.saturating_sub(1)),
            t.max_k(),
        ));
        out.push(FixtureCheck::new(format!("b/none5/{}", t.n), 0, t.b(5)));
    }
    for pair in tables.windows(2) {
        let (small, big) = (&pair[0], &pair[1]);
        // A single cell has no pair of boundary leaves to extend from.
        if small.n < 2 {
            continue;
        }
        let ok = small.by_k.iter().all(|(&k, b)| big.b(k) >= b * 2u32);
        out.push(FixtureCheck::holds(
            format!("lower-bound/{}", big.n),
            ok,
            "b(n+1,k) < 2 b(n,k)",
        ));
        out.push(FixtureCheck::new(
            format!("b2-b3/{}", small.n),
            small.b(2),
            big.b(3),
        ));
    }
    for (n, count) in irreducible_fixture().into_iter().filter(|r| r.0 <= max_n) {
        out.push(FixtureCheck::new(
            format!("irreducible/{n}"),
            count,
            tables[n - 1].leaf_matrices(),
        ));
    }
    for (k, expected) in transform_fixture() {
        let actual = column_transform(&tables, k);
        let len = actual.len().min(expected.len());
        let show = |v: &[BigInt]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        out.push(FixtureCheck::new(
            format!("transform/b{k}"),
            show(&expected[..len]),
            show(&actual[..len]),
        ));
    }

    for n in 2..=max_n.min(7) {
        let (mut by_rule, mut by_count, mut disagree) = (0u64, 0u64, 0u64);
        for p in permutations(n) {
            let rule = is_unique_leaf_matrix(&p);
            let count = count_with_leaf_matrix(&p) == 1;
            by_rule += u64::from(rule);
            by_count += u64::from(count);
            disagree += u64::from(rule != count);
        }
        let expected = 1u64 << (n - 2);
        out.push(FixtureCheck::new(
            format!("unique/rule/{n}"),
            expected,
            by_rule,
        ));
        out.push(FixtureCheck::new(
            format!("unique/count/{n}"),
            expected,
            by_count,
        ));
        out.push(FixtureCheck::new(
            format!("unique/disagreements/{n}"),
            0,
            disagree,
        ));
    }

    for n in 1..=max_n.min(5) {
        let mut ours = all_cnms(n);
        ours.sort();
        let brute = brute_force_cnms(n).expect("small");
        out.push(FixtureCheck::holds(
            format!("oracle/{n}"),
            ours == brute,
            format!("{} vs {}", ours.len(), brute.len()),
        ));
    }

    let bij_max = max_n.min(6);
    for n in 2..=bij_max {
        out.extend(bijection_checks(n));
    }
    for n in 1..=bij_max {
        out.push(a_check(n));
    }
    out.push(recurrence_check(12));

    let reduce_max = max_n.min(6);
    for n in 1..=reduce_max {
        let mut failures = 0;
        for c in all_cnms(n) {
            let ok = match reduce_to_upper_diagonal(&c) {
                Ok((trace, result)) => {
                    let parity = if trace.len() % 2 == 0 { 1 } else { -1 };
                    result.is_upper_diagonal()
                        && trace.len() <= n * n
                        && c.associated_permutation().sign()
                            == parity * result.associated_permutation().sign()
                }
                Err(_) => false,
            };
            failures += usize::from(!ok);
        }
        out.push(FixtureCheck::new(format!("reduce/all/{n}"), 0, failures));
    }
    out.push(reduction_example_check());

    for n in 2..=max_n.min(5) {
        let mut failures = 0;
        for p in permutations(n).filter(Permutation::is_irreducible) {
            let k = count_with_leaf_matrix(&p);
            let (x, y) = extend_leaf_matrix(&p).expect("irreducible");
            let ok = x != y && count_with_leaf_matrix(&x) == k && count_with_leaf_matrix(&y) == k;
            failures += usize::from(!ok);
        }
        out.push(FixtureCheck::new(format!("extension/{n}"), 0, failures));
    }

    for (name, tableau, corners) in tableau_fixture() {
        let show = |cells: &[Cell]| {
            cells
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        out.push(FixtureCheck::new(
            format!("tableau/{name}/occupied-corners"),
            show(&corners),
            show(&occupied_corners(&tableau)),
        ));
        let ok = tlt_to_udcnm(&tableau)
            .and_then(|c| udcnm_to_tlt_embedding(&c))
            .map(|e| e.tableau == tableau)
            .unwrap_or(false);
        out.push(FixtureCheck::holds(
            format!("tableau/{name}/round-trip"),
            ok,
            "tableau changed",
        ));
    }
    out
}

fn bijection_checks(n: usize) -> Vec<FixtureCheck> {
    let fact = factorial(n - 1);
    let cnms = ud_cnms(n);
    let ftts = all_ud_ftts(n);
    let mut out = vec![
        FixtureCheck::new(format!("ud-cnm/count/{n}"), &fact, cnms.len()),
        FixtureCheck::new(format!("udftt/count/{n}"), &fact, ftts.len()),
    ];

    let ftt_round = ftts.iter().all(|t| {
        udftt_to_permutation(t)
            .map(|p| &permutation_to_udftt(&p) == t)
            .unwrap_or(false)
    }) && permutations(n - 1)
        .all(|p| udftt_to_permutation(&permutation_to_udftt(&p)).ok() == Some(p.clone()));
    out.push(FixtureCheck::holds(
        format!("udftt/round-trip/{n}"),
        ftt_round,
        "mismatch",
    ));

    let mut images = Vec::new();
    let mut corner_ok = true;
    let mut round_ok = true;
    for c in &cnms {
        match udcnm_to_tlt_embedding(c) {
            Ok(e) => {
                round_ok &= tlt_to_udcnm(&e.tableau).as_ref() == Ok(c);
                let mut diag: Vec<Option<Cell>> = second_diagonal_vertices(c)
                    .into_iter()
                    .map(|v| e.tableau_cell(v))
                    .collect();
                let mut corners: Vec<Option<Cell>> =
                    occupied_corners(&e.tableau).into_iter().map(Some).collect();
                diag.sort();
                corners.sort();
                corner_ok &= diag == corners;
                images.push(e.tableau);
            }
            Err(_) => round_ok = false,
        }
    }
    images.sort();
    images.dedup();
    out.push(FixtureCheck::new(
        format!("tlt/images/{n}"),
        &fact,
        images.len(),
    ));
    let all = enumerate_tlts(n - 1).expect("small");
    out.push(FixtureCheck::holds(
        format!("tlt/onto/{n}"),
        images == all,
        "image set differs",
    ));
    out.push(FixtureCheck::holds(
        format!("tlt/round-trip/{n}"),
        round_ok,
        "mismatch",
    ));
    out.push(FixtureCheck::holds(
        format!("tlt/corners/{n}"),
        corner_ok,
        "mismatch",
    ));
    out
}

/// Five-way agreement on the number of size-`n` tableaux without an occupied
/// corner.
pub fn a_values(n: usize) -> [BigInt; 5] {
    let tlts = enumerate_tlts(n)
        .expect("small")
        .iter()
        .filter(|t| occupied_corners(t).is_empty())
        .count();
    let oracle = BigInt::from(f_count_row(n + 1).expect("small")[n].clone());
    let rec = FTable::new().rec(n + 1, n as i64).expect("in range");
    let closed = f_closed(n + 1, n as i64).expect("in range");
    let formula = a(n).expect("n >= 1");
    [BigInt::from(tlts), oracle, rec, closed, formula]
}

fn a_check(n: usize) -> FixtureCheck {
    let v = a_values(n);
    let ok = v.iter().all(|x| x == &v[0]);
    let shown = v
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",");
    FixtureCheck::holds(format!("a/five-way/{n}"), ok, shown)
}

fn recurrence_check(n_max: usize) -> FixtureCheck {
    let mut t = FTable::new();
    let mut bad = Vec::new();
    for n in 2..=n_max {
        for k in -1..n as i64 {
            let r = t.rec(n, k).expect("in range");
            if r != t.simple(n, k).expect("in range") || r != f_closed(n, k).expect("in range") {
                bad.push(format!("f({n},{k})"));
            }
        }
        if t.s(n, n as i64 - 1).expect("in range") != factorial(n - 1) {
            bad.push(format!("s({n},{})", n - 1));
        }
    }
    FixtureCheck::holds(
        format!("f/identities/{n_max}"),
        bad.is_empty(),
        bad.join(" "),
    )
}

fn reduction_example_check() -> FixtureCheck {
    let (matrix, expected) = reduction_fixture();
    let actual = validate_cnm(matrix.clone())
        .map_err(|e| e.to_string())
        .and_then(|c| reduce_to_upper_diagonal(&c).map_err(|e| e.to_string()))
        .map(|(trace, _)| trace.to_string());
    let replayed = replay(&matrix, &expected)
        .map(|c| c.is_upper_diagonal())
        .unwrap_or(false);
    let mut check = FixtureCheck::new(
        "reduce/example",
        expected.to_string().replace('\n', "; "),
        actual.unwrap_or_else(|e| e).replace('\n', "; "),
    );
    check.pass &= replayed;
    check
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_parse() {
        assert_eq!(count_fixture().len(), 8);
        assert_eq!(b_fixture().iter().filter(|r| r.0 == 6).count(), 9);
        assert_eq!(transform_fixture().len(), 4);
        assert_eq!(irreducible_fixture()[3], (4, 13));
        let (m, trace) = reduction_fixture();
        assert_eq!(m.size(), 6);
        assert_eq!(trace.len(), 6);
        assert_eq!(tableau_fixture().len(), 2);
    }

    #[test]
    fn fast_suite_passes() {
        let failures: Vec<_> = run_suite(Suite::Fast, 2)
            .into_iter()
            .filter(|c| !c.pass)
            .collect();
        assert!(failures.is_empty(), "{failures:#?}");
    }
}
