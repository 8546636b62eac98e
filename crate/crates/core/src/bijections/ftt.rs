//! Fully-tiered trees, their weight, and the code of upper-diagonal FTTs as
//! permutations.
//!
//! Vertices are the labels `1..=n`; tiers are also `1..=n`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::permutation::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FttError {
    #[error("a tree needs at least one vertex")]
    Empty,
    #[error("a tree on {n} vertices has {} edges, found {found}", n - 1)]
    EdgeCount { n: usize, found: usize },
    #[error("label {label} outside 1..={n}")]
    LabelOutOfRange { label: usize, n: usize },
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("the edges do not connect all vertices")]
    Disconnected,
    #[error("tiering has {0} entries, expected one per vertex")]
    TieringLength(usize),
    #[error("tiering is not a bijection onto 1..=n")]
    TieringNotBijective,
    #[error("edge {small}-{large} violates t({small}) < t({large})")]
    TieringNotMonotone { small: usize, large: usize },
    #[error("not upper-diagonal: {0}")]
    NotUpperDiagonal(&'static str),
    #[error("need at least two vertices")]
    TooSmall,
    #[error("removal code entry a_{index} = {value} outside 1..={bound}")]
    CodeOutOfRange {
        index: usize,
        value: usize,
        bound: usize,
    },
    #[error("malformed removal code: {0}")]
    MalformedCode(String),
    #[error("malformed tree line: {0}")]
    MalformedTree(String),
}

/// A labelled tree on `1..=n` with a bijective tiering, monotone along edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FullyTieredTree {
    /// Sorted edges `(u, v)` with `u < v`.
    edges: Vec<(usize, usize)>,
    /// `tier[v - 1] = t(v)`.
    tier: Vec<usize>,
}

impl FullyTieredTree {
    pub fn new(n: usize, edges: &[(usize, usize)], tier: &[usize]) -> Result<Self, FttError> {
        if n == 0 {
            return Err(FttError::Empty);
        }
        if edges.len() != n - 1 {
            return Err(FttError::EdgeCount {
                n,
                found: edges.len(),
            });
        }
        if tier.len() != n {
            return Err(FttError::TieringLength(tier.len()));
        }
        let mut seen = vec![false; n];
        for &t in tier {
            if t == 0 || t > n || std::mem::replace(&mut seen[t - 1], true) {
                return Err(FttError::TieringNotBijective);
            }
        }
        let mut sorted = Vec::with_capacity(n - 1);
        for &(a, b) in edges {
            for label in [a, b] {
                if label == 0 || label > n {
                    return Err(FttError::LabelOutOfRange { label, n });
                }
            }
            if a == b {
                return Err(FttError::Loop(a));
            }
            let (u, v) = (a.min(b), a.max(b));
            if tier[u - 1] >= tier[v - 1] {
                return Err(FttError::TieringNotMonotone { small: u, large: v });
            }
            sorted.push((u, v));
        }
        sorted.sort_unstable();
        let tree = FullyTieredTree {
            edges: sorted,
            tier: tier.to_vec(),
        };
        // n-1 edges and connected <=> tree.
        let all: Vec<usize> = (1..=n).collect();
        if tree.components(&all).len() != 1 {
            return Err(FttError::Disconnected);
        }
        Ok(tree)
    }

    /// The tree with tiering `t(v) = v`.
    pub fn with_identity_tiers(n: usize, edges: &[(usize, usize)]) -> Result<Self, FttError> {
        let tier: Vec<usize> = (1..=n).collect();
        Self::new(n, edges, &tier)
    }

    pub fn size(&self) -> usize {
        self.tier.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn tier(&self, v: usize) -> usize {
        self.tier[v - 1]
    }

    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbours(v).count()
    }

    pub fn has_identity_tiers(&self) -> bool {
        self.tier.iter().enumerate().all(|(i, &t)| t == i + 1)
    }

    /// Connected components of the forest induced on `vertices`, each sorted.
    fn components(&self, vertices: &[usize]) -> Vec<Vec<usize>> {
        let inside = |v: usize| vertices.contains(&v);
        let mut seen: Vec<usize> = Vec::new();
        let mut out = Vec::new();
        for &start in vertices {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = vec![start];
            seen.push(start);
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                for w in self.neighbours(v) {
                    if inside(w) && !seen.contains(&w) {
                        seen.push(w);
                        comp.push(w);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    fn weight_of(&self, vertices: &[usize]) -> u64 {
        if vertices.len() <= 1 {
            return 0;
        }
        let v = vertices[0];
        let rest: Vec<usize> = vertices[1..].to_vec();
        self.components(&rest)
            .iter()
            .map(|comp| {
                let u = self
                    .neighbours(v)
                    .find(|w| comp.contains(w))
                    .expect("v touches every component of T - v");
                let rank = comp
                    .iter()
                    .filter(|&&w| self.tier(w) > self.tier(v) && w < u)
                    .count() as u64;
                rank + self.weight_of(comp)
            })
            .sum()
    }
}

/// The recursive weight: remove the smallest vertex `v`; each component `T_i`
/// contributes the zero-based rank of its attachment vertex among the
/// vertices of `T_i` that could have been attached to `v`, plus `ω(T_i)`.
pub fn ftt_weight(t: &FullyTieredTree) -> u64 {
    let all: Vec<usize> = (1..=t.size()).collect();
    t.weight_of(&all)
}

pub fn is_ud_ftt(t: &FullyTieredTree) -> bool {
    t.has_identity_tiers() && ftt_weight(t) == 0
}

/// An upper-diagonal FTT: identity tiering and weight zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UdFtt(FullyTieredTree);

impl UdFtt {
    pub fn tree(&self) -> &FullyTieredTree {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.size()
    }

    /// The single vertex tree.
    pub fn singleton() -> Self {
        UdFtt(FullyTieredTree::with_identity_tiers(1, &[]).expect("valid"))
    }

    /// Removes the maximal vertex, which is a leaf. `None` for a singleton.
    pub fn remove_max(&self) -> Option<(UdFtt, usize)> {
        let n = self.size();
        if n < 2 {
            return None;
        }
        let attached = self.0.neighbours(n).next().expect("connected");
        let edges: Vec<_> = self
            .0
            .edges
            .iter()
            .copied()
            .filter(|&(_, b)| b != n)
            .collect();
        let smaller =
            FullyTieredTree::with_identity_tiers(n - 1, &edges).expect("leaf removal keeps a tree");
        Some((UdFtt(smaller), attached))
    }

    /// Attaches a new maximal vertex `n + 1` to `to`.
    pub fn add_vertex(&self, to: usize) -> Result<UdFtt, FttError> {
        let n = self.size();
        if to == 0 || to > n {
            return Err(FttError::LabelOutOfRange { label: to, n });
        }
        let mut edges = self.0.edges.clone();
        edges.push((to, n + 1));
        UdFtt::try_from(FullyTieredTree::with_identity_tiers(n + 1, &edges)?)
    }
}

impl TryFrom<FullyTieredTree> for UdFtt {
    type Error = FttError;

    fn try_from(t: FullyTieredTree) -> Result<Self, FttError> {
        if !t.has_identity_tiers() {
            return Err(FttError::NotUpperDiagonal("tiering is not the identity"));
        }
        if ftt_weight(&t) != 0 {
            return Err(FttError::NotUpperDiagonal("weight is not zero"));
        }
        Ok(UdFtt(t))
    }
}

/// Text format: `n=<n>`, an optional `tiers=t1,...,tn` line (identity when
/// absent), then one `u v` edge per line. `#` lines are comments.
impl fmt::Display for FullyTieredTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.size())?;
        if !self.has_identity_tiers() {
            let tiers: Vec<String> = self.tier.iter().map(|t| t.to_string()).collect();
            writeln!(f, "tiers={}", tiers.join(","))?;
        }
        for (u, v) in &self.edges {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for FullyTieredTree {
    type Err = FttError;

    fn from_str(s: &str) -> Result<Self, FttError> {
        let bad = |l: &str| FttError::MalformedTree(l.to_string());
        let number = |t: &str, l: &str| t.trim().parse::<usize>().map_err(|_| bad(l));
        let mut n = None;
        let mut tiers = None;
        let mut edges = Vec::new();
        for line in s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
        {
            if let Some(v) = line.strip_prefix("n=") {
                n = Some(number(v, line)?);
            } else if let Some(v) = line.strip_prefix("tiers=") {
                tiers = Some(
                    v.split(',')
                        .map(|t| number(t, line))
                        .collect::<Result<Vec<_>, _>>()?,
                );
            } else {
                let mut it = line.split_whitespace();
                match (it.next(), it.next(), it.next()) {
                    (Some(u), Some(v), None) => edges.push((number(u, line)?, number(v, line)?)),
                    _ => return Err(bad(line)),
                }
            }
        }
        let n = n.ok_or_else(|| bad("missing n= line"))?;
        match tiers {
            Some(t) => FullyTieredTree::new(n, &edges, &t),
            None => FullyTieredTree::with_identity_tiers(n, &edges),
        }
    }
}

impl fmt::Display for UdFtt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl std::str::FromStr for UdFtt {
    type Err = FttError;

    fn from_str(s: &str) -> Result<Self, FttError> {
        UdFtt::try_from(s.parse::<FullyTieredTree>()?)
    }
}

/// The removal code of an upper-diagonal FTT of size `n`: `a_i` is the vertex
/// to which `n + 1 - i` is attached (so `1 <= a_i <= n - i`), and `b_i` is the
/// `a_i`-th element of the shrinking list `B_{i-1}`, `B_0 = (1, ..., n-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovalCode {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl RemovalCode {
    /// Decodes `a` into `b`, checking the bounds on `a`.
    pub fn from_a(a: Vec<usize>) -> Result<Self, FttError> {
        let m = a.len();
        let mut pool: Vec<usize> = (1..=m).collect();
        let mut b = Vec::with_capacity(m);
        for (i, &ai) in a.iter().enumerate() {
            let bound = m - i;
            if ai == 0 || ai > bound {
                return Err(FttError::CodeOutOfRange {
                    index: i + 1,
                    value: ai,
                    bound,
                });
            }
            b.push(pool.remove(ai - 1));
        }
        Ok(RemovalCode { a, b })
    }

    /// Encodes a permutation word `b` back into `a`.
    pub fn from_b(p: &Permutation) -> Self {
        let b = p.one_line();
        let mut pool: Vec<usize> = (1..=b.len()).collect();
        let a = b
            .iter()
            .map(|v| {
                let pos = pool
                    .iter()
                    .position(|x| x == v)
                    .expect("permutation letter");
                pool.remove(pos);
                pos + 1
            })
            .collect();
        RemovalCode { a, b }
    }

    pub fn permutation(&self) -> Permutation {
        Permutation::from_one_line(&self.b).expect("decoded code is a permutation")
    }
}

impl fmt::Display for RemovalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        writeln!(f, "a={}", join(&self.a))?;
        writeln!(f, "b={}", join(&self.b))
    }
}

impl std::str::FromStr for RemovalCode {
    type Err = FttError;

    fn from_str(s: &str) -> Result<Self, FttError> {
        let mut a = None;
        let mut b = None;
        for line in s.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (key, values) = line
                .split_once('=')
                .ok_or_else(|| FttError::MalformedCode(line.to_string()))?;
            let parsed = values
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| FttError::MalformedCode(t.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            match key.trim() {
                "a" => a = Some(parsed),
                "b" => b = Some(parsed),
                other => return Err(FttError::MalformedCode(other.to_string())),
            }
        }
        let a = a.ok_or_else(|| FttError::MalformedCode("missing a".into()))?;
        let code = RemovalCode::from_a(a)?;
        if let Some(b) = b {
            if b != code.b {
                return Err(FttError::MalformedCode("b does not decode from a".into()));
            }
        }
        Ok(code)
    }
}

/// Peels the maximal leaves `n, n-1, ..., 2` and records where each hung.
pub fn removal_code(t: &UdFtt) -> Result<RemovalCode, FttError> {
    if t.size() < 2 {
        return Err(FttError::TooSmall);
    }
    let mut a = Vec::with_capacity(t.size() - 1);
    let mut current = t.clone();
    while let Some((smaller, attached)) = current.remove_max() {
        a.push(attached);
        current = smaller;
    }
    RemovalCode::from_a(a)
}

/// The permutation of `S_{n-1}` encoding an upper-diagonal FTT of size `n`.
pub fn udftt_to_permutation(t: &UdFtt) -> Result<Permutation, FttError> {
    Ok(removal_code(t)?.permutation())
}

/// Rebuilds the upper-diagonal FTT of size `n` from `p` in `S_{n-1}`: vertex
/// `v = 2, ..., n` is attached to `a_{n+1-v}`.
pub fn permutation_to_udftt(p: &Permutation) -> UdFtt {
    let code = RemovalCode::from_b(p);
    let n = p.len() + 1;
    let mut t = UdFtt::singleton();
    for v in 2..=n {
        t = t
            .add_vertex(code.a[n - v])
            .expect("bounded code gives a weight-zero tree");
    }
    t
}

/// All labelled trees on `1..=n`, by Prüfer sequence.
pub fn labelled_trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    if n <= 1 {
        return vec![Vec::new()];
    }
    if n == 2 {
        return vec![vec![(1, 2)]];
    }
    let len = n - 2;
    let total = n.pow(len as u32);
    (0..total)
        .map(|mut code| {
            let seq: Vec<usize> = (0..len)
                .map(|_| {
                    let d = code % n + 1;
                    code /= n;
                    d
                })
                .collect();
            prufer_decode(n, &seq)
        })
        .collect()
}

fn prufer_decode(n: usize, seq: &[usize]) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n + 1];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = (1..=n).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf.min(s), leaf.max(s)));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (1..=n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Every fully-tiered tree on `n` vertices (trees times admissible tierings).
pub fn all_ftts(n: usize) -> Vec<FullyTieredTree> {
    let mut out = Vec::new();
    for edges in labelled_trees(n) {
        let mut tier: Vec<usize> = (1..=n).collect();
        loop {
            if let Ok(t) = FullyTieredTree::new(n, &edges, &tier) {
                out.push(t);
            }
            let mut p = Permutation::from_one_line(&tier).expect("tiering");
            if !p.next_lexicographic() {
                break;
            }
            tier = p.one_line();
        }
    }
    out.sort();
    out
}

/// Every upper-diagonal FTT on `n` vertices, by filtering all labelled trees
/// with identity tiering on weight zero.
pub fn all_ud_ftts(n: usize) -> Vec<UdFtt> {
    let mut out: Vec<UdFtt> = labelled_trees(n)
        .into_iter()
        .filter_map(|edges| FullyTieredTree::with_identity_tiers(n, &edges).ok())
        .filter_map(|t| UdFtt::try_from(t).ok())
        .collect();
    out.sort();
    out
}
