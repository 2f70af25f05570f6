//! Dynkin and extended Dynkin graphs, the bipartite block graphs of
//! invariants, and the classification of symmetric nonnegative integer
//! matrices with Perron root below 2.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::Invariant;
use crate::linalg::{integer_nullspace, leading_principal_minors};
use crate::numeric::{cos_approx, default_precision};

pub type Adjacency = Vec<Vec<i64>>;

/// Tolerance for eigenvalue comparisons.
pub const SPECTRUM_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GraphKind {
    A(usize),
    D(usize),
    E6,
    E7,
    E8,
    ExtendedA(usize),
    ExtendedD(usize),
    ExtendedE6,
    ExtendedE7,
    ExtendedE8,
    /// Path on `r >= 2` nodes with a loop at one end.
    Tadpole(usize),
    /// One node with a loop; the tadpole on one node.
    Loop,
    Unknown,
}

impl GraphKind {
    pub fn is_ade(self) -> bool {
        matches!(self, GraphKind::A(_) | GraphKind::D(_) | GraphKind::E6 | GraphKind::E7 | GraphKind::E8)
    }

    pub fn is_extended(self) -> bool {
        matches!(
            self,
            GraphKind::ExtendedA(_)
                | GraphKind::ExtendedD(_)
                | GraphKind::ExtendedE6
                | GraphKind::ExtendedE7
                | GraphKind::ExtendedE8
        )
    }

    pub fn node_count(self) -> Option<usize> {
        use GraphKind::*;
        Some(match self {
            A(r) | D(r) | Tadpole(r) => r,
            E6 => 6,
            E7 => 7,
            E8 => 8,
            ExtendedA(r) | ExtendedD(r) => r + 1,
            ExtendedE6 => 7,
            ExtendedE7 => 8,
            ExtendedE8 => 9,
            Loop => 1,
            Unknown => return None,
        })
    }

    /// Coxeter number, for kinds whose spectrum is `2cos(πm/h)`.
    pub fn coxeter(self) -> Option<u64> {
        use GraphKind::*;
        match self {
            A(r) => Some(r as u64 + 1),
            D(r) => Some(2 * r as u64 - 2),
            E6 => Some(12),
            E7 => Some(18),
            E8 => Some(30),
            Tadpole(r) => Some(2 * r as u64 + 1),
            Loop => Some(3),
            _ => None,
        }
    }

    pub fn exponents(self) -> Option<Vec<u64>> {
        use GraphKind::*;
        let mut e = match self {
            A(r) => (1..=r as u64).collect(),
            D(r) => {
                let mut v: Vec<u64> = (0..r as u64 - 1).map(|i| 2 * i + 1).collect();
                v.push(r as u64 - 1);
                v
            }
            E6 => vec![1, 4, 5, 7, 8, 11],
            E7 => vec![1, 5, 7, 9, 11, 13, 17],
            E8 => vec![1, 7, 11, 13, 17, 19, 23, 29],
            Tadpole(r) => (0..r as u64).map(|i| 2 * i + 1).collect(),
            Loop => vec![1],
            _ => return None,
        };
        e.sort_unstable();
        Some(e)
    }

    pub fn adjacency(self) -> Option<Adjacency> {
        use GraphKind::*;
        Some(match self {
            A(r) if r >= 1 => path(r),
            D(r) if r >= 4 => {
                let mut m = path(r - 1);
                attach(&mut m, r - 3);
                m
            }
            E6 => star(&[2, 2, 1]),
            E7 => star(&[2, 3, 1]),
            E8 => star(&[2, 4, 1]),
            ExtendedA(1) => vec![vec![0, 2], vec![2, 0]],
            ExtendedA(r) if r >= 2 => {
                let mut m = path(r + 1);
                m[0][r] = 1;
                m[r][0] = 1;
                m
            }
            ExtendedD(r) if r >= 4 => {
                // chain of r−3 nodes with two leaves at each end
                let mut m = path(r - 3);
                attach(&mut m, 0);
                attach(&mut m, 0);
                attach(&mut m, r - 4);
                attach(&mut m, r - 4);
                m
            }
            ExtendedE6 => star(&[2, 2, 2]),
            ExtendedE7 => star(&[3, 3, 1]),
            ExtendedE8 => star(&[5, 2, 1]),
            Tadpole(r) if r >= 2 => {
                let mut m = path(r);
                m[r - 1][r - 1] = 1;
                m
            }
            Loop => vec![vec![1]],
            _ => return None,
        })
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use GraphKind::*;
        match self {
            A(r) => write!(f, "A{r}"),
            D(r) => write!(f, "D{r}"),
            E6 | E7 | E8 => write!(f, "{self:?}"),
            ExtendedA(r) => write!(f, "extended-A{r}"),
            ExtendedD(r) => write!(f, "extended-D{r}"),
            ExtendedE6 => write!(f, "extended-E6"),
            ExtendedE7 => write!(f, "extended-E7"),
            ExtendedE8 => write!(f, "extended-E8"),
            Tadpole(r) => write!(f, "T{r}"),
            Loop => write!(f, "loop"),
            Unknown => write!(f, "unknown"),
        }
    }
}

impl FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use GraphKind::*;
        let bad = || Error::Parse(format!("unknown graph kind '{s}'"));
        let (extended, body) = match s.strip_prefix("extended-") {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let kind = match (extended, body) {
            (false, "loop") => Loop,
            (false, "unknown") => Unknown,
            (false, "E6") => E6,
            (false, "E7") => E7,
            (false, "E8") => E8,
            (true, "E6") => ExtendedE6,
            (true, "E7") => ExtendedE7,
            (true, "E8") => ExtendedE8,
            _ => {
                let (head, rank) = body.split_at(1);
                let r: usize = rank.parse().map_err(|_| bad())?;
                match (extended, head) {
                    (false, "A") => A(r),
                    (false, "D") => D(r),
                    (false, "T") => Tadpole(r),
                    (true, "A") => ExtendedA(r),
                    (true, "D") => ExtendedD(r),
                    _ => return Err(bad()),
                }
            }
        };
        // reject ranks the kind has no graph for
        if kind != Unknown && kind.adjacency().is_none() {
            return Err(bad());
        }
        Ok(kind)
    }
}

fn path(r: usize) -> Adjacency {
    let mut m = vec![vec![0; r]; r];
    for i in 1..r {
        m[i - 1][i] = 1;
        m[i][i - 1] = 1;
    }
    m
}

/// Adds a new node joined to `at`.
fn attach(m: &mut Adjacency, at: usize) {
    let k = m.len();
    m.iter_mut().for_each(|row| row.push(0));
    m.push(vec![0; k + 1]);
    m[k][at] = 1;
    m[at][k] = 1;
}

/// A center with arms of the given lengths.
fn star(arms: &[usize]) -> Adjacency {
    let mut m = vec![vec![0]];
    for &len in arms {
        let mut prev = 0;
        for _ in 0..len {
            attach(&mut m, prev);
            prev = m.len() - 1;
        }
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DynkinGraph {
    pub kind: GraphKind,
    pub nodes: Vec<String>,
    pub adjacency: Adjacency,
    pub coxeter: Option<u64>,
    pub exponents: Option<Vec<u64>>,
}

impl DynkinGraph {
    pub fn from_kind(kind: GraphKind) -> Option<Self> {
        let adjacency = kind.adjacency()?;
        Some(DynkinGraph {
            kind,
            nodes: (1..=adjacency.len()).map(|i| i.to_string()).collect(),
            adjacency,
            coxeter: kind.coxeter(),
            exponents: kind.exponents(),
        })
    }

    /// Wraps an arbitrary adjacency matrix, identifying its kind.
    pub fn from_adjacency(adjacency: Adjacency) -> Result<Self> {
        check_symmetric(&adjacency)?;
        let kind = identify_graph(&adjacency);
        Ok(DynkinGraph {
            kind,
            nodes: (1..=adjacency.len()).map(|i| i.to_string()).collect(),
            adjacency,
            coxeter: kind.coxeter(),
            exponents: kind.exponents(),
        })
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eigenvalues(&self.adjacency)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for name in &self.nodes {
            s += &format!("  \"{name}\";\n");
        }
        for i in 0..self.len() {
            for j in i..self.len() {
                for _ in 0..self.adjacency[i][j] {
                    s += &format!("  \"{}\" -- \"{}\";\n", self.nodes[i], self.nodes[j]);
                }
            }
        }
        s + "}\n"
    }
}

/// Catalog of A, D, E, extended and tadpole graphs up to `max_rank`.
///
/// Ranks follow the unextended names: `extended-A_r` has `r + 1` nodes.
/// The tadpole on one node is listed as [`GraphKind::Loop`].
pub fn dynkin_catalog(max_rank: usize) -> Vec<DynkinGraph> {
    let mut kinds = Vec::new();
    for r in 1..=max_rank {
        kinds.push(GraphKind::A(r));
    }
    for r in 4..=max_rank {
        kinds.push(GraphKind::D(r));
    }
    for (r, k) in [(6, GraphKind::E6), (7, GraphKind::E7), (8, GraphKind::E8)] {
        if r <= max_rank {
            kinds.push(k);
        }
    }
    for r in 1..=max_rank {
        kinds.push(GraphKind::ExtendedA(r));
    }
    for r in 4..=max_rank {
        kinds.push(GraphKind::ExtendedD(r));
    }
    for (r, k) in [(6, GraphKind::ExtendedE6), (7, GraphKind::ExtendedE7), (8, GraphKind::ExtendedE8)] {
        if r <= max_rank {
            kinds.push(k);
        }
    }
    kinds.push(GraphKind::Loop);
    for r in 2..=max_rank {
        kinds.push(GraphKind::Tadpole(r));
    }
    kinds.into_iter().filter_map(DynkinGraph::from_kind).collect()
}

fn check_symmetric(a: &[Vec<i64>]) -> Result<()> {
    let k = a.len();
    if let Some(row) = a.iter().find(|r| r.len() != k) {
        return Err(Error::Dimension {
            expected: k,
            found: format!("row of length {}", row.len()),
        });
    }
    if (0..k).any(|i| (0..k).any(|j| a[i][j] != a[j][i])) {
        return Err(Error::NotSymmetric);
    }
    if a.iter().flatten().any(|&x| x < 0) {
        return Err(Error::Invalid("negative adjacency entry".into()));
    }
    Ok(())
}

/// Whether the Perron root of `a` is below 2, decided exactly: `2I − A`
/// must be positive definite, i.e. all leading principal minors positive.
pub fn radius_lt2(a: &[Vec<i64>]) -> Result<bool> {
    check_symmetric(a)?;
    let m: Adjacency = (0..a.len())
        .map(|i| (0..a.len()).map(|j| if i == j { 2 - a[i][j] } else { -a[i][j] }).collect())
        .collect();
    Ok(leading_principal_minors(&m).iter().all(|d| d.is_positive()))
}

/// A strictly positive integer vector `v` with `A v = 2 v`, if one exists.
pub fn perron_certificate(a: &[Vec<i64>]) -> Option<Vec<BigInt>> {
    let m: Adjacency = (0..a.len())
        .map(|i| (0..a.len()).map(|j| a[i][j] - if i == j { 2 } else { 0 }).collect())
        .collect();
    integer_nullspace(&m).into_iter().find_map(|v| {
        if v.iter().all(|x| x.is_positive()) {
            Some(v)
        } else if v.iter().all(|x| x.is_negative()) {
            Some(v.into_iter().map(|x| -x).collect())
        } else {
            None
        }
    })
}

pub fn is_connected(a: &[Vec<i64>]) -> bool {
    let k = a.len();
    if k == 0 {
        return false;
    }
    let mut seen = vec![false; k];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..k {
            if !seen[j] && a[i][j] != 0 {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn node_signature(a: &[Vec<i64>], i: usize) -> (i64, Vec<i64>) {
    let mut row: Vec<i64> = (0..a.len()).filter(|&j| j != i && a[i][j] != 0).map(|j| a[i][j]).collect();
    row.sort_unstable();
    (a[i][i], row)
}

/// Exhaustive isomorphism test with node-signature pruning.
pub fn isomorphic(a: &[Vec<i64>], b: &[Vec<i64>]) -> bool {
    let k = a.len();
    if b.len() != k {
        return false;
    }
    let sa: Vec<_> = (0..k).map(|i| node_signature(a, i)).collect();
    let sb: Vec<_> = (0..k).map(|i| node_signature(b, i)).collect();
    let (mut xa, mut xb) = (sa.clone(), sb.clone());
    xa.sort();
    xb.sort();
    if xa != xb {
        return false;
    }
    fn extend(a: &[Vec<i64>], b: &[Vec<i64>], sa: &[(i64, Vec<i64>)], sb: &[(i64, Vec<i64>)], map: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let i = map.len();
        if i == a.len() {
            return true;
        }
        for j in 0..b.len() {
            if used[j] || sa[i] != sb[j] {
                continue;
            }
            if (0..i).any(|p| a[i][p] != b[j][map[p]]) {
                continue;
            }
            used[j] = true;
            map.push(j);
            if extend(a, b, sa, sb, map, used) {
                return true;
            }
            map.pop();
            used[j] = false;
        }
        false
    }
    extend(a, b, &sa, &sb, &mut Vec::with_capacity(k), &mut vec![false; k])
}

/// Catalog kind of a connected graph up to isomorphism, or `Unknown`.
pub fn identify_graph(a: &[Vec<i64>]) -> GraphKind {
    if check_symmetric(a).is_err() || !is_connected(a) {
        return GraphKind::Unknown;
    }
    let k = a.len();
    let mut candidates = vec![GraphKind::A(k), GraphKind::D(k), GraphKind::Tadpole(k)];
    candidates.extend([GraphKind::E6, GraphKind::E7, GraphKind::E8]);
    if k >= 2 {
        candidates.push(GraphKind::ExtendedA(k - 1));
        candidates.push(GraphKind::ExtendedD(k - 1));
    }
    candidates.extend([GraphKind::ExtendedE6, GraphKind::ExtendedE7, GraphKind::ExtendedE8, GraphKind::Loop]);
    candidates
        .into_iter()
        .filter(|c| c.node_count() == Some(k))
        .find(|c| c.adjacency().is_some_and(|m| isomorphic(a, &m)))
        .unwrap_or(GraphKind::Unknown)
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn eigenvalues(a: &[Vec<i64>]) -> Vec<f64> {
    let k = a.len();
    let m = DMatrix::from_fn(k, k, |i, j| a[i][j] as f64);
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// `2cos(π m / h)` for each exponent, ascending.
pub fn exponent_spectrum(h: u64, exponents: &[u64]) -> Vec<f64> {
    let p = default_precision();
    let mut v: Vec<f64> = exponents.iter().map(|&m| 2.0 * cos_approx(h, m as i64, p).to_f64()).collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn spectra_match(x: &[f64], y: &[f64]) -> bool {
    x.len() == y.len() && x.iter().zip(y).all(|(a, b)| (a - b).abs() < SPECTRUM_TOLERANCE)
}

/// One connected component of a [`BlockGraph`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockComponent {
    pub left: Vec<u64>,
    pub right: Vec<u64>,
    /// Adjacency over `left` then `right`.
    pub adjacency: Adjacency,
    pub kind: GraphKind,
    pub certified: bool,
}

/// Bipartite graph with `M_ab` edges between left `a` and right `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockGraph {
    pub left: Vec<u64>,
    pub right: Vec<u64>,
    pub edges: Vec<(u64, u64, i64)>,
    pub components: Vec<BlockComponent>,
}

impl BlockGraph {
    pub fn kinds(&self) -> Vec<GraphKind> {
        self.components.iter().map(|c| c.kind).collect()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for a in &self.left {
            s += &format!("  L{a};\n");
        }
        for b in &self.right {
            s += &format!("  R{b};\n");
        }
        for &(a, b, v) in &self.edges {
            for _ in 0..v {
                s += &format!("  L{a} -- R{b};\n");
            }
        }
        s + "}\n"
    }
}

/// The block graph of `m`. Requires the block of `M` containing `(1,1)` to be
/// the 2×2 all-ones matrix.
pub fn block_graph(m: &Invariant) -> Result<BlockGraph> {
    let inapplicable = || Error::Inapplicable {
        family: m.name(),
        n: m.n(),
    };
    let vb = m.vacuum_block().ok_or_else(inapplicable)?;
    if vb.rows.len() != 2 || vb.cols.len() != 2 || vb.rows.iter().any(|&a| vb.cols.iter().any(|&b| m.get(a, b) != 1)) {
        return Err(inapplicable());
    }
    let edges: Vec<(u64, u64, i64)> = m.support().collect();
    let mut components = Vec::new();
    for block in m.blocks() {
        let (l, r) = (block.rows.len(), block.cols.len());
        let mut adj = vec![vec![0; l + r]; l + r];
        for (i, &a) in block.rows.iter().enumerate() {
            for (j, &b) in block.cols.iter().enumerate() {
                let v = m.get(a, b);
                adj[i][l + j] = v;
                adj[l + j][i] = v;
            }
        }
        let kind = identify_graph(&adj);
        let certified = kind.is_extended() && perron_certificate(&adj).is_some();
        components.push(BlockComponent {
            left: block.rows,
            right: block.cols,
            adjacency: adj,
            kind,
            certified,
        });
    }
    let left = components.iter().flat_map(|c| c.left.clone()).collect::<std::collections::BTreeSet<_>>();
    let right = components.iter().flat_map(|c| c.right.clone()).collect::<std::collections::BTreeSet<_>>();
    Ok(BlockGraph {
        left: left.into_iter().collect(),
        right: right.into_iter().collect(),
        edges,
        components,
    })
}

/// Largest graph size accepted by [`spectrum_match_graphs`].
pub const SPECTRUM_MAX_NODES: usize = 10;

/// Catalog graphs on `max_nodes` nodes whose spectrum is
/// `{2cos(πa/n) with multiplicity M_aa}`.
pub fn spectrum_match_graphs(n: u64, m: &Invariant, max_nodes: usize) -> Result<Vec<DynkinGraph>> {
    if max_nodes > SPECTRUM_MAX_NODES {
        return Err(Error::Guard(format!("max_nodes {max_nodes} exceeds {SPECTRUM_MAX_NODES}")));
    }
    if m.n() != n {
        return Err(Error::OrderMismatch(m.n(), n));
    }
    let exps = m.exponents();
    if exps.len() != max_nodes {
        return Err(Error::Invalid(format!(
            "diagonal mass {} differs from max_nodes {max_nodes}",
            exps.len()
        )));
    }
    let target = exponent_spectrum(n, &exps);
    Ok(dynkin_catalog(max_nodes)
        .into_iter()
        .filter(|g| g.len() == max_nodes && spectra_match(&g.eigenvalues(), &target))
        .collect())
}

/// Largest size accepted by [`enumerate_norm_lt2`].
pub const NORM_MAX_NODES: usize = 8;

/// All connected symmetric nonnegative integer matrices with Perron root
/// below 2 on at most `max_nodes` nodes, up to isomorphism.
///
/// Graphs are grown one node at a time; removing a non-cut node of a
/// connected graph keeps it connected and cannot raise the Perron root, so
/// every graph arises from a smaller one in the list.
pub fn enumerate_norm_lt2(max_nodes: usize, allow_loops: bool) -> Result<Vec<DynkinGraph>> {
    if max_nodes > NORM_MAX_NODES {
        return Err(Error::Guard(format!("max_nodes {max_nodes} exceeds {NORM_MAX_NODES}")));
    }
    // weights 2 give Perron root >= 2; they are tried and rejected by the test
    let loop_values: &[i64] = if allow_loops { &[0, 1, 2] } else { &[0] };
    let mut level: Vec<Adjacency> = Vec::new();
    for &l in loop_values {
        let g = vec![vec![l]];
        if radius_lt2(&g)? {
            level.push(g);
        }
    }
    let mut all = level.clone();
    for k in 1..max_nodes {
        let mut next: Vec<Adjacency> = Vec::new();
        for g in &level {
            for code in 1..3usize.pow(k as u32) {
                let mut edges = Vec::with_capacity(k);
                let mut c = code;
                for _ in 0..k {
                    edges.push((c % 3) as i64);
                    c /= 3;
                }
                for &l in loop_values {
                    let mut h: Adjacency = g.clone();
                    for (row, &e) in h.iter_mut().zip(&edges) {
                        row.push(e);
                    }
                    let mut last = edges.clone();
                    last.push(l);
                    h.push(last);
                    if radius_lt2(&h)? && !next.iter().any(|x| isomorphic(x, &h)) {
                        next.push(h);
                    }
                }
            }
        }
        all.extend(next.iter().cloned());
        level = next;
    }
    let mut out: Vec<DynkinGraph> = all.into_iter().map(DynkinGraph::from_adjacency).collect::<Result<_>>()?;
    out.sort_by_key(|g| (g.len(), g.kind));
    Ok(out)
}

/// Parses a square adjacency matrix: one row per line, whitespace separated.
pub fn parse_adjacency(text: &str) -> Result<Adjacency> {
    let rows: Adjacency = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            l.split_whitespace()
                .map(|t| t.parse::<i64>().map_err(|_| Error::Parse(format!("bad integer '{t}'"))))
                .collect()
        })
        .collect::<Result<_>>()?;
    if rows.is_empty() {
        return Err(Error::Parse("empty adjacency matrix".into()));
    }
    check_symmetric(&rows)?;
    Ok(rows)
}

/// Whether `v` is an integer eigenvector of `a` for eigenvalue 2.
pub fn is_perron_vector(a: &[Vec<i64>], v: &[BigInt]) -> bool {
    a.iter().zip(v).all(|(row, vi)| {
        let s: BigInt = row.iter().zip(v).map(|(&x, y)| BigInt::from(x) * y).sum();
        (s - vi * BigInt::from(2)).is_zero()
    })
}
