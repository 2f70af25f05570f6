//! Candidate and physical invariants: the named A-D-E families, exact
//! verification of the physical-invariant axioms, exponents, and the
//! `Z = Σ M_ab χ_a χ_b*` text form.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::ExponentSum;
use crate::error::{Error, Result};
use crate::modular::ModularData;

/// The named families of the classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
    E6,
    E7,
    E8,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::A, Family::D, Family::E6, Family::E7, Family::E8];

    pub fn applies_at(self, n: u64) -> bool {
        match self {
            Family::A => n >= 3,
            Family::D => n >= 4 && n % 2 == 0,
            Family::E6 => n == 12,
            Family::E7 => n == 18,
            Family::E8 => n == 30,
        }
    }

    /// Name with rank subscript, e.g. `A11`, `D7`, `E6`.
    pub fn name_at(self, n: u64) -> String {
        match self {
            Family::A => format!("A{}", n - 1),
            Family::D => format!("D{}", n / 2 + 1),
            f => format!("{f:?}"),
        }
    }

    /// Rank of the same-named Dynkin diagram at Coxeter number `n`.
    pub fn rank_at(self, n: u64) -> usize {
        match self {
            Family::A => (n - 1) as usize,
            Family::D => (n / 2 + 1) as usize,
            Family::E6 => 6,
            Family::E7 => 7,
            Family::E8 => 8,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "D" => Ok(Family::D),
            "E6" => Ok(Family::E6),
            "E7" => Ok(Family::E7),
            "E8" => Ok(Family::E8),
            other => Err(Error::Parse(format!("unknown family '{other}'"))),
        }
    }
}

/// Classification tag of a matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    Named(Family),
    Unknown,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Named(fam) => write!(f, "{fam}"),
            Label::Unknown => write!(f, "unknown"),
        }
    }
}

/// An `(n−1)×(n−1)` integer matrix indexed by `P+`, optionally labelled.
///
/// Entries are signed so that candidate matrices read from files can fail
/// the nonnegativity axiom instead of failing to load.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Invariant {
    n: u64,
    entries: Vec<Vec<i64>>,
    label: Option<Label>,
}

impl Invariant {
    pub fn new(n: u64, entries: Vec<Vec<i64>>) -> Result<Self> {
        if n < 3 {
            return Err(Error::LevelTooSmall(n as i64));
        }
        let d = (n - 1) as usize;
        if entries.len() != d || entries.iter().any(|r| r.len() != d) {
            let found = format!(
                "{} rows of lengths {:?}",
                entries.len(),
                entries.iter().map(Vec::len).collect::<Vec<_>>()
            );
            return Err(Error::Dimension { expected: d, found });
        }
        Ok(Invariant {
            n,
            entries,
            label: None,
        })
    }

    pub fn zeros(n: u64) -> Result<Self> {
        let d = n.saturating_sub(1) as usize;
        Invariant::new(n, vec![vec![0; d]; d])
    }

    pub fn identity(n: u64) -> Result<Self> {
        let mut m = Invariant::zeros(n)?;
        for a in 1..n {
            m.set(a, a, 1);
        }
        Ok(m)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn label(&self) -> Option<Label> {
        self.label
    }

    pub fn with_label(mut self, label: Label) -> Self {
        self.label = Some(label);
        self
    }

    pub fn set_label(&mut self, label: Option<Label>) {
        self.label = label;
    }

    /// Display name: `A11`, `D7`, `E6`, or `unknown`.
    pub fn name(&self) -> String {
        match self.label {
            Some(Label::Named(f)) => f.name_at(self.n),
            _ => "unknown".to_string(),
        }
    }

    /// `M_ab` for 1-based labels.
    pub fn get(&self, a: u64, b: u64) -> i64 {
        self.entries[a as usize - 1][b as usize - 1]
    }

    pub fn set(&mut self, a: u64, b: u64, v: i64) {
        self.entries[a as usize - 1][b as usize - 1] = v;
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    /// Matrix equality, ignoring labels.
    pub fn same_matrix(&self, other: &Invariant) -> bool {
        self.n == other.n && self.entries == other.entries
    }

    pub fn labels(&self) -> impl Iterator<Item = u64> {
        1..self.n
    }

    /// Nonzero entries as `(a, b, M_ab)` in row-major order.
    pub fn support(&self) -> impl Iterator<Item = (u64, u64, i64)> + '_ {
        self.entries.iter().enumerate().flat_map(|(i, r)| {
            r.iter()
                .enumerate()
                .filter(|(_, v)| **v != 0)
                .map(move |(j, v)| (i as u64 + 1, j as u64 + 1, *v))
        })
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().flatten().all(|&v| v >= 0)
    }

    pub fn transpose(&self) -> Invariant {
        let d = self.dim();
        let entries = (0..d).map(|i| (0..d).map(|j| self.entries[j][i]).collect()).collect();
        Invariant {
            n: self.n,
            entries,
            label: self.label,
        }
    }

    /// Exponents: each `a` with `M_aa ≠ 0`, repeated `M_aa` times.
    pub fn exponents(&self) -> Vec<u64> {
        self.labels()
            .flat_map(|a| std::iter::repeat(a).take(self.get(a, a).max(0) as usize))
            .collect()
    }

    /// Indecomposable blocks: connected components of the bipartite graph
    /// joining row `a` to column `b` whenever `M_ab ≠ 0`.
    pub fn blocks(&self) -> Vec<Block> {
        let d = self.dim();
        let mut parent: Vec<usize> = (0..2 * d).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let next = p[c];
                p[c] = r;
                c = next;
            }
            r
        }
        for (a, b, _) in self.support() {
            let (x, y) = (find(&mut parent, a as usize - 1), find(&mut parent, d + b as usize - 1));
            if x != y {
                parent[x] = y;
            }
        }
        let mut groups: BTreeMap<usize, Block> = BTreeMap::new();
        let nonzero_row: Vec<bool> = (0..d).map(|i| self.entries[i].iter().any(|&v| v != 0)).collect();
        let nonzero_col: Vec<bool> = (0..d).map(|j| (0..d).any(|i| self.entries[i][j] != 0)).collect();
        for i in 0..d {
            if nonzero_row[i] {
                let r = find(&mut parent, i);
                groups.entry(r).or_default().rows.push(i as u64 + 1);
            }
        }
        for j in 0..d {
            if nonzero_col[j] {
                let r = find(&mut parent, d + j);
                groups.entry(r).or_default().cols.push(j as u64 + 1);
            }
        }
        let mut out: Vec<Block> = groups.into_values().collect();
        out.sort_by_key(|b| b.min_label());
        out
    }

    /// The block containing `(1,1)`, if `M_11 ≠ 0`.
    pub fn vacuum_block(&self) -> Option<Block> {
        if self.get(1, 1) == 0 {
            return None;
        }
        self.blocks().into_iter().find(|b| b.rows.contains(&1) && b.cols.contains(&1))
    }

    /// Matrix file text: `n`, then `n−1` rows of `n−1` integers.
    pub fn to_matrix_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for r in &self.entries {
            let line: Vec<String> = r.iter().map(|v| v.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_matrix_text(text: &str) -> Result<Invariant> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let n: u64 = lines
            .next()
            .ok_or_else(|| Error::Parse("empty matrix file".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad n: {e}")))?;
        if n < 3 {
            return Err(Error::LevelTooSmall(n as i64));
        }
        let d = (n - 1) as usize;
        let mut entries = Vec::with_capacity(d);
        for (i, line) in lines.enumerate() {
            let row: std::result::Result<Vec<i64>, _> = line.split_whitespace().map(str::parse).collect();
            let row = row.map_err(|e| Error::Parse(format!("row {}: {e}", i + 1)))?;
            if row.len() != d {
                return Err(Error::Parse(format!("row {} has {} entries, expected {d}", i + 1, row.len())));
            }
            entries.push(row);
        }
        if entries.len() != d {
            return Err(Error::Parse(format!("{} rows, expected {d}", entries.len())));
        }
        Invariant::new(n, entries)
    }

    /// Human-readable partition function.
    ///
    /// Blocks that are constant on a square index set render as
    /// `c|χa+χb+…|²`. Other blocks render term by term, grouping a row's
    /// equal off-diagonal entries as `χa(χb+χc)*`, then a column's as
    /// `(χa+χb)χc*`, then diagonal terms `|χa|²`.
    pub fn render_partition_function(&self) -> String {
        let mut squares = Vec::new();
        let mut multiples = Vec::new();
        let mut residual = Vec::new();
        for block in self.blocks() {
            match self.constant_square(&block) {
                Some(1) => squares.push(format!("|{}|²", chi_sum(&block.rows))),
                Some(c) => multiples.push(format!("{c}|{}|²", chi_sum(&block.rows))),
                None => residual.extend(self.render_residual(&block)),
            }
        }
        let terms: Vec<String> = squares.into_iter().chain(multiples).chain(residual).collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }

    fn constant_square(&self, block: &Block) -> Option<i64> {
        if block.rows != block.cols {
            return None;
        }
        let c = self.get(block.rows[0], block.rows[0]);
        let all = block.rows.iter().all(|&a| block.rows.iter().all(|&b| self.get(a, b) == c));
        all.then_some(c)
    }

    fn render_residual(&self, block: &Block) -> Vec<String> {
        let mut left: BTreeMap<(u64, u64), i64> = BTreeMap::new();
        for &a in &block.rows {
            for &b in &block.cols {
                let v = self.get(a, b);
                if v != 0 {
                    left.insert((a, b), v);
                }
            }
        }
        let mut terms = Vec::new();
        let coeff = |c: i64| if c == 1 { String::new() } else { c.to_string() };
        // rows with several equal off-diagonal entries
        for &a in &block.rows {
            let mut by_value: BTreeMap<i64, Vec<u64>> = BTreeMap::new();
            for (&(r, b), &v) in &left {
                if r == a && b != a {
                    by_value.entry(v).or_default().push(b);
                }
            }
            for (v, cols) in by_value {
                if cols.len() >= 2 {
                    terms.push(format!("{}χ{a}({})*", coeff(v), chi_sum(&cols)));
                    cols.iter().for_each(|b| {
                        left.remove(&(a, *b));
                    });
                }
            }
        }
        // columns with several equal off-diagonal entries
        for &b in &block.cols {
            let mut by_value: BTreeMap<i64, Vec<u64>> = BTreeMap::new();
            for (&(a, c), &v) in &left {
                if c == b && a != b {
                    by_value.entry(v).or_default().push(a);
                }
            }
            for (v, rows) in by_value {
                if rows.len() >= 2 {
                    terms.push(format!("{}({})χ{b}*", coeff(v), chi_sum(&rows)));
                    rows.iter().for_each(|a| {
                        left.remove(&(*a, b));
                    });
                }
            }
        }
        let (diag, off): (Vec<_>, Vec<_>) = left.into_iter().partition(|((a, b), _)| a == b);
        for ((a, b), v) in off {
            terms.push(format!("{}χ{a}χ{b}*", coeff(v)));
        }
        for ((a, _), v) in diag {
            terms.push(format!("{}|χ{a}|²", coeff(v)));
        }
        terms
    }

    /// Inverse of [`Invariant::render_partition_function`]. Also accepts `^2`
    /// for `²` and arbitrary whitespace.
    pub fn parse_partition_function(n: u64, text: &str) -> Result<Invariant> {
        let mut m = Invariant::zeros(n)?;
        let compact: String = text.replace("^2", "²").chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "0" {
            return Ok(m);
        }
        for term in split_top_level(&compact)? {
            let (c, rows, cols) = parse_term(&term)?;
            for &a in &rows {
                for &b in &cols {
                    if !(1..n).contains(&a) || !(1..n).contains(&b) {
                        return Err(Error::LabelOutOfRange(a.max(b) as i64));
                    }
                    let cur = m.get(a, b);
                    m.set(a, b, cur + c);
                }
            }
        }
        Ok(m)
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_matrix_text())
    }
}

/// An indecomposable block: nonzero rows and columns of one component.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub rows: Vec<u64>,
    pub cols: Vec<u64>,
}

impl Block {
    fn min_label(&self) -> u64 {
        self.rows.iter().chain(&self.cols).copied().min().unwrap_or(0)
    }
}

fn chi_sum(labels: &[u64]) -> String {
    labels.iter().map(|a| format!("χ{a}")).collect::<Vec<_>>().join("+")
}

fn split_top_level(s: &str) -> Result<Vec<String>> {
    let mut terms = Vec::new();
    let mut cur = String::new();
    let (mut paren, mut bar) = (0i32, false);
    for ch in s.chars() {
        match ch {
            '(' => paren += 1,
            ')' => paren -= 1,
            '|' => bar = !bar,
            '+' if paren == 0 && !bar => {
                terms.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        if paren < 0 {
            return Err(Error::Parse("unbalanced ')'".into()));
        }
        cur.push(ch);
    }
    if paren != 0 || bar {
        return Err(Error::Parse("unbalanced delimiters".into()));
    }
    terms.push(cur);
    if terms.iter().any(String::is_empty) {
        return Err(Error::Parse("empty term".into()));
    }
    Ok(terms)
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
}

impl Cursor<'_> {
    fn number(&mut self) -> Option<u64> {
        let mut s = String::new();
        while let Some(c) = self.chars.peek().copied().filter(char::is_ascii_digit) {
            s.push(c);
            self.chars.next();
        }
        s.parse().ok()
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.chars.next() {
            Some(c) if c == want => Ok(()),
            other => Err(Error::Parse(format!("expected '{want}', found {other:?}"))),
        }
    }

    fn chi(&mut self) -> Result<u64> {
        self.expect('χ')?;
        self.number().ok_or_else(|| Error::Parse("expected a label after χ".into()))
    }

    fn sum(&mut self) -> Result<Vec<u64>> {
        let mut v = vec![self.chi()?];
        while self.chars.peek() == Some(&'+') {
            self.chars.next();
            v.push(self.chi()?);
        }
        Ok(v)
    }

    fn factor(&mut self) -> Result<Vec<u64>> {
        if self.chars.peek() == Some(&'(') {
            self.chars.next();
            let v = self.sum()?;
            self.expect(')')?;
            Ok(v)
        } else {
            Ok(vec![self.chi()?])
        }
    }
}

fn parse_term(term: &str) -> Result<(i64, Vec<u64>, Vec<u64>)> {
    let mut cur = Cursor {
        chars: term.chars().peekable(),
    };
    let c = cur.number().map_or(1, |v| v as i64);
    let (rows, cols) = if cur.chars.peek() == Some(&'|') {
        cur.chars.next();
        let s = cur.sum()?;
        cur.expect('|')?;
        cur.expect('²')?;
        (s.clone(), s)
    } else {
        let r = cur.factor()?;
        let c = cur.factor()?;
        cur.expect('*')?;
        (r, c)
    };
    if cur.chars.next().is_some() {
        return Err(Error::Parse(format!("trailing characters in term '{term}'")));
    }
    Ok((c, rows, cols))
}

/// `build_series`: the matrix of a named family at `n`.
pub fn build_series(n: u64, family: Family) -> Result<Invariant> {
    if n < 3 {
        return Err(Error::LevelTooSmall(n as i64));
    }
    if !family.applies_at(n) {
        return Err(Error::Inapplicable {
            family: family.to_string(),
            n,
        });
    }
    let mut m = Invariant::zeros(n)?;
    let square = |m: &mut Invariant, set: &[u64]| {
        for &a in set {
            for &b in set {
                m.set(a, b, 1);
            }
        }
    };
    match family {
        Family::A => m = Invariant::identity(n)?,
        Family::D if n % 4 == 2 => {
            for a in (1..n / 2).step_by(2) {
                square(&mut m, &[a, n - a]);
            }
            m.set(n / 2, n / 2, 2);
        }
        Family::D => {
            // 4 | n: fix odd labels, swap even a with n − a
            for a in 1..n {
                if a % 2 == 1 {
                    m.set(a, a, 1);
                } else {
                    m.set(a, n - a, 1);
                }
            }
        }
        Family::E6 => {
            for s in [[1, 7], [4, 8], [5, 11]] {
                square(&mut m, &s);
            }
        }
        Family::E7 => {
            for s in [[1, 17], [5, 13], [7, 11]] {
                square(&mut m, &s);
            }
            for (a, b) in [(9, 3), (3, 9), (9, 15), (15, 9), (9, 9)] {
                m.set(a, b, 1);
            }
        }
        Family::E8 => {
            for s in [[1, 11, 19, 29], [7, 13, 17, 23]] {
                square(&mut m, &s);
            }
        }
    }
    Ok(m.with_label(Label::Named(family)))
}

/// Every applicable family matrix at `n`, deduplicated as matrices
/// (at `n = 4` the D matrix is the identity and is dropped).
pub fn theorem_list(n: u64) -> Result<Vec<Invariant>> {
    let mut out: Vec<Invariant> = Vec::new();
    for f in Family::ALL {
        if f.applies_at(n) {
            let m = build_series(n, f)?;
            if !out.iter().any(|x| x.same_matrix(&m)) {
                out.push(m);
            }
        }
    }
    Ok(out)
}

/// Per-axiom verdict of [`verify_physical`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhysicalReport {
    pub n: u64,
    /// `M·S̃ = S̃·M` exactly.
    pub s_commutes: bool,
    /// Cells `(a,b)` where the commutator is nonzero (truncated).
    pub s_violations: Vec<(u64, u64)>,
    /// `M_ab ≠ 0 ⇒ a² ≡ b² (mod 4n)`.
    pub t_rule: bool,
    pub t_violations: Vec<(u64, u64)>,
    pub nonnegative: bool,
    pub vacuum_normalized: bool,
}

impl PhysicalReport {
    pub fn passed(&self) -> bool {
        self.s_commutes && self.t_rule && self.nonnegative && self.vacuum_normalized
    }

    pub fn failed_axioms(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if !self.s_commutes {
            v.push("S-commutation");
        }
        if !self.t_rule {
            v.push("T-commutation");
        }
        if !self.nonnegative {
            v.push("nonnegativity");
        }
        if !self.vacuum_normalized {
            v.push("M11 = 1");
        }
        v
    }
}

const MAX_REPORTED: usize = 16;

/// Checks the four physical-invariant axioms independently, exactly.
pub fn verify_physical(md: &ModularData, m: &Invariant) -> Result<PhysicalReport> {
    if m.n() != md.n() {
        return Err(Error::Dimension {
            expected: md.dim(),
            found: format!("matrix for n = {}", m.n()),
        });
    }
    let s_violations = commutator_violations(md, m, MAX_REPORTED);
    let t_violations: Vec<(u64, u64)> = m
        .support()
        .filter(|&(a, b, _)| !md.t_allowed(a, b))
        .map(|(a, b, _)| (a, b))
        .take(MAX_REPORTED)
        .collect();
    Ok(PhysicalReport {
        n: md.n(),
        s_commutes: s_violations.is_empty(),
        s_violations,
        t_rule: t_violations.is_empty(),
        t_violations,
        nonnegative: m.is_nonnegative(),
        vacuum_normalized: m.get(1, 1) == 1,
    })
}

/// Cells where `(M S̃ − S̃ M)_ij ≠ 0` in `Z[ζ]`, at most `limit` of them.
pub fn commutator_violations(md: &ModularData, m: &Invariant, limit: usize) -> Vec<(u64, u64)> {
    let n = md.n() as i64;
    let mut acc = ExponentSum::new(md.n() * 2);
    let mut out = Vec::new();
    for i in 1..n {
        for j in 1..n {
            acc.clear();
            for k in 1..n {
                let mik = m.get(i as u64, k as u64);
                if mik != 0 {
                    acc.add_sine(k * j, mik as i128);
                }
                let mkj = m.get(k as u64, j as u64);
                if mkj != 0 {
                    acc.add_sine(i * k, -(mkj as i128));
                }
            }
            if !acc.is_zero_in(md.ring()) {
                out.push((i as u64, j as u64));
                if out.len() >= limit {
                    return out;
                }
            }
        }
    }
    out
}
