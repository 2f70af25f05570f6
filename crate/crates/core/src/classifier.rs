//! Exact commutant of `(S̃, T)` and enumeration of all physical invariants.
//!
//! The unknowns are the entries of `M` on the support allowed by the T-rule
//! and the Galois sign rule, both necessary for nonnegative solutions. The
//! commutation equations `M S̃ − S̃ M = 0` are expanded into `φ(2n)` integer
//! equations per cell and solved by fraction-free elimination. Integer points
//! of the solution space are then enumerated depth first over pivot
//! coordinates, pruned by per-entry bounds and by the vacuum identity
//! `Σ S_1a M_ab S_1b = M_11 = 1` evaluated with certified intervals.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::ExponentSum;
use crate::error::{Error, Result};
use crate::galois::{sign_mismatch, GaloisAction};
use crate::invariants::{theorem_list, verify_physical, Invariant, Label};
use crate::linalg::{clear_denominators, rref_with_order, IncrementalEchelon};
use crate::modular::{imag_enclosure, ModularData};
use crate::numeric::{certified_sign, default_precision, sin_approx, BigInterval, Interval, TrigTable};

/// Smallest integer `N >= 1 / S_11²`.
pub fn entry_bound(md: &ModularData) -> u64 {
    pair_bound(md, 1, 1)
}

/// Smallest integer `N >= 1 / (S_1a S_1b) = n / (2 sin(πa/n) sin(πb/n))`.
///
/// Certified: a float guess is corrected upward using an exact test for
/// `N = 1/(S_1a S_1b)` in `Z[ζ]` and high-precision enclosures otherwise.
pub fn pair_bound(md: &ModularData, a: u64, b: u64) -> u64 {
    let n = md.n();
    let precision = default_precision();
    let sa = sin_approx(n, a as i64, precision).interval();
    let sb = sin_approx(n, b as i64, precision).interval();
    let t = Interval::point(2.0).mul(sa).mul(sb);
    // n / t.hi is a lower bound for the target
    let q_lo = Interval::point(n as f64).mul(t.recip().expect("sines of labels are positive"));
    let mut guess = (q_lo.lo.floor().max(1.0)) as u64;
    // N·t − n >= 0 ⇔ N >= 1/(S_1a S_1b)
    let covers = |big_n: u64| {
        let exact_zero = || {
            // N · S̃_1a · S̃_1b + 2n = 0 ⇔ N = n / (2 sin sin)
            let mut e = ExponentSum::new(2 * n);
            let (a, b, k) = (a as i64, b as i64, big_n as i128);
            e.add(a + b, k);
            e.add(-a - b, k);
            e.add(a - b, -k);
            e.add(b - a, -k);
            e.add(0, 2 * n as i128);
            e.is_zero_in(md.ring())
        };
        let enclose = |p| {
            let sa = sin_approx(n, a as i64, p).big_interval();
            let sb = sin_approx(n, b as i64, p).big_interval();
            let bits = sa.bits;
            BigInterval::from_int(2 * big_n, bits)
                .mul(&sa.mul(&sb))
                .sub(&BigInterval::from_int(n, bits))
        };
        certified_sign(exact_zero, enclose, precision) != Ordering::Less
    };
    while !covers(guess) {
        guess += 1;
    }
    guess
}

/// Exact basis of the matrices supported on the filtered support that
/// commute with `S̃` (they commute with `T` by the choice of support).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CommutantBasis {
    pub n: u64,
    /// Allowed `(a, b)` pairs in row-major order.
    pub support: Vec<(u64, u64)>,
    /// Rational coordinates over `support`.
    #[serde(skip)]
    pub basis: Vec<Vec<BigRational>>,
    pub dimension: usize,
}

impl CommutantBasis {
    pub fn index_of(&self, a: u64, b: u64) -> Option<usize> {
        self.support.iter().position(|&p| p == (a, b))
    }

    /// Basis vector `i` scaled to a primitive integer matrix.
    pub fn integer_matrix(&self, i: usize) -> Invariant {
        let v = clear_denominators(&self.basis[i]);
        let mut m = Invariant::zeros(self.n).expect("n >= 3");
        for (&(a, b), x) in self.support.iter().zip(&v) {
            m.set(a, b, x.to_i64().expect("basis entry fits i64"));
        }
        m
    }

    /// Coordinates of a matrix over the support; `None` if it has entries off it.
    pub fn coordinates(&self, m: &Invariant) -> Option<Vec<i64>> {
        let on: Vec<i64> = self.support.iter().map(|&(a, b)| m.get(a, b)).collect();
        let total: i64 = m.support().map(|(_, _, v)| v.abs()).sum();
        (on.iter().map(|v| v.abs()).sum::<i64>() == total).then_some(on)
    }
}

/// Pairs passing `a² ≡ b² (mod 4n)` and `ε_ℓ(a) = ε_ℓ(b)` for all `ℓ ∈ L`.
pub fn filtered_support(md: &ModularData) -> Vec<(u64, u64)> {
    let actions = GaloisAction::all(md.n());
    md.labels()
        .flat_map(|a| md.labels().map(move |b| (a, b)))
        .filter(|&(a, b)| md.t_allowed(a, b) && sign_mismatch(&actions, a, b).is_none())
        .collect()
}

pub fn commutant_basis(md: &ModularData) -> CommutantBasis {
    let support = filtered_support(md);
    let s = support.len();
    let index: HashMap<(u64, u64), usize> = support.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut by_row: Vec<Vec<(u64, usize)>> = vec![Vec::new(); md.dim() + 1];
    let mut by_col: Vec<Vec<(u64, usize)>> = vec![Vec::new(); md.dim() + 1];
    for (&(a, b), &i) in &index {
        by_row[a as usize].push((b, i));
        by_col[b as usize].push((a, i));
    }

    let ring = md.ring();
    let phi = ring.degree();
    let mut ech = IncrementalEchelon::new(s);
    let mut rows = vec![vec![0i64; s]; phi];
    // (M S̃ − S̃ M)_ij = Σ_b M_ib S̃_bj − Σ_a S̃_ia M_aj
    'cells: for i in md.labels() {
        for j in md.labels() {
            rows.iter_mut().for_each(|r| r.iter_mut().for_each(|x| *x = 0));
            let mut add = |var: usize, exponent: i64, sign: i64| {
                let plus = ring.monomial_coeffs(exponent);
                let minus = ring.monomial_coeffs(-exponent);
                for t in 0..phi {
                    rows[t][var] += sign * (plus[t] - minus[t]);
                }
            };
            for &(b, var) in &by_row[i as usize] {
                add(var, (b * j) as i64, 1);
            }
            for &(a, var) in &by_col[j as usize] {
                add(var, (i * a) as i64, -1);
            }
            for r in &rows {
                ech.push(r);
            }
            if ech.rank() == s {
                break 'cells;
            }
        }
    }
    let basis = ech.nullspace();
    CommutantBasis {
        n: md.n(),
        dimension: basis.len(),
        support,
        basis,
    }
}

/// Search counters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub leaves: u64,
    /// Leaves that failed exact re-verification (always 0 unless a bug).
    pub rejected: u64,
    #[serde(with = "duration_secs")]
    pub elapsed: Duration,
}

mod duration_secs {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_secs_f64(f64::deserialize(d)?))
    }
}

/// Coordinate order for the enumeration: `(1,1)`, then first row, then first
/// column, then the rest in row-major order.
pub fn vacuum_first_order(cb: &CommutantBasis) -> Vec<usize> {
    let rank = |&(a, b): &(u64, u64)| match (a, b) {
        (1, 1) => 0,
        (1, _) => 1,
        (_, 1) => 2,
        _ => 3,
    };
    let mut order: Vec<usize> = (0..cb.support.len()).collect();
    order.sort_by_key(|&i| (rank(&cb.support[i]), i));
    order
}

/// All physical invariants at `md.n()`.
pub fn enumerate_physical(md: &ModularData) -> Vec<Invariant> {
    let cb = commutant_basis(md);
    let order = vacuum_first_order(&cb);
    enumerate_with_order(md, &cb, &order).0
}

/// Enumeration with an explicit pivot ordering over the support indices.
pub fn enumerate_with_order(md: &ModularData, cb: &CommutantBasis, order: &[usize]) -> (Vec<Invariant>, SearchStats) {
    let start = Instant::now();
    let (rows, pivots) = rref_with_order(&cb.basis, order);
    let d = rows.len();
    let s = cb.support.len();

    // rows[i] = num[i] / den, common denominator
    let den = rows.iter().flatten().fold(BigInt::from(1), |l, x| l.lcm(x.denom()));
    let num: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    (x * BigRational::from_integer(den.clone()))
                        .to_integer()
                        .to_i128()
                        .expect("basis coordinate fits i128")
                })
                .collect()
        })
        .collect();
    let den = den.to_i128().expect("denominator fits i128");

    // coordinates settled once pivot k is assigned
    let mut settled: Vec<Vec<usize>> = vec![Vec::new(); d];
    for q in 0..s {
        if let Some(k) = (0..d).rev().find(|&k| num[k][q] != 0) {
            settled[k].push(q);
        }
    }
    let trig = TrigTable::new(md.n(), default_precision());
    let weight: Vec<Interval> = cb.support.iter().map(|&(a, b)| md.vacuum_weight(&trig, a, b)).collect();
    let mut bound_cache: HashMap<(u64, u64), i128> = HashMap::new();
    let bound: Vec<i128> = cb
        .support
        .iter()
        .map(|&(a, b)| {
            let key = if a <= b { (a, b) } else { (b, a) };
            *bound_cache.entry(key).or_insert_with(|| pair_bound(md, a, b) as i128)
        })
        .collect();
    let vac = cb.index_of(1, 1).expect("(1,1) always passes both selection rules");

    let ctx = Search {
        num: &num,
        den,
        pivots: &pivots,
        settled: &settled,
        weight: &weight,
        bound: &bound,
        vac,
    };
    let mut stats = SearchStats::default();
    let mut coeffs = vec![0i128; d];
    let mut found: Vec<Vec<i128>> = Vec::new();
    ctx.dfs(0, &mut coeffs, Interval::zero(), &mut found, &mut stats);

    let mut out: Vec<Invariant> = Vec::new();
    for c in found {
        let mut m = Invariant::zeros(md.n()).expect("n >= 3");
        for (q, &(a, b)) in cb.support.iter().enumerate() {
            let v: i128 = (0..d).map(|k| c[k] * num[k][q]).sum::<i128>() / den;
            m.set(a, b, v as i64);
        }
        let ok = verify_physical(md, &m).map(|r| r.passed()).unwrap_or(false);
        if !ok {
            stats.rejected += 1;
        } else if !out.iter().any(|x| x.same_matrix(&m)) {
            out.push(m);
        }
    }
    out.sort_by(|x, y| x.entries().cmp(y.entries()));
    stats.elapsed = start.elapsed();
    (out, stats)
}

struct Search<'a> {
    num: &'a [Vec<i128>],
    den: i128,
    pivots: &'a [usize],
    settled: &'a [Vec<usize>],
    weight: &'a [Interval],
    bound: &'a [i128],
    vac: usize,
}

impl Search<'_> {
    fn dfs(&self, k: usize, coeffs: &mut [i128], mass: Interval, found: &mut Vec<Vec<i128>>, stats: &mut SearchStats) {
        stats.nodes += 1;
        if k == self.pivots.len() {
            stats.leaves += 1;
            found.push(coeffs.to_vec());
            return;
        }
        let p = self.pivots[k];
        let (lo, hi) = if p == self.vac { (1, 1) } else { (0, self.bound[p]) };
        'values: for c in lo..=hi {
            coeffs[k] = c;
            let mut m = mass;
            for &q in &self.settled[k] {
                let scaled: i128 = (0..=k).map(|i| coeffs[i] * self.num[i][q]).sum();
                if scaled % self.den != 0 {
                    continue 'values;
                }
                let v = scaled / self.den;
                if v < 0 || (q == self.vac && v != 1) {
                    continue 'values;
                }
                if v > self.bound[q] {
                    // entries at later coordinates only grow with c when the
                    // coefficient is positive; stop scanning upward then
                    if q == p {
                        break 'values;
                    }
                    continue 'values;
                }
                if v != 0 {
                    m = m.add(self.weight[q].scale(v as i64));
                }
            }
            if m.lo > 1.0 {
                continue;
            }
            self.dfs(k + 1, coeffs, m, found, stats);
        }
    }
}

/// Result of [`classify`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub n: u64,
    /// Every physical invariant, labelled; sorted by label then matrix.
    pub invariants: Vec<Invariant>,
    /// Dimension of the commutant restricted to the filtered support.
    pub commutant_dimension: usize,
    /// Invariants not in the theorem list (empty when the classification holds).
    pub unexpected: Vec<Invariant>,
    pub stats: SearchStats,
}

impl ClassificationResult {
    pub fn labels(&self) -> Vec<Label> {
        self.invariants.iter().filter_map(Invariant::label).collect()
    }
}

pub fn classify(n: u64) -> Result<ClassificationResult> {
    let md = ModularData::new(n)?;
    let start = Instant::now();
    let cb = commutant_basis(&md);
    let (found, mut stats) = enumerate_with_order(&md, &cb, &vacuum_first_order(&cb));
    let expected = theorem_list(n)?;
    let mut invariants = Vec::new();
    let mut unexpected = Vec::new();
    for mut m in found {
        match expected.iter().find(|e| e.same_matrix(&m)) {
            Some(e) => m.set_label(e.label()),
            None => {
                m.set_label(Some(Label::Unknown));
                unexpected.push(m.clone());
            }
        }
        invariants.push(m);
    }
    invariants.sort_by(|x, y| (x.label(), x.entries()).cmp(&(y.label(), y.entries())));
    stats.elapsed = start.elapsed();
    Ok(ClassificationResult {
        n,
        invariants,
        commutant_dimension: cb.dimension,
        unexpected,
        stats,
    })
}

/// Largest `n` accepted by [`naive_oracle`].
pub const ORACLE_MAX_N: u64 = 10;
const ORACLE_NODE_LIMIT: u64 = 200_000_000;

/// Brute force over every matrix supported on T-allowed pairs with entries in
/// `[0, bound]` and `M_11 = 1`, accepting those with `‖MS − SM‖_max < tolerance`
/// in double precision; accepted matrices are re-verified exactly.
///
/// Entries are assigned label by label (row `k` and column `k` together) and
/// each commutator cell is tested as soon as its row and column are complete.
pub fn naive_oracle(n: u64, bound: u64, tolerance: f64) -> Result<Vec<Invariant>> {
    if n < 3 {
        return Err(Error::LevelTooSmall(n as i64));
    }
    if n > ORACLE_MAX_N {
        return Err(Error::Guard(format!("naive_oracle supports n <= {ORACLE_MAX_N}, got {n}")));
    }
    let d = (n - 1) as usize;
    let s: Vec<Vec<f64>> = (1..n)
        .map(|a| {
            (1..n)
                .map(|b| (2.0 / n as f64).sqrt() * (std::f64::consts::PI * (a * b) as f64 / n as f64).sin())
                .collect()
        })
        .collect();
    let allowed = |a: usize, b: usize| ((a + 1) * (a + 1)) % (4 * n as usize) == ((b + 1) * (b + 1)) % (4 * n as usize);
    // schedule[k]: unassigned allowed cells in row k or column k
    let mut assigned = vec![vec![false; d]; d];
    let mut schedule: Vec<Vec<(usize, usize)>> = Vec::new();
    for k in 0..d {
        let mut cells = Vec::new();
        for x in 0..d {
            for (i, j) in [(k, x), (x, k)] {
                if allowed(i, j) && !assigned[i][j] {
                    assigned[i][j] = true;
                    cells.push((i, j));
                }
            }
        }
        schedule.push(cells);
    }
    let mut oracle = Oracle {
        d,
        s,
        schedule,
        bound: bound as i64,
        tol: tolerance,
        m: vec![vec![0i64; d]; d],
        nodes: 0,
        found: Vec::new(),
    };
    oracle.step(0, 0)?;

    let md = ModularData::new(n)?;
    let mut out = Vec::new();
    for entries in oracle.found {
        let m = Invariant::new(n, entries)?;
        if verify_physical(&md, &m)?.passed() {
            out.push(m);
        }
    }
    out.sort_by(|x, y| x.entries().cmp(y.entries()));
    Ok(out)
}

struct Oracle {
    d: usize,
    s: Vec<Vec<f64>>,
    schedule: Vec<Vec<(usize, usize)>>,
    bound: i64,
    tol: f64,
    m: Vec<Vec<i64>>,
    nodes: u64,
    found: Vec<Vec<Vec<i64>>>,
}

impl Oracle {
    fn commutator(&self, i: usize, j: usize) -> f64 {
        (0..self.d)
            .map(|k| self.m[i][k] as f64 * self.s[k][j] - self.s[i][k] * self.m[k][j] as f64)
            .sum()
    }

    /// Assigns cell `idx` of label `k`'s schedule.
    fn step(&mut self, k: usize, idx: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > ORACLE_NODE_LIMIT {
            return Err(Error::Guard(format!("naive_oracle exceeded {ORACLE_NODE_LIMIT} nodes")));
        }
        if k == self.d {
            self.found.push(self.m.clone());
            return Ok(());
        }
        if idx == self.schedule[k].len() {
            // rows and columns 0..=k complete: test the newly determined cells
            for x in 0..=k {
                for (i, j) in [(k, x), (x, k)] {
                    if self.commutator(i, j).abs() >= self.tol {
                        return Ok(());
                    }
                }
            }
            return self.step(k + 1, 0);
        }
        let (i, j) = self.schedule[k][idx];
        let (lo, hi) = if (i, j) == (0, 0) { (1, 1) } else { (0, self.bound) };
        for v in lo..=hi {
            self.m[i][j] = v;
            self.step(k, idx + 1)?;
        }
        self.m[i][j] = 0;
        Ok(())
    }
}

/// Columns violating the positivity statement: `Σ_b M_1b S_ba >= 0`, with
/// equality iff column `a` of `M` vanishes. Zero is decided exactly in
/// `Z[ζ]`; the sign of a nonzero value is certified numerically.
pub fn check_positivity(md: &ModularData, m: &Invariant) -> Vec<u64> {
    let n = md.n();
    let trig = TrigTable::new(n, default_precision());
    let mut bad = Vec::new();
    for a in md.labels() {
        let mut e = ExponentSum::new(2 * n);
        for b in md.labels() {
            let v = m.get(1, b);
            if v != 0 {
                e.add_sine((a * b) as i64, v as i128);
            }
        }
        let value = e.reduce(md.ring());
        let column_zero = md.labels().all(|c| m.get(c, a) == 0);
        let ok = if value.is_zero() {
            column_zero
        } else {
            // S̃ = 2i·sin, so the sign lives in the imaginary part
            let sign = match imag_enclosure(&value, &trig).sign() {
                Some(s) if s != Ordering::Equal => s,
                _ => certified_sign(
                    || false,
                    |p| {
                        md.labels().fold(BigInterval::from_int(0, sin_approx(n, 1, p).bits), |acc, b| {
                            let v = m.get(1, b);
                            if v == 0 {
                                acc
                            } else {
                                acc.add(&sin_approx(n, (a * b) as i64, p).big_interval().scale(&BigInt::from(v)))
                            }
                        })
                    },
                    default_precision(),
                ),
            };
            sign == Ordering::Greater && !column_zero
        };
        if !ok {
            bad.push(a);
        }
    }
    bad
}

/// Every structural check applicable to a physical invariant: Galois
/// symmetry and selection, J-parity, positivity, and the two structural
/// lemmas where their hypotheses hold. Returns human-readable violations;
/// a lemma failing on a matrix meeting its hypotheses is an `Err`.
pub fn structural_violations(md: &ModularData, m: &Invariant) -> Result<Vec<String>> {
    let mut out: Vec<String> = Vec::new();
    for v in crate::galois::check_galois_symmetry(m) {
        out.push(format!(
            "Galois symmetry: l={} at ({},{}) maps to ({},{}) with {} != {}",
            v.ell, v.a, v.b, v.image.0, v.image.1, v.transformed, v.entry
        ));
    }
    for v in crate::galois::check_galois_selection(m) {
        out.push(format!("Galois selection: ({},{}) has signs differing at l={}", v.a, v.b, v.ell));
    }
    match crate::galois::check_parity(m) {
        Ok(r) => out.extend(r.violations.into_iter().map(|v| format!("J-parity: {v}"))),
        Err(e) => out.push(format!("J-parity: {e}")),
    }
    for a in check_positivity(md, m) {
        out.push(format!("positivity: column {a}"));
    }
    crate::galois::lemma1_analyze(md, m)?;
    crate::galois::lemma2_structure(m)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{build_series, Family};
    use crate::modular::build_modular_data;

    #[test]
    fn entry_bounds() {
        assert_eq!(entry_bound(&build_modular_data(3).unwrap()), 2);
        assert_eq!(entry_bound(&build_modular_data(4).unwrap()), 4);
        assert_eq!(entry_bound(&build_modular_data(12).unwrap()), 90);
    }

    #[test]
    fn pair_bounds() {
        let md12 = build_modular_data(12).unwrap();
        assert_eq!(pair_bound(&md12, 1, 1), entry_bound(&md12));
        assert_eq!(pair_bound(&md12, 6, 6), 6);
        assert_eq!(pair_bound(&build_modular_data(4).unwrap(), 2, 2), 2);
        // compare against a float evaluation away from integers
        for n in 3..25u64 {
            let md = build_modular_data(n).unwrap();
            for a in 1..n {
                for b in a..n {
                    let v = n as f64
                        / (2.0 * (std::f64::consts::PI * a as f64 / n as f64).sin()
                            * (std::f64::consts::PI * b as f64 / n as f64).sin());
                    let got = pair_bound(&md, a, b);
                    if (v - v.round()).abs() > 1e-9 {
                        assert_eq!(got, v.ceil() as u64, "n={n} a={a} b={b}");
                    } else {
                        assert_eq!(got, v.round() as u64, "n={n} a={a} b={b}");
                    }
                }
            }
        }
    }

    #[test]
    fn small_commutants() {
        for n in [3, 4] {
            let md = build_modular_data(n).unwrap();
            let cb = commutant_basis(&md);
            assert_eq!(cb.dimension, 1, "n = {n}");
            assert!(cb.integer_matrix(0).same_matrix(&Invariant::identity(n).unwrap()));
        }
    }

    #[test]
    fn basis_vectors_commute() {
        for n in [6, 12, 18, 20] {
            let md = build_modular_data(n).unwrap();
            let cb = commutant_basis(&md);
            for i in 0..cb.dimension {
                let m = cb.integer_matrix(i);
                assert!(crate::invariants::commutator_violations(&md, &m, 1).is_empty());
            }
        }
    }

    #[test]
    fn named_invariants_lie_in_the_commutant() {
        let md = build_modular_data(12).unwrap();
        let cb = commutant_basis(&md);
        assert!(cb.dimension >= 3);
        for m in theorem_list(12).unwrap() {
            assert!(cb.coordinates(&m).is_some());
        }
    }

    #[test]
    fn enumeration_examples() {
        let e3 = enumerate_physical(&build_modular_data(3).unwrap());
        assert_eq!(e3.len(), 1);
        assert!(e3[0].same_matrix(&Invariant::identity(3).unwrap()));
        let e6 = enumerate_physical(&build_modular_data(6).unwrap());
        assert_eq!(e6.len(), 2);
        let e12 = enumerate_physical(&build_modular_data(12).unwrap());
        assert_eq!(e12.len(), 3);
        for m in theorem_list(12).unwrap() {
            assert!(e12.iter().any(|x| x.same_matrix(&m)));
        }
    }

    #[test]
    fn classify_examples() {
        let r = classify(18).unwrap();
        assert_eq!(r.labels(), vec![Label::Named(Family::A), Label::Named(Family::D), Label::Named(Family::E7)]);
        assert!(r.unexpected.is_empty());
        let r = classify(11).unwrap();
        assert_eq!(r.labels(), vec![Label::Named(Family::A)]);
        assert!(matches!(classify(2), Err(Error::LevelTooSmall(2))));
    }

    #[test]
    fn oracle_examples() {
        let md6 = build_modular_data(6).unwrap();
        let o6 = naive_oracle(6, 2, 1e-8).unwrap();
        assert_eq!(o6, enumerate_physical(&md6));
        assert_eq!(o6.len(), 2);
        let o3 = naive_oracle(3, 2, 1e-8).unwrap();
        assert_eq!(o3.len(), 1);
        let o8 = naive_oracle(8, 4, 1e-8).unwrap();
        assert_eq!(o8.len(), 2);
        assert!(o8.iter().any(|m| m.same_matrix(&build_series(8, Family::D).unwrap())));
        assert!(matches!(naive_oracle(11, 1, 1e-8), Err(Error::Guard(_))));
    }

    #[test]
    fn positivity_holds_for_named_invariants() {
        for n in [6, 12, 18, 30] {
            let md = build_modular_data(n).unwrap();
            for m in theorem_list(n).unwrap() {
                assert!(check_positivity(&md, &m).is_empty(), "{} at {n}", m.name());
            }
        }
        // doubling the first-row entry of E6 breaks it at column 2
        let md = build_modular_data(12).unwrap();
        let mut m = build_series(12, Family::E6).unwrap();
        m.set(1, 7, 2);
        assert!(check_positivity(&md, &m).contains(&2));
    }
}
