//! Galois action on `P+`, the symmetry and selection rules it imposes on
//! physical invariants, the first-row frontier scan, and checkers for the
//! structural lemmas on permutation invariants and simple-current blocks.

use std::cmp::Ordering;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::ExponentSum;
use crate::error::{Error, Result};
use crate::invariants::Invariant;
use crate::modular::ModularData;
use crate::numeric::{certified_sign, cos_approx, default_precision, TrigTable};

/// `(L, L')`: residues in `[1, 2n)` coprime to `2n`, and coprime to `n`.
pub fn ell_sets(n: u64) -> (Vec<u64>, Vec<u64>) {
    let l = (1..2 * n).filter(|l| l.gcd(&(2 * n)) == 1).collect();
    let lp = (1..2 * n).filter(|l| l.gcd(&n) == 1).collect();
    (l, lp)
}

/// `([ℓa], ε_ℓ(a))`.
///
/// With `{x}` the representative of `x` in `[0, 2n)`: if `{ℓa} < n` the image
/// is `{ℓa}` with sign `+1`, otherwise `2n − {ℓa}` with sign `−1`.
pub fn galois_perm(n: u64, ell: i64, a: u64) -> Result<(u64, i8)> {
    if n < 3 {
        return Err(Error::LevelTooSmall(n as i64));
    }
    let m = 2 * n as i64;
    if (ell.rem_euclid(m) as u64).gcd(&(2 * n)) != 1 {
        return Err(Error::NotCoprime { ell, modulus: 2 * n });
    }
    if !(1..n).contains(&a) {
        return Err(Error::LabelOutOfRange(a as i64));
    }
    let x = (ell * a as i64).rem_euclid(m) as u64;
    Ok(match x.cmp(&n) {
        Ordering::Less => (x, 1),
        Ordering::Greater => (2 * n - x, -1),
        Ordering::Equal => unreachable!("{{ℓa}} = n is impossible for ℓ coprime to 2n"),
    })
}

/// The full permutation and sign table of one `ℓ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisAction {
    pub n: u64,
    pub ell: u64,
    /// `perm[a−1] = [ℓa]`
    pub perm: Vec<u64>,
    /// `sign[a−1] = ε_ℓ(a)`
    pub sign: Vec<i8>,
}

impl GaloisAction {
    pub fn new(n: u64, ell: i64) -> Result<Self> {
        let (perm, sign) = (1..n).map(|a| galois_perm(n, ell, a)).collect::<Result<Vec<_>>>()?.into_iter().unzip();
        Ok(GaloisAction {
            n,
            ell: ell.rem_euclid(2 * n as i64) as u64,
            perm,
            sign,
        })
    }

    pub fn image(&self, a: u64) -> u64 {
        self.perm[a as usize - 1]
    }

    pub fn eps(&self, a: u64) -> i8 {
        self.sign[a as usize - 1]
    }

    /// All actions for `ℓ ∈ L`.
    pub fn all(n: u64) -> Vec<GaloisAction> {
        ell_sets(n).0.into_iter().map(|l| GaloisAction::new(n, l as i64).expect("ℓ ∈ L")).collect()
    }
}

/// Whether `ε_ℓ(a) = ε_ℓ(b)` for every `ℓ ∈ L`, and the first `ℓ` that fails.
pub fn sign_mismatch(actions: &[GaloisAction], a: u64, b: u64) -> Option<u64> {
    actions.iter().find(|g| g.eps(a) != g.eps(b)).map(|g| g.ell)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryViolation {
    pub ell: u64,
    pub a: u64,
    pub b: u64,
    /// `([ℓa], [ℓb])`
    pub image: (u64, u64),
    pub entry: i64,
    /// `ε_ℓ(a) ε_ℓ(b) M_{[ℓa],[ℓb]}`
    pub transformed: i64,
}

/// Violations of `M_ab = ε_ℓ(a) ε_ℓ(b) M_{[ℓa],[ℓb]}` over `ℓ ∈ L`.
pub fn check_galois_symmetry(m: &Invariant) -> Vec<SymmetryViolation> {
    let mut out = Vec::new();
    for g in GaloisAction::all(m.n()) {
        for a in m.labels() {
            for b in m.labels() {
                let (ia, ib) = (g.image(a), g.image(b));
                let t = (g.eps(a) * g.eps(b)) as i64 * m.get(ia, ib);
                if t != m.get(a, b) {
                    out.push(SymmetryViolation {
                        ell: g.ell,
                        a,
                        b,
                        image: (ia, ib),
                        entry: m.get(a, b),
                        transformed: t,
                    });
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionViolation {
    pub a: u64,
    pub b: u64,
    /// Smallest `ℓ ∈ L` with `ε_ℓ(a) ≠ ε_ℓ(b)`.
    pub ell: u64,
}

/// Violations of `M_ab ≠ 0 ⇒ ε_ℓ(a) = ε_ℓ(b)` for all `ℓ ∈ L`.
pub fn check_galois_selection(m: &Invariant) -> Vec<SelectionViolation> {
    let actions = GaloisAction::all(m.n());
    m.support()
        .filter_map(|(a, b, _)| sign_mismatch(&actions, a, b).map(|ell| SelectionViolation { a, b, ell }))
        .collect()
}

/// Labels `a ∉ {1, n−1}` that may carry a nonzero first-row entry:
/// `(a−1)(a+1) ≡ 0 (mod 4n)` and `cos(πℓ(a−1)/n) > cos(πℓ(a+1)/n)` for all
/// `ℓ` coprime to `n` in `[1, 2n)`.
pub fn frontier_scan(n: u64) -> Vec<u64> {
    assert!(n >= 3, "frontier_scan needs n >= 3");
    let (_, lp) = ell_sets(n);
    let precision = default_precision();
    let trig = TrigTable::new(n, precision);
    let md_ring = crate::cyclotomic::CyclotomicRing::new(2 * n);
    (2..n - 1)
        .filter(|&a| ((a - 1) * (a + 1)) % (4 * n) == 0)
        .filter(|&a| {
            lp.iter().all(|&l| {
                let x = (l * (a - 1)) as i64;
                let y = (l * (a + 1)) as i64;
                cos_greater(n, x, y, &trig, &md_ring, precision)
            })
        })
        .collect()
}

/// `cos(πx/n) > cos(πy/n)`, certified.
fn cos_greater(
    n: u64,
    x: i64,
    y: i64,
    trig: &TrigTable,
    ring: &crate::cyclotomic::CyclotomicRing,
    precision: u32,
) -> bool {
    match trig.cos(x).sub(trig.cos(y)).sign() {
        Some(s) if s != Ordering::Equal => s == Ordering::Greater,
        _ => {
            // 2cos(πk/n) = ζ^k + ζ^{−k}
            let exact_zero = || {
                let mut e = ExponentSum::new(2 * n);
                e.add(x, 1);
                e.add(-x, 1);
                e.add(y, -1);
                e.add(-y, -1);
                e.is_zero_in(ring)
            };
            let enclose = |p| cos_approx(n, x, p).big_interval().sub(&cos_approx(n, y, p).big_interval());
            certified_sign(exact_zero, enclose, precision) == Ordering::Greater
        }
    }
}

/// `gcd(a−1, 2n) · gcd(a+1, 2n) = 4n` with the two gcds having gcd 2.
pub fn frontier_gcd_certificate(n: u64, a: u64) -> bool {
    let d = (a - 1).gcd(&(2 * n));
    let dp = (a + 1).gcd(&(2 * n));
    d * dp == 4 * n && d.gcd(&dp) == 2
}

/// Corner analysis for the simple current `J`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityReport {
    /// `corners[i][j] = M_{J^i 1, J^j 1}`
    pub corners: [[i64; 2]; 2],
    pub violations: Vec<String>,
}

impl ParityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For each corner `M_{J^i1,J^j1} = 1`, checks `M_{J^ia,J^jb} = M_ab` and
/// `(a+1)i ≡ (b+1)j (mod 2)` on the support. Corners outside `{0, 1}` are an
/// error: the input cannot be physical.
pub fn check_parity(m: &Invariant) -> Result<ParityReport> {
    let n = m.n();
    let jpow = |i: usize, a: u64| if i == 0 { a } else { n - a };
    let mut corners = [[0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            corners[i][j] = m.get(jpow(i, 1), jpow(j, 1));
        }
    }
    if let Some(bad) = corners.iter().flatten().find(|&&c| c != 0 && c != 1) {
        return Err(Error::Invalid(format!("corner value {bad} outside {{0, 1}}")));
    }
    let mut violations = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            if corners[i][j] != 1 {
                continue;
            }
            for (a, b, _) in m.support() {
                if ((a + 1) * i as u64) % 2 != ((b + 1) * j as u64) % 2 {
                    violations.push(format!("selection (i={i}, j={j}) fails at ({a},{b})"));
                }
            }
            for a in m.labels() {
                for b in m.labels() {
                    if m.get(jpow(i, a), jpow(j, b)) != m.get(a, b) {
                        violations.push(format!("symmetry (i={i}, j={j}) fails at ({a},{b})"));
                    }
                }
            }
        }
    }
    Ok(ParityReport { corners, violations })
}

/// If the first column of `m` is `δ_{a,1}`, returns the permutation `π`
/// (`pi[a−1] = πa`) with `M_ab = δ_{b,πa}` after checking
/// `S̃_{πa,πb} = S̃_ab` exactly. `m` is assumed physical; a failure of either
/// conclusion is reported as [`Error::LemmaViolation`].
pub fn lemma1_analyze(md: &ModularData, m: &Invariant) -> Result<Option<Vec<u64>>> {
    if m.get(1, 1) != 1 || m.labels().skip(1).any(|a| m.get(a, 1) != 0) {
        return Ok(None);
    }
    let mut pi = Vec::with_capacity(m.dim());
    for a in m.labels() {
        let row: Vec<(u64, i64)> = m.labels().map(|b| (b, m.get(a, b))).filter(|(_, v)| *v != 0).collect();
        match row.as_slice() {
            [(b, 1)] => pi.push(*b),
            _ => {
                return Err(Error::LemmaViolation(format!(
                    "first column is δ_a1 but row {a} is not a permutation row: {row:?}"
                )))
            }
        }
    }
    let mut seen = vec![false; m.dim()];
    for &b in &pi {
        if std::mem::replace(&mut seen[b as usize - 1], true) {
            return Err(Error::LemmaViolation(format!("column {b} hit twice")));
        }
    }
    for a in m.labels() {
        for b in m.labels() {
            if md.s_tilde(pi[a as usize - 1], pi[b as usize - 1]) != md.s_tilde(a, b) {
                return Err(Error::LemmaViolation(format!("S̃ not invariant under π at ({a},{b})")));
            }
        }
    }
    Ok(Some(pi))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Lemma2Outcome {
    NotApplicable(String),
    /// Hypotheses hold and both conclusions were verified; lists the zero rows.
    Verified { zero_rows: Vec<u64> },
}

/// Checks the block structure forced when the first row and column are
/// supported exactly on `{1, J1}` with all four corners 1: rows and columns
/// vanish exactly at even labels, and away from the fixed point `n/2` every
/// nonzero row (column) has ones precisely at `{b, Jb}` (`{a, Ja}`).
pub fn lemma2_structure(m: &Invariant) -> Result<Lemma2Outcome> {
    let n = m.n();
    let j1 = n - 1;
    let corners_ok = [(1, 1), (1, j1), (j1, 1), (j1, j1)].iter().all(|&(a, b)| m.get(a, b) == 1);
    let row_ok = m.labels().all(|b| (b == 1 || b == j1) || m.get(1, b) == 0);
    let col_ok = m.labels().all(|a| (a == 1 || a == j1) || m.get(a, 1) == 0);
    if !(corners_ok && row_ok && col_ok) {
        return Ok(Lemma2Outcome::NotApplicable(
            "first row/column not supported exactly on {1, J1} with unit corners".into(),
        ));
    }
    let fixed = (n % 2 == 0).then_some(n / 2);
    let mut zero_rows = Vec::new();
    for a in m.labels() {
        let row_zero = m.labels().all(|b| m.get(a, b) == 0);
        let col_zero = m.labels().all(|b| m.get(b, a) == 0);
        let even = a % 2 == 0;
        if row_zero != even || col_zero != even {
            return Err(Error::LemmaViolation(format!(
                "row/column {a}: zero = ({row_zero}, {col_zero}) but a is {}",
                if even { "even" } else { "odd" }
            )));
        }
        if row_zero {
            zero_rows.push(a);
        }
    }
    for (a, b, _) in m.support() {
        if Some(a) == fixed || Some(b) == fixed {
            continue;
        }
        for c in m.labels() {
            let want_row = if c == b || c == n - b { 1 } else { 0 };
            let want_col = if c == a || c == n - a { 1 } else { 0 };
            if m.get(a, c) != want_row || m.get(c, b) != want_col {
                return Err(Error::LemmaViolation(format!(
                    "block structure fails for M_{a},{b} at c = {c}"
                )));
            }
        }
    }
    Ok(Lemma2Outcome::Verified { zero_rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{build_series, theorem_list, Family};
    use crate::modular::build_modular_data;

    #[test]
    fn ell_set_examples() {
        assert_eq!(ell_sets(6), (vec![1, 5, 7, 11], vec![1, 5, 7, 11]));
        let (l, lp) = ell_sets(9);
        assert_eq!(l, vec![1, 5, 7, 11, 13, 17]);
        assert_eq!(lp, vec![1, 2, 4, 5, 7, 8, 10, 11, 13, 14, 16, 17]);
        assert_eq!(ell_sets(4), (vec![1, 3, 5, 7], vec![1, 3, 5, 7]));
    }

    #[test]
    fn perm_examples() {
        assert_eq!(galois_perm(12, 5, 7).unwrap(), (11, 1));
        assert_eq!(galois_perm(12, 5, 3).unwrap(), (9, -1));
        assert_eq!(galois_perm(12, 5, 1).unwrap(), (5, 1));
        assert!(matches!(galois_perm(12, 3, 1), Err(Error::NotCoprime { .. })));
        assert!(matches!(galois_perm(12, 5, 12), Err(Error::LabelOutOfRange(12))));
    }

    #[test]
    fn e6_first_block_maps_to_third() {
        let g = GaloisAction::new(12, 5).unwrap();
        let mut img = vec![g.image(1), g.image(7)];
        img.sort();
        assert_eq!(img, vec![5, 11]);
    }

    #[test]
    fn symmetry_of_named_invariants() {
        assert!(check_galois_symmetry(&build_series(12, Family::E6).unwrap()).is_empty());
        assert!(check_galois_symmetry(&Invariant::identity(13).unwrap()).is_empty());
        let mut m = build_series(12, Family::E6).unwrap();
        m.set(5, 11, 0);
        let v = check_galois_symmetry(&m);
        assert!(v.iter().any(|x| x.ell == 5 && (x.a, x.b) == (1, 7) && x.image == (5, 11)));
    }

    #[test]
    fn selection_rule() {
        for n in 3..=40 {
            for m in theorem_list(n).unwrap() {
                assert!(check_galois_selection(&m).is_empty(), "{} at {n}", m.name());
            }
        }
        let mut m = Invariant::identity(12).unwrap();
        m.set(1, 2, 1);
        let v = check_galois_selection(&m);
        assert_eq!(v.len(), 1);
        let g = GaloisAction::new(12, v[0].ell as i64).unwrap();
        assert_ne!(g.eps(1), g.eps(2));
    }

    #[test]
    fn frontier_examples() {
        assert_eq!(frontier_scan(12), vec![7]);
        assert_eq!(frontier_scan(30), vec![11, 19]);
        assert!(frontier_scan(16).is_empty());
        assert!(frontier_gcd_certificate(12, 7));
        assert!(frontier_gcd_certificate(30, 11));
        assert!(frontier_gcd_certificate(30, 19));
    }

    #[test]
    fn parity_examples() {
        let d4 = check_parity(&build_series(6, Family::D).unwrap()).unwrap();
        assert_eq!(d4.corners, [[1, 1], [1, 1]]);
        assert!(d4.passed());
        let a = check_parity(&Invariant::identity(7).unwrap()).unwrap();
        assert_eq!(a.corners, [[1, 0], [0, 1]]);
        assert!(a.passed());
        let e7 = check_parity(&build_series(18, Family::E7).unwrap()).unwrap();
        assert_eq!(e7.corners[1][1], 1);
        assert!(e7.passed());
        let mut bad = Invariant::identity(7).unwrap();
        bad.set(1, 1, 2);
        assert!(check_parity(&bad).is_err());
    }

    #[test]
    fn lemma1_examples() {
        let md = build_modular_data(7).unwrap();
        assert_eq!(lemma1_analyze(&md, &Invariant::identity(7).unwrap()).unwrap(), Some((1..7).collect()));
        let md = build_modular_data(8).unwrap();
        let pi = lemma1_analyze(&md, &build_series(8, Family::D).unwrap()).unwrap().unwrap();
        assert_eq!(pi, vec![1, 6, 3, 4, 5, 2, 7]);
        let md = build_modular_data(12).unwrap();
        assert_eq!(lemma1_analyze(&md, &build_series(12, Family::E6).unwrap()).unwrap(), None);
    }

    #[test]
    fn lemma1_rejects_fake_permutations() {
        // first column δ_a1 but row 2 has two entries: not physical, and flagged
        let md = build_modular_data(5).unwrap();
        let mut m = Invariant::identity(5).unwrap();
        m.set(2, 4, 1);
        assert!(matches!(lemma1_analyze(&md, &m), Err(Error::LemmaViolation(_))));
    }

    #[test]
    fn lemma2_examples() {
        let d = lemma2_structure(&build_series(6, Family::D).unwrap()).unwrap();
        assert_eq!(d, Lemma2Outcome::Verified { zero_rows: vec![2, 4] });
        let e7 = lemma2_structure(&build_series(18, Family::E7).unwrap()).unwrap();
        assert_eq!(e7, Lemma2Outcome::Verified { zero_rows: (1..9).map(|k| 2 * k).collect() });
        assert!(matches!(
            lemma2_structure(&Invariant::identity(5).unwrap()).unwrap(),
            Lemma2Outcome::NotApplicable(_)
        ));
        let mut broken = build_series(10, Family::D).unwrap();
        broken.set(3, 3, 2);
        assert!(matches!(lemma2_structure(&broken), Err(Error::LemmaViolation(_))));
    }
}
