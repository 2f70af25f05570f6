//! Exact linear algebra over `Z` and `Q`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Row echelon form over `Z`, grown one equation at a time.
///
/// Elimination is fraction free: a new row `r` is reduced against a stored
/// row `p` with pivot value `π` as `π·r − r[c]·p`, then divided by its content.
/// Stored rows are kept primitive and sorted by pivot column.
#[derive(Clone, Debug)]
pub struct IncrementalEchelon {
    ncols: usize,
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl IncrementalEchelon {
    pub fn new(ncols: usize) -> Self {
        IncrementalEchelon {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Adds an equation; returns `true` when it raised the rank.
    pub fn push(&mut self, row: &[i64]) -> bool {
        assert_eq!(row.len(), self.ncols);
        if row.iter().all(|&x| x == 0) || self.rows.len() == self.ncols {
            return false;
        }
        let mut r: Vec<BigInt> = row.iter().map(|&x| BigInt::from(x)).collect();
        for (pc, p) in &self.rows {
            if r[*pc].is_zero() {
                continue;
            }
            let f = r[*pc].clone();
            let pv = &p[*pc];
            for (x, y) in r.iter_mut().zip(p.iter()) {
                if y.is_zero() {
                    if !x.is_zero() {
                        *x *= pv;
                    }
                } else {
                    *x = &*x * pv - &f * y;
                }
            }
            make_primitive(&mut r);
        }
        match r.iter().position(|x| !x.is_zero()) {
            None => false,
            Some(pc) => {
                make_primitive(&mut r);
                if r[pc].is_negative() {
                    r.iter_mut().for_each(|x| *x = -&*x);
                }
                let at = self.rows.partition_point(|(c, _)| *c < pc);
                self.rows.insert(at, (pc, r));
                true
            }
        }
    }

    /// Basis of the rational nullspace of the accumulated system, one vector
    /// per free column (that column set to 1).
    pub fn nullspace(&self) -> Vec<Vec<BigRational>> {
        let rref = self.rref();
        let pivots: Vec<usize> = rref.iter().map(|(c, _)| *c).collect();
        (0..self.ncols)
            .filter(|c| !pivots.contains(c))
            .map(|f| {
                let mut v = vec![BigRational::zero(); self.ncols];
                v[f] = BigRational::one();
                for (pc, row) in &rref {
                    v[*pc] = -row[f].clone();
                }
                v
            })
            .collect()
    }

    /// Reduced row echelon form over `Q` with unit pivots.
    fn rref(&self) -> Vec<(usize, Vec<BigRational>)> {
        let mut rows: Vec<(usize, Vec<BigRational>)> = self
            .rows
            .iter()
            .map(|(c, r)| {
                let p = BigRational::from_integer(r[*c].clone());
                (*c, r.iter().map(|x| BigRational::from_integer(x.clone()) / &p).collect())
            })
            .collect();
        for i in (0..rows.len()).rev() {
            let (pc, pivot_row) = rows[i].clone();
            for (_, row) in rows.iter_mut().take(i) {
                if row[pc].is_zero() {
                    continue;
                }
                let f = row[pc].clone();
                for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        rows
    }
}

fn make_primitive(r: &mut [BigInt]) {
    let g = r.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        r.iter_mut().for_each(|x| *x /= &g);
    }
}

/// Gauss–Jordan elimination of `vectors` with columns visited in `order`.
/// Returns the reduced vectors and their pivot columns (in visiting order);
/// each returned vector has a 1 at its own pivot and 0 at the others.
pub fn rref_with_order(
    vectors: &[Vec<BigRational>],
    order: &[usize],
) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut rows: Vec<Vec<BigRational>> = vectors.to_vec();
    let mut pivots = Vec::new();
    let mut next = 0;
    for &col in order {
        if next == rows.len() {
            break;
        }
        let Some(p) = (next..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(next, p);
        let inv = rows[next][col].recip();
        rows[next].iter_mut().for_each(|x| *x *= &inv);
        let pivot_row = rows[next].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == next || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        next += 1;
    }
    rows.truncate(next);
    (rows, pivots)
}

/// Nullspace of an integer matrix as primitive integer vectors.
pub fn integer_nullspace(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut ech = IncrementalEchelon::new(ncols);
    for r in rows {
        ech.push(r);
    }
    ech.nullspace().into_iter().map(|v| clear_denominators(&v)).collect()
}

/// Scales a rational vector to a primitive integer vector.
pub fn clear_denominators(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let mut out: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    make_primitive(&mut out);
    out
}

/// Determinant by Bareiss' fraction-free elimination.
pub fn determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| {
            assert_eq!(r.len(), n, "determinant of a non-square matrix");
            r.iter().map(|&x| BigInt::from(x)).collect()
        })
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Leading principal minors `det(m[..k][..k])`, `k = 1..=n`.
pub fn leading_principal_minors(m: &[Vec<i64>]) -> Vec<BigInt> {
    (1..=m.len())
        .map(|k| {
            let sub: Vec<Vec<i64>> = m[..k].iter().map(|r| r[..k].to_vec()).collect();
            determinant(&sub)
        })
        .collect()
}
