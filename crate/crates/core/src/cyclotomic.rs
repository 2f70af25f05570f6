//! Exact arithmetic in the ring of cyclotomic integers `Z[ζ]`, ζ a primitive
//! `m`-th root of unity, in the power basis modulo the `m`-th cyclotomic
//! polynomial.
//!
//! Two representations are used. [`CycloInt`] is the canonical reduced form
//! with arbitrary-precision coefficients. [`ExponentSum`] is an unreduced
//! integer combination of powers `ζ^k`, `0 <= k < m`; sums of monomials (every
//! entry of the rescaled S-matrix is one) are accumulated there and reduced
//! once, which keeps matrix products linear in the number of terms.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Coefficients (lowest degree first) of the `m`-th cyclotomic polynomial.
///
/// Computed as `(x^m - 1)` divided by `Φ_d` for every proper divisor `d` of `m`.
pub fn cyclotomic_poly(m: u64) -> Vec<BigInt> {
    assert!(m >= 1, "cyclotomic_poly needs m >= 1");
    let m_us = m as usize;
    let mut num = vec![BigInt::zero(); m_us + 1];
    num[0] = BigInt::from(-1);
    num[m_us] = BigInt::one();
    for d in 1..m {
        if m % d == 0 {
            num = exact_div_monic(&num, &cyclotomic_poly(d));
        }
    }
    num
}

/// Divides `num` by the monic polynomial `den`, asserting a zero remainder.
fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = rem.len() - 1;
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let q = rem[k + dd].clone();
        if q.is_zero() {
            continue;
        }
        for (i, c) in den.iter().enumerate() {
            rem[k + i] -= &q * c;
        }
        quot[k] = q;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// Euler's totient.
pub fn totient(m: u64) -> u64 {
    (1..=m).filter(|k| k.gcd(&m) == 1).count() as u64
}

/// The ring `Z[x]/Φ_m(x)` together with a table of reduced monomials.
#[derive(Debug)]
pub struct CyclotomicRing {
    order: u64,
    modulus: Vec<BigInt>,
    /// `monomials[k]` is `x^k mod Φ_m` for `0 <= k < m`.
    monomials: Vec<Vec<i64>>,
}

impl CyclotomicRing {
    pub fn new(order: u64) -> Arc<Self> {
        assert!(order >= 1, "cyclotomic order must be positive");
        let modulus = cyclotomic_poly(order);
        let deg = modulus.len() - 1;
        let small: Vec<i64> = modulus
            .iter()
            .map(|c| c.to_i64().expect("cyclotomic coefficient exceeds i64"))
            .collect();

        let mut monomials = Vec::with_capacity(order as usize);
        let mut cur = vec![0i64; deg];
        if deg > 0 {
            cur[0] = 1;
        }
        for _ in 0..order {
            monomials.push(cur.clone());
            // multiply by x and fold the overflow coefficient back
            let top = cur[deg - 1];
            for i in (1..deg).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..deg {
                    cur[i] = cur[i]
                        .checked_sub(top.checked_mul(small[i]).expect("monomial overflow"))
                        .expect("monomial overflow");
                }
            }
        }
        Arc::new(CyclotomicRing {
            order,
            modulus,
            monomials,
        })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Degree of the modulus, `φ(m)`.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    /// Reduced power-basis coefficients of `ζ^k` (any integer `k`).
    pub fn monomial_coeffs(&self, k: i64) -> &[i64] {
        &self.monomials[k.rem_euclid(self.order as i64) as usize]
    }

    pub fn zero(self: &Arc<Self>) -> CycloInt {
        CycloInt {
            ring: Arc::clone(self),
            coeffs: vec![BigInt::zero(); self.degree()],
        }
    }

    pub fn one(self: &Arc<Self>) -> CycloInt {
        self.from_integer(1)
    }

    pub fn from_integer(self: &Arc<Self>, v: impl Into<BigInt>) -> CycloInt {
        let mut z = self.zero();
        z.coeffs[0] = v.into();
        z
    }

    /// `ζ^k`, reduced.
    pub fn zeta_pow(self: &Arc<Self>, k: i64) -> CycloInt {
        CycloInt {
            ring: Arc::clone(self),
            coeffs: self.monomial_coeffs(k).iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    /// Builds an element from raw power-basis coefficients, reducing if the
    /// vector is longer than `φ(m)`.
    pub fn from_coeffs(self: &Arc<Self>, coeffs: Vec<BigInt>) -> CycloInt {
        let coeffs = reduce_poly(coeffs, &self.modulus);
        CycloInt {
            ring: Arc::clone(self),
            coeffs,
        }
    }
}

/// Reduces `poly` modulo the monic `modulus`, returning exactly `deg` coefficients.
fn reduce_poly(mut poly: Vec<BigInt>, modulus: &[BigInt]) -> Vec<BigInt> {
    let deg = modulus.len() - 1;
    if poly.len() > deg {
        for k in (deg..poly.len()).rev() {
            let lead = std::mem::take(&mut poly[k]);
            if lead.is_zero() {
                continue;
            }
            let shift = k - deg;
            for (i, c) in modulus[..deg].iter().enumerate() {
                poly[shift + i] -= &lead * c;
            }
        }
    }
    poly.resize(deg, BigInt::zero());
    poly
}

/// A cyclotomic integer in canonical reduced form.
#[derive(Clone)]
pub struct CycloInt {
    ring: Arc<CyclotomicRing>,
    coeffs: Vec<BigInt>,
}

impl PartialEq for CycloInt {
    fn eq(&self, other: &Self) -> bool {
        self.ring.order == other.ring.order && self.coeffs == other.coeffs
    }
}

impl Eq for CycloInt {}

impl fmt::Debug for CycloInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloInt[{}]({})", self.ring.order, self)
    }
}

impl fmt::Display for CycloInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            first = false;
            let mag = c.abs();
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{}", mag)?,
                (_, true) => write!(f, "ζ^{}", k)?,
                (_, false) => write!(f, "{}ζ^{}", mag, k)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl CycloInt {
    pub fn order(&self) -> u64 {
        self.ring.order
    }

    pub fn ring(&self) -> &Arc<CyclotomicRing> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check_order(&self, other: &CycloInt) -> Result<()> {
        if self.ring.order != other.ring.order {
            return Err(Error::OrderMismatch(self.ring.order, other.ring.order));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &CycloInt) -> Result<CycloInt> {
        self.check_order(other)?;
        Ok(CycloInt {
            ring: Arc::clone(&self.ring),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_sub(&self, other: &CycloInt) -> Result<CycloInt> {
        self.check_order(other)?;
        Ok(CycloInt {
            ring: Arc::clone(&self.ring),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    /// Ring product, reduced to canonical form.
    pub fn checked_mul(&self, other: &CycloInt) -> Result<CycloInt> {
        self.check_order(other)?;
        let deg = self.ring.degree();
        let mut prod = vec![BigInt::zero(); 2 * deg.max(1) - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(self.ring.from_coeffs(prod))
    }

    pub fn scale(&self, k: &BigInt) -> CycloInt {
        CycloInt {
            ring: Arc::clone(&self.ring),
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Applies the Galois automorphism `ζ ↦ ζ^ell`.
    pub fn galois(&self, ell: i64) -> Result<CycloInt> {
        let m = self.ring.order;
        if (ell.rem_euclid(m as i64) as u64).gcd(&m) != 1 {
            return Err(Error::NotCoprime { ell, modulus: m });
        }
        let mut acc = ExponentSum::new(m);
        let mut out = self.ring.zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // i64-sized coefficients go through the machine-integer path
            match c.to_i64() {
                Some(small) => acc.add(ell * j as i64, small as i128),
                None => {
                    let img = self.ring.zeta_pow(ell * j as i64).scale(c);
                    out = &out + &img;
                }
            }
        }
        Ok(&out + &acc.reduce(&self.ring))
    }
}

/// `cyclo_mul` under its contract name.
pub fn cyclo_mul(x: &CycloInt, y: &CycloInt) -> Result<CycloInt> {
    x.checked_mul(y)
}

/// `cyclo_galois` under its contract name.
pub fn cyclo_galois(ell: i64, x: &CycloInt) -> Result<CycloInt> {
    x.galois(ell)
}

impl Add for &CycloInt {
    type Output = CycloInt;
    fn add(self, rhs: &CycloInt) -> CycloInt {
        self.checked_add(rhs).expect("cyclotomic order mismatch")
    }
}

impl Sub for &CycloInt {
    type Output = CycloInt;
    fn sub(self, rhs: &CycloInt) -> CycloInt {
        self.checked_sub(rhs).expect("cyclotomic order mismatch")
    }
}

impl Mul for &CycloInt {
    type Output = CycloInt;
    fn mul(self, rhs: &CycloInt) -> CycloInt {
        self.checked_mul(rhs).expect("cyclotomic order mismatch")
    }
}

impl Neg for &CycloInt {
    type Output = CycloInt;
    fn neg(self) -> CycloInt {
        CycloInt {
            ring: Arc::clone(&self.ring),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// Unreduced integer combination `Σ c_k ζ^k` indexed by `k mod m`.
#[derive(Clone, Debug)]
pub struct ExponentSum {
    counts: Vec<i128>,
}

impl ExponentSum {
    pub fn new(order: u64) -> Self {
        ExponentSum {
            counts: vec![0; order as usize],
        }
    }

    pub fn add(&mut self, exponent: i64, coeff: i128) {
        let m = self.counts.len() as i64;
        self.counts[exponent.rem_euclid(m) as usize] += coeff;
    }

    /// Adds `coeff · (ζ^e − ζ^{−e})`.
    pub fn add_sine(&mut self, exponent: i64, coeff: i128) {
        self.add(exponent, coeff);
        self.add(-exponent, -coeff);
    }

    pub fn clear(&mut self) {
        self.counts.iter_mut().for_each(|c| *c = 0);
    }

    /// Power-basis coefficients as machine integers.
    pub fn reduce_small(&self, ring: &CyclotomicRing) -> Vec<i128> {
        debug_assert_eq!(self.counts.len() as u64, ring.order);
        let mut out = vec![0i128; ring.degree()];
        for (k, &c) in self.counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &m) in out.iter_mut().zip(&ring.monomials[k]) {
                *o += c * m as i128;
            }
        }
        out
    }

    pub fn is_zero_in(&self, ring: &CyclotomicRing) -> bool {
        self.reduce_small(ring).iter().all(|&c| c == 0)
    }

    pub fn reduce(&self, ring: &Arc<CyclotomicRing>) -> CycloInt {
        CycloInt {
            ring: Arc::clone(ring),
            coeffs: self.reduce_small(ring).into_iter().map(BigInt::from).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_poly(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_poly(12), ints(&[1, 0, -1, 0, 1]));
        // first one with a coefficient of absolute value 2
        let p105 = cyclotomic_poly(105);
        assert_eq!(p105.len() as u64 - 1, totient(105));
        assert!(p105.contains(&BigInt::from(-2)));
    }

    #[test]
    fn degree_is_totient() {
        for m in 1..=120 {
            assert_eq!(cyclotomic_poly(m).len() as u64 - 1, totient(m), "m = {m}");
        }
    }

    #[test]
    fn zeta_to_the_half_order_is_minus_one() {
        for n in 1..=60 {
            let r = CyclotomicRing::new(2 * n);
            assert_eq!(r.zeta_pow(n as i64), r.from_integer(-1), "2n = {}", 2 * n);
            assert_eq!(r.zeta_pow(2 * n as i64), r.one());
        }
    }

    #[test]
    fn reduction_identities_at_order_six() {
        let r = CyclotomicRing::new(6);
        let z = r.zeta_pow(1);
        // ζ² = ζ − 1 since Φ6 = x² − x + 1
        let z2 = &z * &z;
        assert_eq!(z2.coeffs(), &ints(&[-1, 1])[..]);
        assert_eq!(z2, &z - &r.one());
        assert_eq!(&z * &r.one(), z);
        let z3 = r.zeta_pow(3);
        assert_eq!(&z3 * &z3, r.one());
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let a = CyclotomicRing::new(6).one();
        let b = CyclotomicRing::new(8).one();
        assert!(matches!(cyclo_mul(&a, &b), Err(Error::OrderMismatch(6, 8))));
    }

    #[test]
    fn galois_on_generators() {
        let r = CyclotomicRing::new(12);
        let z = r.zeta_pow(1);
        assert_eq!(cyclo_galois(1, &z).unwrap(), z);
        assert_eq!(cyclo_galois(5, &z).unwrap(), r.zeta_pow(5));
        assert!(matches!(cyclo_galois(4, &z), Err(Error::NotCoprime { .. })));
        // σ5 maps ζ − ζ⁻¹ to ζ⁵ − ζ⁻⁵; {5·1} = 5 < 6 so the sign is +.
        let s11 = &r.zeta_pow(1) - &r.zeta_pow(-1);
        let s51 = &r.zeta_pow(5) - &r.zeta_pow(-5);
        assert_eq!(cyclo_galois(5, &s11).unwrap(), s51);
        assert_ne!(s51, -&s11);
    }

    #[test]
    fn exponent_sum_matches_cyclo_arithmetic() {
        let r = CyclotomicRing::new(20);
        let mut acc = ExponentSum::new(20);
        acc.add_sine(3, 2);
        acc.add(7, -1);
        let expected = &(&r.zeta_pow(3) - &r.zeta_pow(-3)).scale(&BigInt::from(2)) - &r.zeta_pow(7);
        assert_eq!(acc.reduce(&r), expected);
    }

    #[test]
    fn display_is_readable() {
        let r = CyclotomicRing::new(6);
        assert_eq!(r.zeta_pow(2).to_string(), "-1 + ζ^1");
        assert_eq!(r.zero().to_string(), "0");
    }
}
