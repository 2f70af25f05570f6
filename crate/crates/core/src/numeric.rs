//! Certified numerics for inequality-flavoured questions.
//!
//! Nothing here decides an equality. Values of `sin(πk/n)` are computed in
//! binary fixed point with an explicit error bound; hot loops use `f64`
//! intervals with outward rounding, and ambiguous comparisons fall back to
//! [`BigInterval`] at increasing precision after an exact zero test.

use std::cmp::Ordering;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Decimal digits used when no explicit precision is given.
pub const DEFAULT_PRECISION: u32 = 30;
/// Smallest precision accepted by [`sin_approx`].
pub const MIN_PRECISION: u32 = 15;

/// Default precision, overridable through the `ADE_PRECISION` environment
/// variable (read once).
pub fn default_precision() -> u32 {
    static PRECISION: OnceLock<u32> = OnceLock::new();
    *PRECISION.get_or_init(|| {
        std::env::var("ADE_PRECISION")
            .ok()
            .and_then(|s| s.trim().parse::<u32>().ok())
            .map(|p| p.max(MIN_PRECISION))
            .unwrap_or(DEFAULT_PRECISION)
    })
}

const GUARD_BITS: u32 = 64;

fn working_bits(digits: u32) -> u32 {
    // log2(10) < 3.3220
    (digits as u64 * 33220 / 10000) as u32 + 1 + GUARD_BITS
}

/// A fixed-point approximation `mantissa / 2^bits` with
/// `|value − true| <= err_ulps / 2^bits`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Approx {
    pub mantissa: BigInt,
    pub bits: u32,
    pub err_ulps: u64,
}

impl Approx {
    fn exact_int(v: i64, bits: u32) -> Self {
        Approx {
            mantissa: BigInt::from(v) << bits,
            bits,
            err_ulps: 0,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.err_ulps == 0
    }

    pub fn to_f64(&self) -> f64 {
        // keep 80 significant bits before converting
        let shift = self.bits.saturating_sub(80);
        let m = (&self.mantissa >> shift).to_f64().unwrap_or(f64::NAN);
        m * 2f64.powi(-((self.bits - shift) as i32))
    }

    /// Upper bound on the absolute error, as a float.
    pub fn error_bound(&self) -> f64 {
        (self.err_ulps as f64) * 2f64.powi(-(self.bits as i32))
    }

    pub fn interval(&self) -> Interval {
        let v = self.to_f64();
        if self.is_exact() && v.fract() == 0.0 && v.abs() < 1e15 {
            return Interval::point(v);
        }
        let slack = self.error_bound() + v.abs() * 4.0 * f64::EPSILON + f64::MIN_POSITIVE;
        Interval::new((v - slack).next_down(), (v + slack).next_up())
    }

    pub fn big_interval(&self) -> BigInterval {
        let e = BigInt::from(self.err_ulps);
        BigInterval {
            lo: &self.mantissa - &e,
            hi: &self.mantissa + &e,
            bits: self.bits,
        }
    }
}

/// `π · 2^bits` with its error in ulps.
fn pi_fixed(bits: u32) -> (BigInt, u64) {
    // Machin: π = 16 atan(1/5) − 4 atan(1/239)
    let (a5, e5) = atan_inv(5, bits);
    let (a239, e239) = atan_inv(239, bits);
    (a5 * 16 - a239 * 4, 16 * e5 + 4 * e239)
}

/// `atan(1/x) · 2^bits` by its alternating series.
fn atan_inv(x: u64, bits: u32) -> (BigInt, u64) {
    let one = BigInt::one() << bits;
    let x2 = BigInt::from(x * x);
    let mut power = one / x; // 1/x^(2i+1), truncated
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    loop {
        let term = &power / (2 * k + 1);
        if term.is_zero() {
            break;
        }
        if k % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        power /= &x2;
        k += 1;
    }
    // each term carries at most two truncations, plus the tail
    (sum, 2 * k + 2)
}

fn pi_cache(bits: u32) -> (BigInt, u64) {
    use std::collections::HashMap;
    use std::sync::Mutex;
    static CACHE: OnceLock<Mutex<HashMap<u32, (BigInt, u64)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&bits) {
        return v.clone();
    }
    let v = pi_fixed(bits);
    cache.lock().unwrap().insert(bits, v.clone());
    v
}

/// `sin(π k / n)` to `precision` decimal digits:
/// `|returned − sin(πk/n)| < 10^(−precision)`.
///
/// Values that are exactly 0 or ±1 come back with zero error.
pub fn sin_approx(n: u64, k: i64, precision: u32) -> Approx {
    assert!(n >= 1, "sin_approx needs n >= 1");
    let precision = precision.max(MIN_PRECISION);
    let bits = working_bits(precision);
    let period = 2 * n as i64;
    let mut m = k.rem_euclid(period) as u64;
    let mut negative = false;
    if m >= n {
        m -= n;
        negative = true;
    }
    // sin(π − x) = sin x
    if 2 * m > n {
        m = n - m;
    }
    if m == 0 {
        return Approx::exact_int(0, bits);
    }
    if 2 * m == n {
        return Approx::exact_int(if negative { -1 } else { 1 }, bits);
    }

    let (pi, pi_err) = pi_cache(bits);
    let x = (&pi * m) / n;
    let x_err = pi_err * m / n + 2;

    // Taylor series, x ∈ (0, π/2)
    let x2 = (&x * &x) >> bits;
    let mut term = x.clone();
    let mut sum = x.clone();
    let mut i = 1u64;
    loop {
        term = ((&term * &x2) >> bits) / ((2 * i) * (2 * i + 1));
        if term.is_zero() {
            break;
        }
        if i % 2 == 1 {
            sum -= &term;
        } else {
            sum += &term;
        }
        i += 1;
    }
    let err = x_err + 4 * i + 8;
    Approx {
        mantissa: if negative { -sum } else { sum },
        bits,
        err_ulps: err,
    }
}

/// `cos(π k / n)`, via `cos θ = sin(π/2 + θ)`.
pub fn cos_approx(n: u64, k: i64, precision: u32) -> Approx {
    sin_approx(2 * n, n as i64 + 2 * k, precision)
}

/// A closed interval of doubles with outward-rounded arithmetic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(v: f64) -> Self {
        Interval { lo: v, hi: v }
    }

    pub fn zero() -> Self {
        Interval::point(0.0)
    }

    pub fn add(self, o: Interval) -> Interval {
        Interval::new((self.lo + o.lo).next_down(), (self.hi + o.hi).next_up())
    }

    pub fn sub(self, o: Interval) -> Interval {
        Interval::new((self.lo - o.hi).next_down(), (self.hi - o.lo).next_up())
    }

    pub fn neg(self) -> Interval {
        Interval::new(-self.hi, -self.lo)
    }

    pub fn mul(self, o: Interval) -> Interval {
        let p = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = p.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = p.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(lo.next_down(), hi.next_up())
    }

    /// Multiplication by an integer that converts exactly to `f64`.
    pub fn scale(self, k: i64) -> Interval {
        self.mul(Interval::point(k as f64))
    }

    /// Reciprocal of an interval that excludes zero.
    pub fn recip(self) -> Option<Interval> {
        if self.lo <= 0.0 && self.hi >= 0.0 {
            return None;
        }
        Some(Interval::new((1.0 / self.hi).next_down(), (1.0 / self.lo).next_up()))
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Sign of every point in the interval, or `None` when it straddles zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo > 0.0 {
            Some(Ordering::Greater)
        } else if self.hi < 0.0 {
            Some(Ordering::Less)
        } else if self.lo == 0.0 && self.hi == 0.0 {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Fixed-point interval `[lo, hi] / 2^bits` with exact endpoint arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigInterval {
    pub lo: BigInt,
    pub hi: BigInt,
    pub bits: u32,
}

impl BigInterval {
    pub fn from_int(v: impl Into<BigInt>, bits: u32) -> Self {
        let m = v.into() << bits;
        BigInterval {
            lo: m.clone(),
            hi: m,
            bits,
        }
    }

    fn align(&self, o: &BigInterval) {
        assert_eq!(self.bits, o.bits, "BigInterval precision mismatch");
    }

    pub fn add(&self, o: &BigInterval) -> BigInterval {
        self.align(o);
        BigInterval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
            bits: self.bits,
        }
    }

    pub fn sub(&self, o: &BigInterval) -> BigInterval {
        self.align(o);
        BigInterval {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
            bits: self.bits,
        }
    }

    pub fn scale(&self, k: &BigInt) -> BigInterval {
        let (a, b) = (&self.lo * k, &self.hi * k);
        let (lo, hi) = if k.is_negative() { (b, a) } else { (a, b) };
        BigInterval {
            lo,
            hi,
            bits: self.bits,
        }
    }

    pub fn mul(&self, o: &BigInterval) -> BigInterval {
        self.align(o);
        let p = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = p.iter().min().unwrap().clone();
        let hi = p.iter().max().unwrap().clone();
        let unit = BigInt::one() << self.bits;
        BigInterval {
            lo: lo.div_floor(&unit),
            hi: hi.div_ceil(&unit),
            bits: self.bits,
        }
    }

    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// `ceil(lo / 2^bits)`.
    pub fn ceil_lo(&self) -> BigInt {
        self.lo.div_ceil(&(BigInt::one() << self.bits))
    }

    pub fn to_interval(&self) -> Interval {
        let unit = 2f64.powi(-(self.bits as i32));
        let shift = self.bits.saturating_sub(80);
        let conv = |v: &BigInt| (v >> shift).to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32) * unit;
        let (lo, hi) = (conv(&self.lo), conv(&self.hi));
        Interval::new(
            (lo - lo.abs() * 4.0 * f64::EPSILON).next_down(),
            (hi + hi.abs() * 4.0 * f64::EPSILON).next_up(),
        )
    }
}

/// Decides the sign of a real quantity that has an exact zero test and a
/// family of certified enclosures. Precision doubles until the enclosure
/// excludes zero; termination is guaranteed for a nonzero quantity.
pub fn certified_sign(
    is_exact_zero: impl FnOnce() -> bool,
    mut enclose: impl FnMut(u32) -> BigInterval,
    start_precision: u32,
) -> Ordering {
    if is_exact_zero() {
        return Ordering::Equal;
    }
    let mut digits = start_precision.max(MIN_PRECISION);
    loop {
        if let Some(s) = enclose(digits).sign() {
            if s != Ordering::Equal {
                return s;
            }
        }
        digits *= 2;
        assert!(digits < 1 << 16, "certified_sign failed to separate a nonzero value from 0");
    }
}

/// Cached `f64` enclosures of `sin(πk/n)` and `cos(πk/n)` for `0 <= k < 2n`.
#[derive(Clone, Debug)]
pub struct TrigTable {
    n: u64,
    sin: Vec<Interval>,
    cos: Vec<Interval>,
}

impl TrigTable {
    pub fn new(n: u64, precision: u32) -> Self {
        let sin = (0..2 * n as i64).map(|k| sin_approx(n, k, precision).interval()).collect();
        let cos = (0..2 * n as i64).map(|k| cos_approx(n, k, precision).interval()).collect();
        TrigTable { n, sin, cos }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn sin(&self, k: i64) -> Interval {
        self.sin[k.rem_euclid(2 * self.n as i64) as usize]
    }

    pub fn cos(&self, k: i64) -> Interval {
        self.cos[k.rem_euclid(2 * self.n as i64) as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(n: u64, k: i64, expected: f64) {
        let a = sin_approx(n, k, 30);
        assert!((a.to_f64() - expected).abs() < 1e-15, "sin(π{k}/{n})");
        assert!(a.interval().contains(expected));
        assert!(a.error_bound() < 1e-30);
    }

    #[test]
    fn forced_values() {
        check(4, 1, std::f64::consts::FRAC_1_SQRT_2);
        check(6, 1, 0.5);
        check(12, 1, 0.25881904510252074);
        let one = sin_approx(6, 3, 30);
        assert!(one.is_exact());
        assert_eq!(one.to_f64(), 1.0);
        assert_eq!(sin_approx(5, 10, 20).to_f64(), 0.0);
        assert_eq!(sin_approx(6, 9, 20).to_f64(), -1.0);
    }

    #[test]
    fn high_precision_digits() {
        // sin(π/12) = (√6 − √2)/4 = 0.258819045102520762348898837624048328349...
        let a = sin_approx(12, 1, 40);
        let want: BigInt = "258819045102520762348898837624048328349".parse().unwrap();
        // compare the leading 39 decimal digits
        let scaled = (&a.mantissa * BigInt::from(10u32).pow(39)) >> a.bits;
        assert!((scaled - want).abs() <= BigInt::from(1));
    }

    #[test]
    fn matches_std_over_a_grid() {
        for n in 1..50u64 {
            for k in -2 * n as i64..4 * n as i64 {
                let v = (std::f64::consts::PI * k as f64 / n as f64).sin();
                let a = sin_approx(n, k, 20);
                assert!((a.to_f64() - v).abs() < 1e-13, "n={n} k={k}");
                let c = cos_approx(n, k, 20).to_f64();
                assert!((c - (std::f64::consts::PI * k as f64 / n as f64).cos()).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn interval_ops_enclose() {
        let a = Interval::new(0.1, 0.2);
        let b = Interval::new(-0.3, 0.4);
        let p = a.mul(b);
        assert!(p.lo <= -0.06 && p.hi >= 0.08);
        assert_eq!(a.sub(a).sign(), None);
        assert_eq!(a.recip().unwrap().sign(), Some(Ordering::Greater));
        assert!(b.recip().is_none());
    }

    #[test]
    fn big_interval_product() {
        let s = sin_approx(4, 1, 30).big_interval();
        let two = BigInterval::from_int(2, s.bits);
        // 2·sin²(π/4) − 1 = 0 exactly, so the enclosure straddles zero
        let v = two.mul(&s.mul(&s)).sub(&BigInterval::from_int(1, s.bits));
        assert_eq!(v.sign(), None);
        assert!(v.to_interval().width() < 1e-20);
    }

    #[test]
    fn certified_sign_refines() {
        let s = certified_sign(
            || false,
            |p| {
                let a = sin_approx(7, 1, p).big_interval();
                let b = sin_approx(7, 2, p).big_interval();
                b.sub(&a)
            },
            15,
        );
        assert_eq!(s, Ordering::Greater);
        assert_eq!(certified_sign(|| true, |_| unreachable!(), 15), Ordering::Equal);
    }
}
