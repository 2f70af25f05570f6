//! Modular data of affine A1 at level parameter `n`: the label set
//! `P+ = {1, …, n−1}`, the rescaled S-matrix `S̃_ab = ζ^{ab} − ζ^{−ab}` over
//! `Z[ζ]` with `ζ = e^{iπ/n}`, and the T-residues `a² mod 4n`.
//!
//! The true S-matrix is `S = √(2/n)/(2i) · S̃`. The scalar is nonzero, so
//! `MS = SM` iff `MS̃ = S̃M`, and every commutation question stays integral.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::cyclotomic::{CycloInt, CyclotomicRing, ExponentSum};
use crate::error::{Error, Result};
use crate::numeric::{Interval, TrigTable};

#[derive(Clone, Debug)]
pub struct ModularData {
    n: u64,
    ring: Arc<CyclotomicRing>,
    /// Row-major, `(n−1)²` entries; index with [`ModularData::s_tilde`].
    s_tilde: Vec<CycloInt>,
    t_residue: Vec<u64>,
}

/// `build_modular_data`: exact modular data for `n >= 3`.
pub fn build_modular_data(n: u64) -> Result<ModularData> {
    ModularData::new(n)
}

impl ModularData {
    pub fn new(n: u64) -> Result<Self> {
        if n < 3 {
            return Err(Error::LevelTooSmall(n as i64));
        }
        let ring = CyclotomicRing::new(2 * n);
        let dim = (n - 1) as usize;
        let mut s_tilde = Vec::with_capacity(dim * dim);
        for a in 1..n as i64 {
            for b in 1..n as i64 {
                let mut e = ExponentSum::new(2 * n);
                e.add_sine(a * b, 1);
                s_tilde.push(e.reduce(&ring));
            }
        }
        let t_residue = (1..n).map(|a| (a * a) % (4 * n)).collect();
        Ok(ModularData {
            n,
            ring,
            s_tilde,
            t_residue,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Number of labels, `n − 1`.
    pub fn dim(&self) -> usize {
        (self.n - 1) as usize
    }

    pub fn labels(&self) -> impl Iterator<Item = u64> {
        1..self.n
    }

    pub fn ring(&self) -> &Arc<CyclotomicRing> {
        &self.ring
    }

    /// `S̃_ab` for labels `a, b ∈ P+` (1-based).
    pub fn s_tilde(&self, a: u64, b: u64) -> &CycloInt {
        assert!((1..self.n).contains(&a) && (1..self.n).contains(&b), "label out of range");
        &self.s_tilde[(a as usize - 1) * self.dim() + (b as usize - 1)]
    }

    /// `a² mod 4n`.
    pub fn t_residue(&self, a: u64) -> u64 {
        self.t_residue[a as usize - 1]
    }

    /// The T-selection rule: `a² ≡ b² (mod 4n)`.
    pub fn t_allowed(&self, a: u64, b: u64) -> bool {
        self.t_residue(a) == self.t_residue(b)
    }

    /// Simple current `Ja = n − a`.
    pub fn j(&self, a: u64) -> u64 {
        self.n - a
    }

    /// `S̃ · S̃`, computed by collecting exponents of the monomial products
    /// and reducing each entry once.
    pub fn s_tilde_squared(&self) -> Vec<Vec<CycloInt>> {
        let n = self.n as i64;
        let mut acc = ExponentSum::new(2 * self.n);
        (1..n)
            .map(|a| {
                (1..n)
                    .map(|c| {
                        acc.clear();
                        for b in 1..n {
                            // (ζ^{ab} − ζ^{−ab})(ζ^{bc} − ζ^{−bc})
                            acc.add(b * (a + c), 1);
                            acc.add(-b * (a + c), 1);
                            acc.add(b * (a - c), -1);
                            acc.add(b * (c - a), -1);
                        }
                        acc.reduce(&self.ring)
                    })
                    .collect()
            })
            .collect()
    }

    /// Checks `S̃² = −2n·I` exactly.
    pub fn check_orthogonality(&self) -> bool {
        let minus_2n = self.ring.from_integer(-2 * self.n as i64);
        let zero = self.ring.zero();
        self.s_tilde_squared().iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, v)| if i == j { *v == minus_2n } else { *v == zero })
        })
    }

    pub fn check_symmetry(&self) -> bool {
        self.labels()
            .all(|a| (a..self.n).all(|b| self.s_tilde(a, b) == self.s_tilde(b, a)))
    }

    /// Checks `S̃_{Ja,b} = (−1)^{b+1} S̃_ab` exactly.
    pub fn check_simple_current_signs(&self) -> bool {
        self.labels().all(|a| {
            self.labels().all(|b| {
                let lhs = self.s_tilde(self.j(a), b);
                if b % 2 == 1 {
                    lhs == self.s_tilde(a, b)
                } else {
                    *lhs == -self.s_tilde(a, b)
                }
            })
        })
    }

    /// Enclosure of the true `S_1a · S_1b = (2/n) sin(πa/n) sin(πb/n)`.
    pub fn vacuum_weight(&self, trig: &TrigTable, a: u64, b: u64) -> Interval {
        let two_over_n = Interval::point(2.0)
            .mul(Interval::point(self.n as f64).recip().expect("n > 0"));
        two_over_n.mul(trig.sin(a as i64)).mul(trig.sin(b as i64))
    }

    /// `−2n` as a ring element, the value of every diagonal entry of `S̃²`.
    pub fn minus_two_n(&self) -> CycloInt {
        self.ring.from_integer(BigInt::from(-2 * self.n as i64))
    }
}

/// Enclosure of the imaginary part of a cyclotomic integer of order `2n`
/// under `ζ = e^{iπ/n}`. For entries of `S̃` this is `2 sin(πab/n)`.
pub fn imag_enclosure(x: &CycloInt, trig: &TrigTable) -> Interval {
    assert_eq!(x.order(), 2 * trig.n(), "trig table built for another order");
    x.coeffs().iter().enumerate().fold(Interval::zero(), |acc, (k, c)| {
        if num_traits::Zero::is_zero(c) {
            return acc;
        }
        let c = num_traits::ToPrimitive::to_f64(c).expect("coefficient fits f64");
        acc.add(trig.sin(k as i64).mul(Interval::point(c)))
    })
}

/// Enclosure of the real part, as for [`imag_enclosure`].
pub fn real_enclosure(x: &CycloInt, trig: &TrigTable) -> Interval {
    assert_eq!(x.order(), 2 * trig.n(), "trig table built for another order");
    x.coeffs().iter().enumerate().fold(Interval::zero(), |acc, (k, c)| {
        if num_traits::Zero::is_zero(c) {
            return acc;
        }
        let c = num_traits::ToPrimitive::to_f64(c).expect("coefficient fits f64");
        acc.add(trig.cos(k as i64).mul(Interval::point(c)))
    })
}
