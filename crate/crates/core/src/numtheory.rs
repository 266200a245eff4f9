//! Modular arithmetic, Legendre symbols and quadratic Gauss sums.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CycNum, CycParams};
use crate::error::{Error, Result};

/// An odd prime, validated at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "u32")]
pub struct OddPrime(u32);

impl OddPrime {
    pub fn new(n: i64) -> Result<Self> {
        if n < 3 || n > u32::MAX as i64 || n % 2 == 0 || !is_prime(n as u64) {
            return Err(Error::NotOddPrime(n));
        }
        Ok(OddPrime(n as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn as_usize(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn as_i64(self) -> i64 {
        self.0 as i64
    }

    /// Canonical representative of `a` in `[0, n)`.
    #[inline]
    pub fn reduce(self, a: i64) -> u32 {
        a.rem_euclid(self.as_i64()) as u32
    }
}

impl TryFrom<i64> for OddPrime {
    type Error = Error;
    fn try_from(n: i64) -> Result<Self> {
        OddPrime::new(n)
    }
}

impl From<OddPrime> for u32 {
    fn from(p: OddPrime) -> u32 {
        p.0
    }
}

impl fmt::Display for OddPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Trial division; the moduli used here are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut acc: u128 = 1 % m;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `n`, in `[1, n - 1]`.
pub fn mod_inverse(a: i64, n: OddPrime) -> Result<u32> {
    let r = n.reduce(a);
    if r == 0 {
        return Err(Error::NotInvertible { a, n: n.get() });
    }
    // Fermat: a^(n-2) = a^-1 for prime n.
    Ok(mod_pow(r as u64, n.get() as u64 - 2, n.get() as u64) as u32)
}

/// The Legendre symbol `(a/p)` for `a` not divisible by `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LegendreValue {
    #[serde(rename = "+1")]
    Residue,
    #[serde(rename = "-1")]
    NonResidue,
}

impl LegendreValue {
    pub fn sign(self) -> i64 {
        match self {
            LegendreValue::Residue => 1,
            LegendreValue::NonResidue => -1,
        }
    }

    fn from_bool(is_square: bool) -> Self {
        if is_square {
            LegendreValue::Residue
        } else {
            LegendreValue::NonResidue
        }
    }
}

impl std::ops::Mul for LegendreValue {
    type Output = LegendreValue;
    fn mul(self, rhs: Self) -> Self {
        LegendreValue::from_bool(self == rhs)
    }
}

impl fmt::Display for LegendreValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LegendreValue::Residue => "+1",
            LegendreValue::NonResidue => "-1",
        })
    }
}

/// Euler's criterion: `a^((n-1)/2) mod n`.
pub fn legendre(a: i64, n: OddPrime) -> Result<LegendreValue> {
    let r = n.reduce(a);
    if r == 0 {
        return Err(Error::NotInvertible { a, n: n.get() });
    }
    let p = n.get() as u64;
    let e = mod_pow(r as u64, (p - 1) / 2, p);
    debug_assert!(e == 1 || e == p - 1);
    Ok(LegendreValue::from_bool(e == 1))
}

/// Brute-force square search. Slow, but independent of [`legendre`].
pub fn legendre_oracle(a: i64, n: OddPrime) -> Result<LegendreValue> {
    let r = n.reduce(a) as u64;
    if r == 0 {
        return Err(Error::NotInvertible { a, n: n.get() });
    }
    let p = n.get() as u64;
    Ok(LegendreValue::from_bool((1..p).any(|x| x * x % p == r)))
}

/// `sum_{x mod n} q^(a x^2)` as an exact cyclotomic integer.
///
/// `a = 0` is allowed and yields the integer `n`.
pub fn gauss_sum_exact(params: &CycParams, a: i64) -> CycNum {
    let n = params.n();
    let a = n.reduce(a) as u64;
    let p = n.get() as u64;
    // Accumulate counts per q-exponent, then build the element once.
    let mut counts = vec![0i64; n.as_usize()];
    for x in 0..p {
        counts[(a * (x * x % p) % p) as usize] += 1;
    }
    CycNum::from_q_power_counts(params, &counts)
}

/// `G(1, n) = (1 + i^-n) / (1 + i^-1) * sqrt(n)` evaluated in floating point.
pub fn gauss_closed_numeric(n: OddPrime) -> Complex64 {
    let i = Complex64::i();
    let i_inv_n = i.powi(-(n.get() as i32));
    (Complex64::new(1.0, 0.0) + i_inv_n) / (Complex64::new(1.0, 0.0) + i.inv()) * (n.get() as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: i64) -> OddPrime {
        OddPrime::new(n).unwrap()
    }

    #[test]
    fn odd_prime_validation() {
        assert!(OddPrime::new(3).is_ok());
        assert!(OddPrime::new(97).is_ok());
        for bad in [-3, 0, 1, 2, 4, 9, 15, 91] {
            assert_eq!(OddPrime::new(bad), Err(Error::NotOddPrime(bad)));
        }
    }

    #[test]
    fn mod_inverse_examples() {
        assert_eq!(mod_inverse(2, p(5)).unwrap(), 3);
        assert_eq!(mod_inverse(1, p(7)).unwrap(), 1);
        assert_eq!(mod_inverse(-1, p(3)).unwrap(), 2);
        assert!(mod_inverse(10, p(5)).is_err());
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(1, p(11)).unwrap(), LegendreValue::Residue);
        assert_eq!(legendre(2, p(3)).unwrap(), LegendreValue::NonResidue);
        assert_eq!(legendre(4, p(7)).unwrap(), LegendreValue::Residue);
        assert!(legendre(21, p(7)).is_err());
    }

    #[test]
    fn legendre_oracle_examples() {
        assert_eq!(legendre_oracle(2, p(7)).unwrap(), LegendreValue::Residue);
        assert_eq!(legendre_oracle(3, p(7)).unwrap(), LegendreValue::NonResidue);
        assert_eq!(legendre_oracle(9, p(11)).unwrap(), LegendreValue::Residue);
        assert!(legendre_oracle(0, p(7)).is_err());
    }

    #[test]
    fn gauss_sum_examples() {
        let params = CycParams::new(3, 1).unwrap();
        assert_eq!(gauss_sum_exact(&params, 1).coeffs_i64(), vec![1, 2]);
        assert_eq!(gauss_sum_exact(&params, 2).coeffs_i64(), vec![-1, -2]);
        for n in [3, 5, 7, 11] {
            let params = CycParams::new(n, 1).unwrap();
            assert_eq!(gauss_sum_exact(&params, 0), CycNum::from_int(&params, n));
        }
    }

    #[test]
    fn gauss_closed_form_branches() {
        let g3 = gauss_closed_numeric(p(3));
        assert!((g3 - Complex64::new(0.0, 3f64.sqrt())).norm() < 1e-12);
        let g5 = gauss_closed_numeric(p(5));
        assert!((g5 - Complex64::new(5f64.sqrt(), 0.0)).norm() < 1e-12);
        let g7 = gauss_closed_numeric(p(7));
        assert!((g7 - Complex64::new(0.0, 7f64.sqrt())).norm() < 1e-12);
    }

    #[test]
    fn legendre_value_product() {
        use LegendreValue::*;
        assert_eq!(Residue * NonResidue, NonResidue);
        assert_eq!(NonResidue * NonResidue, Residue);
    }
}
