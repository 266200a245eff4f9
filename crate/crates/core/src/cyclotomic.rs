//! Exact arithmetic in `Z[zeta]`, `zeta` a primitive `n`-th root of unity for an
//! odd prime `n`.
//!
//! Elements are stored on the power basis `1, zeta, ..., zeta^(n-2)`. The
//! top power is always eliminated with `1 + zeta + ... + zeta^(n-1) = 0`, so
//! two elements are equal exactly when their coefficient vectors are.
//!
//! The distinguished root `q` used everywhere else in the crate is
//! `zeta^k` for the configured `q_exp = k`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numtheory::OddPrime;

/// The ring order `n` together with the choice `q = zeta^q_exp`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct CycParams {
    n: OddPrime,
    q_exp: u32,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    n: i64,
    q_exp: i64,
}

impl TryFrom<RawParams> for CycParams {
    type Error = Error;
    fn try_from(raw: RawParams) -> Result<Self> {
        CycParams::new(raw.n, raw.q_exp)
    }
}

impl From<CycParams> for RawParams {
    fn from(p: CycParams) -> Self {
        RawParams {
            n: p.n.as_i64(),
            q_exp: p.q_exp as i64,
        }
    }
}

impl CycParams {
    pub fn new(n: i64, q_exp: i64) -> Result<Self> {
        let n = OddPrime::new(n)?;
        let k = n.reduce(q_exp);
        if k == 0 {
            return Err(Error::NonPrimitiveRoot { n: n.get(), q_exp });
        }
        Ok(CycParams { n, q_exp: k })
    }

    /// `q = zeta`.
    pub fn standard(n: OddPrime) -> Self {
        CycParams { n, q_exp: 1 }
    }

    #[inline]
    pub fn n(&self) -> OddPrime {
        self.n
    }

    #[inline]
    pub fn q_exp(&self) -> u32 {
        self.q_exp
    }

    /// Exponent of `zeta` representing `q^e`.
    #[inline]
    pub fn zeta_exponent(&self, e: i64) -> u32 {
        let n = self.n.as_i64();
        ((e.rem_euclid(n)) * self.q_exp as i64 % n) as u32
    }
}

/// An element of `Z[zeta_n]` in canonical form.
///
/// Only `n` is part of the value; the choice of `q` lives in [`CycParams`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNum {
    coeffs: Vec<BigInt>,
}

impl CycNum {
    pub fn zero(n: OddPrime) -> Self {
        CycNum {
            coeffs: vec![BigInt::zero(); n.as_usize() - 1],
        }
    }

    pub fn one(n: OddPrime) -> Self {
        Self::from_int(&CycParams::standard(n), 1)
    }

    pub fn from_int(params: &CycParams, c: impl Into<BigInt>) -> Self {
        let mut x = Self::zero(params.n());
        x.coeffs[0] = c.into();
        x
    }

    /// Builds from the coefficients on `1, zeta, ..., zeta^(n-2)`.
    pub fn from_coeffs(n: OddPrime, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() != n.as_usize() - 1 {
            return Err(Error::DimensionMismatch {
                left: coeffs.len(),
                right: n.as_usize() - 1,
            });
        }
        Ok(CycNum { coeffs })
    }

    /// Reduces a coefficient vector of length `n` on `1, zeta, ..., zeta^(n-1)`.
    fn from_full(mut full: Vec<BigInt>) -> Self {
        let top = full.pop().expect("nonempty coefficient vector");
        if !top.is_zero() {
            for c in full.iter_mut() {
                *c -= &top;
            }
        }
        CycNum { coeffs: full }
    }

    /// `zeta^e`.
    pub fn zeta_power(n: OddPrime, e: i64) -> Self {
        let mut full = vec![BigInt::zero(); n.as_usize()];
        full[n.reduce(e) as usize] = BigInt::one();
        Self::from_full(full)
    }

    /// `q^e = zeta^(k e)`.
    pub fn from_power(params: &CycParams, e: i64) -> Self {
        Self::zeta_power(params.n(), params.zeta_exponent(e) as i64)
    }

    /// `sum_e counts[e] * q^e` for `e` in `0..n`.
    pub fn from_q_power_counts(params: &CycParams, counts: &[i64]) -> Self {
        let n = params.n();
        debug_assert_eq!(counts.len(), n.as_usize());
        let mut full = vec![BigInt::zero(); n.as_usize()];
        for (e, &c) in counts.iter().enumerate() {
            if c != 0 {
                full[params.zeta_exponent(e as i64) as usize] += c;
            }
        }
        Self::from_full(full)
    }

    #[inline]
    pub fn n(&self) -> OddPrime {
        OddPrime::new(self.coeffs.len() as i64 + 1).expect("length is n - 1 for an odd prime n")
    }

    #[inline]
    fn order(&self) -> usize {
        self.coeffs.len() + 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficients as `i64`; panics if any does not fit. Meant for tests and display.
    pub fn coeffs_i64(&self) -> Vec<i64> {
        self.coeffs
            .iter()
            .map(|c| c.to_i64().expect("coefficient fits in i64"))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The integer value if `self` lies in `Z`.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| &self.coeffs[0])
    }

    /// Recognizes `sign * zeta^e`; returns `(negated, e)`.
    pub fn as_zeta_unit(&self) -> Option<(bool, u32)> {
        let m = self.coeffs.len();
        let nonzero: Vec<usize> = (0..m).filter(|&i| !self.coeffs[i].is_zero()).collect();
        match nonzero.as_slice() {
            [i] => {
                let c = &self.coeffs[*i];
                if c.is_one() {
                    Some((false, *i as u32))
                } else if (-c).is_one() {
                    Some((true, *i as u32))
                } else {
                    None
                }
            }
            // zeta^(n-1) = -(1 + zeta + ... + zeta^(n-2))
            _ if nonzero.len() == m => {
                let c = &self.coeffs[0];
                let all_same = self.coeffs.iter().all(|x| x == c);
                if all_same && (-c).is_one() {
                    Some((false, m as u32))
                } else if all_same && c.is_one() {
                    Some((true, m as u32))
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.coeffs.len() != other.coeffs.len() {
            return Err(Error::ParamMismatch {
                left: self.order() as u32,
                right: other.order() as u32,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(CycNum {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(CycNum {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    /// Product, reduced first modulo `x^n - 1` and then modulo the cyclotomic
    /// polynomial.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        if let Some((neg, e)) = other.as_zeta_unit() {
            let r = self.mul_zeta_power(e as i64);
            return Ok(if neg { -r } else { r });
        }
        if let Some((neg, e)) = self.as_zeta_unit() {
            let r = other.mul_zeta_power(e as i64);
            return Ok(if neg { -r } else { r });
        }
        let n = self.order();
        let mut full = vec![BigInt::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                full[(i + j) % n] += a * b;
            }
        }
        Ok(Self::from_full(full))
    }

    /// `self * zeta^e`, a coefficient rotation.
    pub fn mul_zeta_power(&self, e: i64) -> Self {
        let n = self.order();
        let shift = e.rem_euclid(n as i64) as usize;
        if shift == 0 {
            return self.clone();
        }
        let mut full = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            full[(i + shift) % n] = c.clone();
        }
        Self::from_full(full)
    }

    /// `self * q^e`.
    pub fn mul_q_power(&self, params: &CycParams, e: i64) -> Self {
        self.mul_zeta_power(params.zeta_exponent(e) as i64)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        CycNum {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Image under the Galois automorphism `zeta -> zeta^k`, `gcd(k, n) = 1`.
    pub fn galois(&self, k: i64) -> Self {
        let n = self.order();
        let k = k.rem_euclid(n as i64) as usize;
        assert!(k != 0, "galois exponent must be a unit mod n");
        let mut full = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            full[i * k % n] = c.clone();
        }
        Self::from_full(full)
    }

    /// Complex conjugation, `zeta -> zeta^-1`.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// Field norm down to `Q`, with the cofactor `prod_{k != 1} sigma_k(self)`.
    fn norm_with_cofactor(&self) -> (BigInt, CycNum) {
        let n = self.order() as i64;
        let mut cofactor = CycNum::one(self.n());
        for k in 2..n {
            cofactor = &cofactor * &self.galois(k);
        }
        let norm = &cofactor * self;
        let value = norm.as_integer().expect("field norm is rational").clone();
        (value, cofactor)
    }

    /// `N(self) = prod_k sigma_k(self)`, an integer.
    pub fn norm(&self) -> BigInt {
        self.norm_with_cofactor().0
    }

    /// Returns `z` with `divisor * z = self`.
    ///
    /// The inverse of `divisor` in `Q(zeta)` is its norm cofactor over its
    /// norm; the division succeeds only when every resulting coefficient is an
    /// integer.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        self.check_same(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        if let Some((neg, e)) = divisor.as_zeta_unit() {
            let r = self.mul_zeta_power(-(e as i64));
            return Ok(if neg { -r } else { r });
        }
        if let Some(d) = divisor.as_integer() {
            return self.div_integer(d);
        }
        let (norm, cofactor) = divisor.norm_with_cofactor();
        (self * &cofactor).div_integer(&norm)
    }

    fn div_integer(&self, d: &BigInt) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return Err(Error::InexactDivision);
            }
            coeffs.push(q);
        }
        Ok(CycNum { coeffs })
    }

    /// Numeric value at `zeta = exp(2 pi i / n)`. Display and cross-checks only.
    pub fn embed(&self) -> Complex64 {
        let n = self.order() as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let theta = 2.0 * std::f64::consts::PI * i as f64 / n;
                Complex64::from_polar(1.0, theta) * c.to_f64().unwrap_or(f64::NAN)
            })
            .sum()
    }

    /// Largest absolute coefficient; a rough size measure.
    pub fn height(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }
}

impl Add for &CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        self.try_add(rhs).expect("cyclotomic order mismatch")
    }
}

impl Sub for &CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        self.try_sub(rhs).expect("cyclotomic order mismatch")
    }
}

impl Mul for &CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        self.try_mul(rhs).expect("cyclotomic order mismatch")
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(mut self) -> CycNum {
        for c in self.coeffs.iter_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Add for CycNum {
    type Output = CycNum;
    fn add(mut self, rhs: CycNum) -> CycNum {
        self += &rhs;
        self
    }
}

impl Sub for CycNum {
    type Output = CycNum;
    fn sub(mut self, rhs: CycNum) -> CycNum {
        self -= &rhs;
        self
    }
}

impl Mul for CycNum {
    type Output = CycNum;
    fn mul(self, rhs: CycNum) -> CycNum {
        &self * &rhs
    }
}

impl AddAssign<&CycNum> for CycNum {
    fn add_assign(&mut self, rhs: &CycNum) {
        self.check_same(rhs).expect("cyclotomic order mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&CycNum> for CycNum {
    fn sub_assign(&mut self, rhs: &CycNum) {
        self.check_same(rhs).expect("cyclotomic order mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

/// `c0 + c1*z + c2*z^2 + ...`, zero terms omitted.
impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        f.write_str("z")?;
                    } else {
                        write!(f, "z^{i}")?;
                    }
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum<{}>({})", self.order(), self)
    }
}

impl Serialize for CycNum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

impl<'de> Deserialize<'de> for CycNum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<String> = Vec::deserialize(deserializer)?;
        let n = OddPrime::new(raw.len() as i64 + 1).map_err(D::Error::custom)?;
        let coeffs = raw
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        CycNum::from_coeffs(n, coeffs).map_err(D::Error::custom)
    }
}
