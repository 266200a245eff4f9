//! The quantum torus: finite combinations of basis symbols `e[r,s]` with
//! product `e[p,t] e[r,s] = q^(ps - rt) e[p+r, t+s]` and the `SL2(Z)` action
//! `e[p,t] -> e[ap + bt, cp + dt]`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CycNum, CycParams};
use crate::error::{Error, Result};
use crate::sl2::Sl2Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisIndex {
    pub r: i64,
    pub s: i64,
}

impl BasisIndex {
    pub const fn new(r: i64, s: i64) -> Self {
        BasisIndex { r, s }
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e[{},{}]", self.r, self.s)
    }
}

/// Exponent of `q` produced by `e[x] * e[y]`.
#[inline]
pub fn product_exponent(x: BasisIndex, y: BasisIndex) -> i64 {
    x.r * y.s - y.r * x.s
}

/// `e[x] * e[y] = coefficient * e[index]`.
pub fn basis_mul(params: &CycParams, x: BasisIndex, y: BasisIndex) -> (CycNum, BasisIndex) {
    (
        CycNum::from_power(params, product_exponent(x, y)),
        BasisIndex::new(x.r + y.r, x.s + y.s),
    )
}

/// Writes `e[r,s] = q^k * e[pn, tn] * e[i, j]` with `0 <= i, j < n`; returns
/// `(k, central part, residue part)`.
pub fn decompose(params: &CycParams, idx: BasisIndex) -> (i64, BasisIndex, BasisIndex) {
    let n = params.n().as_i64();
    let central = BasisIndex::new(idx.r.div_euclid(n) * n, idx.s.div_euclid(n) * n);
    let residue = BasisIndex::new(idx.r.rem_euclid(n), idx.s.rem_euclid(n));
    (-product_exponent(central, residue), central, residue)
}

/// A finite linear combination of basis symbols. Zero coefficients are never
/// stored.
#[derive(Clone, PartialEq, Eq)]
pub struct TorusElement {
    params: CycParams,
    terms: BTreeMap<BasisIndex, CycNum>,
}

#[derive(Serialize, Deserialize)]
struct RawTerm {
    r: i64,
    s: i64,
    coeff: CycNum,
}

impl TorusElement {
    pub fn zero(params: CycParams) -> Self {
        TorusElement {
            params,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(params: CycParams) -> Self {
        Self::basis(params, BasisIndex::new(0, 0))
    }

    pub fn basis(params: CycParams, idx: BasisIndex) -> Self {
        Self::term(params, idx, CycNum::one(params.n()))
    }

    pub fn term(params: CycParams, idx: BasisIndex, coeff: CycNum) -> Self {
        let mut x = Self::zero(params);
        x.add_term(idx, coeff);
        x
    }

    pub fn params(&self) -> &CycParams {
        &self.params
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisIndex, &CycNum)> {
        self.terms.iter()
    }

    pub fn coeff(&self, idx: BasisIndex) -> Option<&CycNum> {
        self.terms.get(&idx)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, idx: BasisIndex, coeff: CycNum) {
        assert_eq!(coeff.n(), self.params.n(), "coefficient order mismatch");
        match self.terms.entry(idx) {
            std::collections::btree_map::Entry::Vacant(v) => {
                if !coeff.is_zero() {
                    v.insert(coeff);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.params != other.params {
            return Err(Error::ParamMismatch {
                left: self.params.n().get(),
                right: other.params.n().get(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (&idx, c) in &other.terms {
            out.add_term(idx, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (&idx, c) in &other.terms {
            out.add_term(idx, -c);
        }
        Ok(out)
    }

    /// Bilinear extension of [`basis_mul`].
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zero(self.params);
        for (&x, cx) in &self.terms {
            for (&y, cy) in &other.terms {
                let k = product_exponent(x, y);
                let c = (cx * cy).mul_q_power(&self.params, k);
                out.add_term(BasisIndex::new(x.r + y.r, x.s + y.s), c);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &CycNum) -> Self {
        let mut out = Self::zero(self.params);
        for (&idx, c) in &self.terms {
            out.add_term(idx, s * c);
        }
        out
    }

    /// `e[p,t] -> e[ap + bt, cp + dt]`, coefficients unchanged.
    pub fn sl2_act(&self, b: &Sl2Matrix) -> Self {
        let mut out = Self::zero(self.params);
        for (&idx, c) in &self.terms {
            let (r, s) = b.apply(idx.r, idx.s);
            out.add_term(BasisIndex::new(r, s), c.clone());
        }
        out
    }

    /// `x y - y x`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    /// Commutes with both generators `e[1,0]` and `e[0,1]`, which generate the
    /// whole algebra.
    pub fn is_central(&self) -> bool {
        [BasisIndex::new(1, 0), BasisIndex::new(0, 1)].into_iter().all(|g| {
            let g = Self::basis(self.params, g);
            self.commutator(&g).expect("same params").is_empty()
        })
    }

    /// Every stored index has both components divisible by `n`.
    pub fn has_central_support(&self) -> bool {
        let n = self.params.n().as_i64();
        self.terms.keys().all(|i| i.r % n == 0 && i.s % n == 0)
    }
}

impl fmt::Debug for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TorusElement({self})")
    }
}

/// Terms as `(coeff) * e[r,s]`, joined by `+`; monomial coefficients print as
/// `q^e * e[r,s]`.
impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let q_power = |c: &CycNum| (0..self.params.n().as_i64()).find(|&e| *c == CycNum::from_power(&self.params, e));
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(idx, c)| match q_power(c) {
                Some(e) => format!("q^{e} * {idx}"),
                None => format!("({c}) * {idx}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// JSON as a list of `{r, s, coeff}`. The params are not part of the form and
/// are supplied on decode.
impl Serialize for TorusElement {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.terms.iter().map(|(idx, c)| RawTerm {
            r: idx.r,
            s: idx.s,
            coeff: c.clone(),
        }))
    }
}

impl TorusElement {
    /// Decodes the `[{r, s, coeff}, ...]` form.
    pub fn from_terms_json<'de, D: serde::Deserializer<'de>>(
        params: CycParams,
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw: Vec<RawTerm> = Vec::deserialize(deserializer)?;
        let mut out = Self::zero(params);
        for t in raw {
            if t.coeff.n() != params.n() {
                return Err(D::Error::custom("coefficient order mismatch"));
            }
            out.add_term(BasisIndex::new(t.r, t.s), t.coeff);
        }
        Ok(out)
    }
}
