//! The `n`-dimensional representations `rho_(a,b)` of the quantum torus,
//! `e[1,0] -> L`, `e[0,1] -> M`, restricted to `a = q^alpha` and `b = 1`.
//!
//! `L` is the cyclic shift with ones on the subdiagonal and `a` in the top
//! right corner; `M = diag(b^(1/n) q^(-2i))` with `b^(1/n) = q^rho_exp`. Inside
//! the `n`-th roots of unity only `b = 1` has `n`-th roots, so `rho_exp` is a
//! free choice of root and does not change `b`.

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CycNum, CycParams};
use crate::cycmat::{CycMatrix, MatrixUnit, MonomialMatrix};
use crate::error::{Error, Result};
use crate::numtheory::OddPrime;
use crate::sl2::Sl2Matrix;
use crate::torus::BasisIndex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RepParams {
    params: CycParams,
    alpha: u32,
    rho_exp: u32,
}

impl RepParams {
    pub fn new(params: CycParams, alpha: i64, rho_exp: i64) -> Self {
        let n = params.n();
        RepParams {
            params,
            alpha: n.reduce(alpha),
            rho_exp: n.reduce(rho_exp),
        }
    }

    /// `rho_(1,1)` with `b^(1/n) = 1`.
    pub fn trivial(params: CycParams) -> Self {
        Self::new(params, 0, 0)
    }

    pub fn params(&self) -> &CycParams {
        &self.params
    }

    pub fn n(&self) -> OddPrime {
        self.params.n()
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn rho_exp(&self) -> u32 {
        self.rho_exp
    }

    /// Exponent of `q` in `b`, always zero here.
    pub fn beta(&self) -> u32 {
        0
    }

    pub fn is_trivial_class(&self) -> bool {
        self.alpha == 0 && self.rho_exp == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepMatrixPair {
    pub l: CycMatrix,
    pub m: CycMatrix,
}

pub fn build_generators(rp: &RepParams) -> RepMatrixPair {
    RepMatrixPair {
        l: rho_monomial(rp, 1, 0).to_cyc(),
        m: rho_monomial(rp, 0, 1).to_cyc(),
    }
}

/// `rho(e[r,s]) = q^(-rs) L^r M^s` in compact form.
///
/// Column `j` of `L^r M^s` is `q^(s (rho_exp - 2j)) a^w e_((j + r) mod n)`
/// where `w = floor((j + r) / n)` counts wraps past the corner entry; this
/// is `L^n = aI` applied to any integer `r`.
pub fn rho_monomial(rp: &RepParams, r: i64, s: i64) -> MonomialMatrix {
    let n = rp.n().as_i64();
    let cols = (0..n)
        .map(|j| {
            let target = j + r;
            let wraps = target.div_euclid(n);
            let e = -r * s + s * (rp.rho_exp as i64 - 2 * j) + rp.alpha as i64 * wraps;
            (target.rem_euclid(n) as usize, e)
        })
        .collect();
    MonomialMatrix::new(rp.params, cols).expect("shift is a permutation")
}

pub fn rho_basis(rp: &RepParams, r: i64, s: i64) -> CycMatrix {
    rho_monomial(rp, r, s).to_cyc()
}

pub fn rho_index(rp: &RepParams, idx: BasisIndex) -> MonomialMatrix {
    rho_monomial(rp, idx.r, idx.s)
}

/// Scalars by which `e[n,0]` and `e[0,n]` act.
pub fn central_character(rp: &RepParams) -> (CycNum, CycNum) {
    let n = rp.n().as_i64();
    let scalar_of = |m: MonomialMatrix| m.to_cyc().as_scalar().expect("central elements act by scalars");
    (scalar_of(rho_monomial(rp, n, 0)), scalar_of(rho_monomial(rp, 0, n)))
}

/// One matrix unit obtained as `E[i,j] = L^i E[0,0] L^k`, `k = (n - j) mod n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitWitness {
    pub unit: MatrixUnit,
    pub left_power: usize,
    pub right_power: usize,
}

/// Builds every matrix unit from `L` and `M` by explicit matrix arithmetic,
/// which shows that the image of `rho_(1,1)` is the full matrix algebra.
///
/// `sum_i M^i = n E[0,0]` first, then `L^i E[0,0] = E[i,0]`, then
/// `E[i,0] L^k = E[i,n-k]`. Each step is compared to the canonical unit.
pub fn matrix_unit_witness(rp: &RepParams) -> Result<Vec<UnitWitness>> {
    if !rp.is_trivial_class() {
        return Err(Error::NotTrivialClass);
    }
    let n = rp.n();
    let dim = n.as_usize();
    let RepMatrixPair { l, m } = build_generators(rp);
    let n_scalar = CycNum::from_int(&rp.params, n.get());

    let mut sum = CycMatrix::zeros(n);
    let mut power = CycMatrix::identity(n);
    for _ in 0..dim {
        sum = sum.try_add(&power)?;
        power = power.try_mul(&m)?;
    }
    let e00 = CycMatrix::unit(n, MatrixUnit::new(n, 0, 0)?);
    if sum != e00.scalar_mul(&n_scalar)? {
        return Err(Error::WitnessMismatch { i: 0, j: 0 });
    }
    let e00 = CycMatrix::from_fn(n, |i, j| {
        sum.get(i, j).exact_div(&n_scalar).expect("entries are multiples of n")
    });

    let mut witnesses = Vec::with_capacity(dim * dim);
    let mut column_unit = e00;
    for i in 0..dim {
        if i > 0 {
            column_unit = l.try_mul(&column_unit)?;
        }
        if column_unit != CycMatrix::unit(n, MatrixUnit::new(n, i, 0)?) {
            return Err(Error::WitnessMismatch { i, j: 0 });
        }
        let mut current = column_unit.clone();
        for k in 0..dim {
            if k > 0 {
                current = current.try_mul(&l)?;
            }
            let j = (dim - k) % dim;
            let unit = MatrixUnit::new(n, i, j)?;
            if current != CycMatrix::unit(n, unit) {
                return Err(Error::WitnessMismatch { i, j });
            }
            witnesses.push(UnitWitness {
                unit,
                left_power: i,
                right_power: k,
            });
        }
    }
    Ok(witnesses)
}

/// Whether `B` fixes the representation with `a = q^alpha`, `b = q^beta`:
/// `a alpha + b beta = alpha` and `c alpha + d beta = beta` modulo `n`.
pub fn is_fixed_by_exponents(n: OddPrime, alpha: i64, beta: i64, b: &Sl2Matrix) -> bool {
    let m = n.as_i64() as i128;
    let (al, be) = (alpha as i128, beta as i128);
    let [ba, bb, bc, bd] = b.entries().map(|x| x as i128);
    (ba * al + bb * be - al).rem_euclid(m) == 0 && (bc * al + bd * be - be).rem_euclid(m) == 0
}

pub fn is_fixed_by(rp: &RepParams, b: &Sl2Matrix) -> bool {
    is_fixed_by_exponents(rp.n(), rp.alpha as i64, rp.beta() as i64, b)
}

/// `|det(B - I)| = |2 - tr B|`; requires 1 not to be an eigenvalue.
pub fn fixed_order_bound(b: &Sl2Matrix) -> Result<u64> {
    let d = 2 - b.trace() as i128;
    if d == 0 {
        return Err(Error::UnitEigenvalue);
    }
    Ok(d.unsigned_abs() as u64)
}
