//! Exact `n x n` matrices over `Z[zeta_n]`.
//!
//! Three forms are used:
//! - [`CycMatrix`]: dense, arbitrary entries.
//! - [`PowMatrix`]: every entry a single power of `q`, stored as an exponent
//!   table. Conjugating matrices have this shape.
//! - [`MonomialMatrix`]: one power of `q` per column, zero elsewhere. Images of
//!   torus basis elements have this shape, and multiplying by one is a
//!   permutation plus coefficient rotations.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cyclotomic::{CycNum, CycParams};
use crate::error::{Error, Result};
use crate::numtheory::OddPrime;

/// Index pair of the matrix unit `E[i,j]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatrixUnit {
    pub i: usize,
    pub j: usize,
}

impl MatrixUnit {
    pub fn new(n: OddPrime, i: usize, j: usize) -> Result<Self> {
        let dim = n.as_usize();
        if i >= dim || j >= dim {
            return Err(Error::DimensionMismatch {
                left: i.max(j),
                right: dim,
            });
        }
        Ok(MatrixUnit { i, j })
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct CycMatrix {
    n: OddPrime,
    entries: Vec<CycNum>,
}

impl CycMatrix {
    pub fn zeros(n: OddPrime) -> Self {
        let dim = n.as_usize();
        CycMatrix {
            n,
            entries: vec![CycNum::zero(n); dim * dim],
        }
    }

    pub fn identity(n: OddPrime) -> Self {
        Self::scalar(&CycNum::one(n))
    }

    /// `s * I`.
    pub fn scalar(s: &CycNum) -> Self {
        let n = s.n();
        let mut m = Self::zeros(n);
        for i in 0..n.as_usize() {
            m.set(i, i, s.clone());
        }
        m
    }

    pub fn unit(n: OddPrime, u: MatrixUnit) -> Self {
        let mut m = Self::zeros(n);
        m.set(u.i, u.j, CycNum::one(n));
        m
    }

    pub fn from_fn(n: OddPrime, mut f: impl FnMut(usize, usize) -> CycNum) -> Self {
        let dim = n.as_usize();
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let x = f(i, j);
                assert_eq!(x.n(), n, "entry order differs from matrix order");
                entries.push(x);
            }
        }
        CycMatrix { n, entries }
    }

    pub fn from_rows(rows: Vec<Vec<CycNum>>) -> Result<Self> {
        let dim = rows.len();
        let n = OddPrime::new(dim as i64)?;
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: row.len(),
                    right: dim,
                });
            }
            for x in row {
                if x.n() != n {
                    return Err(Error::ParamMismatch {
                        left: x.n().get(),
                        right: n.get(),
                    });
                }
                entries.push(x);
            }
        }
        Ok(CycMatrix { n, entries })
    }

    #[inline]
    pub fn n(&self) -> OddPrime {
        self.n
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n.as_usize()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &CycNum {
        &self.entries[i * self.dim() + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: CycNum) {
        let dim = self.dim();
        self.entries[i * dim + j] = x;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[CycNum]> {
        self.entries.chunks(self.dim())
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let dim = self.dim();
        let mut out = Self::zeros(self.n);
        for i in 0..dim {
            for k in 0..dim {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..dim {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    out.entries[i * dim + j] += &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(CycMatrix {
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(CycMatrix {
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scalar_mul(&self, s: &CycNum) -> Result<Self> {
        if s.n() != self.n {
            return Err(Error::ParamMismatch {
                left: s.n().get(),
                right: self.n.get(),
            });
        }
        Ok(CycMatrix {
            n: self.n,
            entries: self.entries.iter().map(|x| s * x).collect(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(CycNum::is_zero)
    }

    /// Entry `(i, j)` of the result is `conj(A[j, i])`.
    pub fn ctranspose(&self) -> Self {
        let dim = self.dim();
        Self::from_fn(self.n, |i, j| self.entries[j * dim + i].conj())
    }

    pub fn trace(&self) -> CycNum {
        let mut t = CycNum::zero(self.n);
        for i in 0..self.dim() {
            t += self.get(i, i);
        }
        t
    }

    /// `Some(s)` when the matrix equals `s * I`.
    pub fn as_scalar(&self) -> Option<CycNum> {
        let dim = self.dim();
        let s = self.get(0, 0);
        for i in 0..dim {
            for j in 0..dim {
                let x = self.get(i, j);
                let ok = if i == j { x == s } else { x.is_zero() };
                if !ok {
                    return None;
                }
            }
        }
        Some(s.clone())
    }

    /// Fraction-free (Bareiss) elimination. Every division is exact in
    /// `Z[zeta]`; a failed division indicates a bug and is returned as an error.
    pub fn det(&self) -> Result<CycNum> {
        let dim = self.dim();
        let mut m: Vec<Vec<CycNum>> = self.rows().map(<[CycNum]>::to_vec).collect();
        let mut negate = false;
        let mut prev = CycNum::one(self.n);
        for k in 0..dim - 1 {
            if m[k][k].is_zero() {
                match (k + 1..dim).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(k, i);
                        negate = !negate;
                    }
                    None => return Ok(CycNum::zero(self.n)),
                }
            }
            let (top, bottom) = m.split_at_mut(k + 1);
            let pivot_row = &top[k];
            let pivot = &pivot_row[k];
            for row in bottom.iter_mut() {
                for j in k + 1..dim {
                    let num = &(&row[j] * pivot) - &(&row[k] * &pivot_row[j]);
                    row[j] = num.exact_div(&prev)?;
                }
                row[k] = CycNum::zero(self.n);
            }
            prev = pivot.clone();
        }
        let d = m[dim - 1][dim - 1].clone();
        Ok(if negate { -d } else { d })
    }

    /// The scalar `lambda` with `self = lambda * other`.
    ///
    /// `lambda` is read off at the first unit entry of `other` (falling back to
    /// the first nonzero entry) and then checked on every entry.
    pub fn proportionality_scalar(&self, other: &Self) -> Result<CycNum> {
        self.check_same(other)?;
        let idx = other
            .entries
            .iter()
            .position(|x| x.as_zeta_unit().is_some())
            .or_else(|| other.entries.iter().position(|x| !x.is_zero()))
            .ok_or(Error::NotProportional)?;
        let lambda = self.entries[idx]
            .exact_div(&other.entries[idx])
            .map_err(|_| Error::NotProportional)?;
        for (a, b) in self.entries.iter().zip(&other.entries) {
            if *a != &lambda * b {
                return Err(Error::NotProportional);
            }
        }
        Ok(lambda)
    }

    pub fn mul_monomial(&self, p: &MonomialMatrix) -> Result<Self> {
        if p.n() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: p.dim(),
            });
        }
        // (A P)[i, j] = A[i, row(j)] * q^e(j)
        Ok(Self::from_fn(self.n, |i, j| {
            let (r, e) = p.cols[j];
            self.get(i, r).mul_q_power(&p.params, e as i64)
        }))
    }

    pub fn monomial_mul(p: &MonomialMatrix, a: &Self) -> Result<Self> {
        if p.n() != a.n {
            return Err(Error::DimensionMismatch {
                left: p.dim(),
                right: a.dim(),
            });
        }
        // (P A)[row(j), k] = q^e(j) * A[j, k]
        let dim = a.dim();
        let mut out = Self::zeros(a.n);
        for (j, &(r, e)) in p.cols.iter().enumerate() {
            for k in 0..dim {
                out.set(r, k, a.get(j, k).mul_q_power(&p.params, e as i64));
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

impl fmt::Display for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|x| format!("[{x}]")).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for CycMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.rows())
    }
}

impl<'de> Deserialize<'de> for CycMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<CycNum>> = Vec::deserialize(deserializer)?;
        CycMatrix::from_rows(rows).map_err(D::Error::custom)
    }
}

/// Dense matrix `(q^exps[i][j])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowMatrix {
    params: CycParams,
    exps: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct RawPowMatrix {
    n: i64,
    q_exp: i64,
    exps: Vec<Vec<i64>>,
}

impl PowMatrix {
    pub fn from_fn(params: CycParams, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let n = params.n();
        let dim = n.as_usize();
        let mut exps = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                exps.push(n.reduce(f(i, j)));
            }
        }
        PowMatrix { params, exps }
    }

    #[inline]
    pub fn params(&self) -> &CycParams {
        &self.params
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.params.n().as_usize()
    }

    /// Exponent of `q` at `(i, j)`, in `[0, n)`.
    #[inline]
    pub fn exp(&self, i: usize, j: usize) -> u32 {
        self.exps[i * self.dim() + j]
    }

    pub fn exps_rows(&self) -> Vec<Vec<u32>> {
        self.exps.chunks(self.dim()).map(<[u32]>::to_vec).collect()
    }

    pub fn to_cyc(&self) -> CycMatrix {
        CycMatrix::from_fn(self.params.n(), |i, j| {
            CycNum::from_power(&self.params, self.exp(i, j) as i64)
        })
    }

    /// Entrywise conjugate of the transpose: exponents `(n - e[j][i]) mod n`.
    pub fn ctranspose(&self) -> Self {
        let e = |i, j| self.exp(i, j) as i64;
        PowMatrix::from_fn(self.params, |i, j| -e(j, i))
    }

    /// Product as a dense matrix. Each entry is a sum of `n` powers of `q`,
    /// accumulated as a histogram of exponents.
    pub fn mul_to_cyc(&self, other: &PowMatrix) -> Result<CycMatrix> {
        if self.params != other.params {
            return Err(Error::ParamMismatch {
                left: self.params.n().get(),
                right: other.params.n().get(),
            });
        }
        let dim = self.dim();
        let mut counts = vec![0i64; dim];
        Ok(CycMatrix::from_fn(self.params.n(), |i, j| {
            counts.iter_mut().for_each(|c| *c = 0);
            for k in 0..dim {
                counts[((self.exp(i, k) + other.exp(k, j)) as usize) % dim] += 1;
            }
            CycNum::from_q_power_counts(&self.params, &counts)
        }))
    }

    pub fn trace(&self) -> CycNum {
        let dim = self.dim();
        let mut counts = vec![0i64; dim];
        for i in 0..dim {
            counts[self.exp(i, i) as usize] += 1;
        }
        CycNum::from_q_power_counts(&self.params, &counts)
    }
}

impl Serialize for PowMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RawPowMatrix {
            n: self.params.n().as_i64(),
            q_exp: self.params.q_exp() as i64,
            exps: self
                .exps
                .chunks(self.dim())
                .map(|r| r.iter().map(|&e| e as i64).collect())
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PowMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawPowMatrix::deserialize(deserializer)?;
        let params = CycParams::new(raw.n, raw.q_exp).map_err(D::Error::custom)?;
        let dim = params.n().as_usize();
        if raw.exps.len() != dim || raw.exps.iter().any(|r| r.len() != dim) {
            return Err(D::Error::custom(format!("exps must be {dim}x{dim}")));
        }
        Ok(PowMatrix::from_fn(params, |i, j| raw.exps[i][j]))
    }
}

impl fmt::Display for PowMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = (self.dim() - 1).to_string().len();
        for row in self.exps.chunks(self.dim()) {
            let cells: Vec<String> = row.iter().map(|e| format!("{e:>width$}")).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Generalized permutation matrix: column `j` holds `q^e` at row `r` where
/// `cols[j] = (r, e)`, and zeros elsewhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialMatrix {
    params: CycParams,
    cols: Vec<(usize, u32)>,
}

impl MonomialMatrix {
    /// `cols[j] = (row, q-exponent)`; the rows must form a permutation.
    pub fn new(params: CycParams, cols: Vec<(usize, i64)>) -> Result<Self> {
        let n = params.n();
        let dim = n.as_usize();
        if cols.len() != dim {
            return Err(Error::DimensionMismatch {
                left: cols.len(),
                right: dim,
            });
        }
        let mut seen = vec![false; dim];
        for &(r, _) in &cols {
            if r >= dim || std::mem::replace(&mut seen[r], true) {
                return Err(Error::DimensionMismatch { left: r, right: dim });
            }
        }
        Ok(MonomialMatrix {
            params,
            cols: cols.into_iter().map(|(r, e)| (r, n.reduce(e))).collect(),
        })
    }

    pub fn identity(params: CycParams) -> Self {
        let dim = params.n().as_usize();
        MonomialMatrix {
            params,
            cols: (0..dim).map(|j| (j, 0)).collect(),
        }
    }

    #[inline]
    pub fn n(&self) -> OddPrime {
        self.params.n()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn params(&self) -> &CycParams {
        &self.params
    }

    pub fn cols(&self) -> &[(usize, u32)] {
        &self.cols
    }

    pub fn mul(&self, other: &MonomialMatrix) -> MonomialMatrix {
        // (P Q) e_j = P (q^f e_s) = q^(f + e) e_r
        let n = self.n();
        let cols = other
            .cols
            .iter()
            .map(|&(s, f)| {
                let (r, e) = self.cols[s];
                (r, n.reduce(e as i64 + f as i64))
            })
            .collect();
        MonomialMatrix {
            params: self.params,
            cols,
        }
    }

    pub fn scale(&self, q_power: i64) -> MonomialMatrix {
        let n = self.n();
        MonomialMatrix {
            params: self.params,
            cols: self
                .cols
                .iter()
                .map(|&(r, e)| (r, n.reduce(e as i64 + q_power)))
                .collect(),
        }
    }

    pub fn to_cyc(&self) -> CycMatrix {
        let n = self.n();
        let mut m = CycMatrix::zeros(n);
        for (j, &(r, e)) in self.cols.iter().enumerate() {
            m.set(r, j, CycNum::from_power(&self.params, e as i64));
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: i64) -> CycParams {
        CycParams::new(n, 1).unwrap()
    }

    fn unit(n: OddPrime, i: usize, j: usize) -> CycMatrix {
        CycMatrix::unit(n, MatrixUnit::new(n, i, j).unwrap())
    }

    #[test]
    fn matrix_unit_products() {
        let n = OddPrime::new(3).unwrap();
        assert_eq!(unit(n, 0, 1).try_mul(&unit(n, 1, 0)).unwrap(), unit(n, 0, 0));
        assert!(unit(n, 0, 1).try_mul(&unit(n, 0, 1)).unwrap().is_zero());
        assert!(MatrixUnit::new(n, 3, 0).is_err());
    }

    #[test]
    fn dimension_mismatch() {
        let a = CycMatrix::identity(OddPrime::new(3).unwrap());
        let b = CycMatrix::identity(OddPrime::new(5).unwrap());
        assert!(a.try_mul(&b).is_err());
        assert!(a.try_add(&b).is_err());
    }

    #[test]
    fn identity_trace_det() {
        for n in [3, 5, 7] {
            let n = OddPrime::new(n).unwrap();
            let id = CycMatrix::identity(n);
            assert_eq!(id.trace(), CycNum::from_int(&CycParams::standard(n), n.get()));
            assert!(id.det().unwrap().is_one());
            assert_eq!(id.ctranspose(), id);
            assert!(unit(n, 0, 1).trace().is_zero());
        }
    }

    #[test]
    fn diagonal_power_det() {
        for n in [3, 5, 7] {
            let params = p(n);
            let on = params.n();
            let d = CycMatrix::from_fn(on, |i, j| {
                if i == j {
                    CycNum::from_power(&params, i as i64 + 1)
                } else {
                    CycNum::zero(on)
                }
            });
            assert_eq!(d.det().unwrap(), CycNum::from_power(&params, n * (n + 1) / 2));
        }
    }

    #[test]
    fn dft_pattern_trace_and_det() {
        let params = p(3);
        let s = PowMatrix::from_fn(params, |i, j| (i * j) as i64);
        assert_eq!(s.trace().coeffs_i64(), vec![1, 2]);
        assert_eq!(s.to_cyc().trace(), s.trace());
        let det = s.to_cyc().det().unwrap();
        let v = det.embed();
        assert!(v.re.abs() < 1e-9 && (v.im + 27f64.sqrt()).abs() < 1e-9, "{v}");
    }

    #[test]
    fn singular_det_is_zero() {
        let params = p(5);
        let n = params.n();
        // two equal rows
        let m = CycMatrix::from_fn(n, |i, j| {
            CycNum::from_power(&params, (if i == 1 { 0 } else { i } * j) as i64)
        });
        assert!(m.det().unwrap().is_zero());
        // zero first column forces the pivot search to fail
        let z = CycMatrix::from_fn(n, |i, j| {
            if j == 0 {
                CycNum::zero(n)
            } else {
                CycNum::from_power(&params, (i + j) as i64)
            }
        });
        assert!(z.det().unwrap().is_zero());
    }

    #[test]
    fn det_pivot_swap_sign() {
        // permutation matrix of a transposition has det -1
        let params = p(3);
        let n = params.n();
        let m = MonomialMatrix::new(params, vec![(1, 0), (0, 0), (2, 0)])
            .unwrap()
            .to_cyc();
        assert_eq!(m.det().unwrap(), -CycNum::one(n));
    }

    #[test]
    fn pow_ctranspose_matches_dense() {
        let params = p(5);
        let m = PowMatrix::from_fn(params, |i, j| (3 * i * i + j) as i64);
        let ct = m.ctranspose();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(ct.exp(i, j), (5 - m.exp(j, i)) % 5);
            }
        }
        assert_eq!(ct.to_cyc(), m.to_cyc().ctranspose());
        assert_eq!(m.mul_to_cyc(&ct).unwrap(), m.to_cyc().try_mul(&ct.to_cyc()).unwrap());
    }

    #[test]
    fn proportionality() {
        let params = p(5);
        let n = params.n();
        let b = PowMatrix::from_fn(params, |i, j| (i * j) as i64).to_cyc();
        let three = CycNum::from_int(&params, 3);
        assert_eq!(b.scalar_mul(&three).unwrap().proportionality_scalar(&b).unwrap(), three);
        let q = CycNum::from_power(&params, 1);
        assert_eq!(b.scalar_mul(&q).unwrap().proportionality_scalar(&b).unwrap(), q);

        let id = CycMatrix::identity(n);
        let a = id.try_add(&unit(n, 0, 0)).unwrap();
        assert_eq!(a.proportionality_scalar(&id), Err(Error::NotProportional));
    }

    #[test]
    fn monomial_products_match_dense() {
        let params = p(5);
        let a = PowMatrix::from_fn(params, |i, j| (i * j + 2 * i) as i64).to_cyc();
        let m = MonomialMatrix::new(params, vec![(2, 1), (0, 3), (4, 0), (1, 4), (3, 2)]).unwrap();
        let dense = m.to_cyc();
        assert_eq!(a.mul_monomial(&m).unwrap(), a.try_mul(&dense).unwrap());
        assert_eq!(CycMatrix::monomial_mul(&m, &a).unwrap(), dense.try_mul(&a).unwrap());
        assert_eq!(m.mul(&m).to_cyc(), dense.try_mul(&dense).unwrap());
        assert!(MonomialMatrix::new(params, vec![(0, 0), (0, 0), (1, 0), (2, 0), (3, 0)]).is_err());
    }

    #[test]
    fn json_forms() {
        let params = CycParams::new(3, 2).unwrap();
        let m = PowMatrix::from_fn(params, |i, j| (i * j) as i64);
        let js = serde_json::to_string(&m).unwrap();
        assert_eq!(js, r#"{"n":3,"q_exp":2,"exps":[[0,0,0],[0,1,2],[0,2,1]]}"#);
        assert_eq!(serde_json::from_str::<PowMatrix>(&js).unwrap(), m);
        assert!(serde_json::from_str::<PowMatrix>(r#"{"n":3,"q_exp":1,"exps":[[0]]}"#).is_err());

        let c = m.to_cyc();
        let js = serde_json::to_string(&c).unwrap();
        assert!(js.starts_with(r#"[[["1","0"],["1","0"],["1","0"]],"#));
        assert_eq!(serde_json::from_str::<CycMatrix>(&js).unwrap(), c);
    }
}
