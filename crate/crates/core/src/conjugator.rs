//! Conjugating matrices for the `SL2(Z)` action on `rho_(1,1)`.
//!
//! For `B = (a,b;c,d)` with `b` invertible mod `n` the matrix
//!
//! ```text
//! C[i][j] = q^(-b' d (i - a j)^2 - 2 c j (i - a j) - a c j^2),   b' = b^-1 mod n
//! ```
//!
//! satisfies `C rho(x) = rho(B x) C` for every torus element `x`. When `n | b`
//! the matrix is assembled from `B T` and `T` instead; see [`conj_any`].

use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CycNum, CycParams};
use crate::cycmat::{CycMatrix, PowMatrix};
use crate::error::{Error, Result};
use crate::numtheory::{gauss_closed_numeric, gauss_sum_exact, legendre, mod_inverse, LegendreValue, OddPrime};
use crate::rep::{rho_monomial, RepParams};
use crate::sl2::Sl2Matrix;

/// Tolerance for floating-point cross-checks of exact results.
pub const NUMERIC_TOLERANCE: f64 = 1e-9;

/// `K_B = -(b^-1 d (1 - a)^2 + c (2 - a)) mod n`, or `None` when `n | b`.
///
/// The diagonal of `C` is `q^(K_B i^2)`.
pub fn k_b(b: &Sl2Matrix, n: OddPrime) -> Option<u32> {
    let m = n.as_i64() as i128;
    let b_inv = mod_inverse(b.b(), n).ok()? as i128;
    let [a, _, c, d] = b.entries().map(|x| (x as i128).rem_euclid(m));
    let one_minus_a = (1 - a).rem_euclid(m);
    let two_minus_a = (2 - a).rem_euclid(m);
    let inner = (b_inv * d % m * one_minus_a % m * one_minus_a + c * two_minus_a) % m;
    Some((-inner).rem_euclid(m) as u32)
}

/// The literal entry formula. Requires `gcd(b, n) = 1`.
pub fn conj_direct(b: &Sl2Matrix, params: &CycParams) -> Result<PowMatrix> {
    let n = params.n();
    let m = n.as_i64();
    let b_inv = mod_inverse(b.b(), n).map_err(|_| Error::UpperRightDivisible { b: b.b(), n: n.get() })? as i64;
    let [a, _, c, d] = b.entries().map(|x| x.rem_euclid(m));
    Ok(PowMatrix::from_fn(*params, |i, j| {
        let (i, j) = (i as i64, j as i64);
        let shift = (i - a * j).rem_euclid(m);
        let t1 = b_inv * d % m * (shift * shift % m) % m;
        let t2 = 2 * c * j % m * shift % m;
        let t3 = a * c % m * (j * j % m) % m;
        -(t1 + t2 + t3)
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConjPath {
    Direct,
    /// `C(B) = C(B T) C(T)*`.
    Composed {
        factors: (Sl2Matrix, Sl2Matrix),
    },
}

impl ConjPath {
    pub fn is_direct(&self) -> bool {
        matches!(self, ConjPath::Direct)
    }
}

impl fmt::Display for ConjPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConjPath::Direct => f.write_str("direct"),
            ConjPath::Composed { factors: (bt, t) } => write!(f, "composed C{bt} * C{t}^*"),
        }
    }
}

/// A conjugating matrix in whichever form it was produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", content = "matrix", rename_all = "snake_case")]
pub enum ConjMatrix {
    Pow(PowMatrix),
    Dense(CycMatrix),
}

impl ConjMatrix {
    pub fn to_cyc(&self) -> CycMatrix {
        match self {
            ConjMatrix::Pow(p) => p.to_cyc(),
            ConjMatrix::Dense(c) => c.clone(),
        }
    }

    pub fn as_pow(&self) -> Option<&PowMatrix> {
        match self {
            ConjMatrix::Pow(p) => Some(p),
            ConjMatrix::Dense(_) => None,
        }
    }

    pub fn trace(&self) -> CycNum {
        match self {
            ConjMatrix::Pow(p) => p.trace(),
            ConjMatrix::Dense(c) => c.trace(),
        }
    }
}

impl fmt::Display for ConjMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConjMatrix::Pow(p) => p.fmt(f),
            ConjMatrix::Dense(c) => c.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conjugator {
    pub matrix: ConjMatrix,
    /// The scalar with `C C* = nu I`: `n` on the direct path, `n^2` composed.
    pub nu: CycNum,
    pub path: ConjPath,
}

/// Conjugating matrix for any `B`.
///
/// If `n | b` then `ad = 1 mod n` forces `a != 0 mod n`, so `B T` has upper
/// right entry `a + b` invertible mod `n`. Since `C(T)^-1 = C(T)* / n` the
/// product `C(B T) C(T)*` conjugates correctly; the factor `n` is kept and
/// shows up as `nu = n^2`.
pub fn conj_any(b: &Sl2Matrix, params: &CycParams) -> Conjugator {
    let n = params.n();
    if let Ok(c) = conj_direct(b, params) {
        return Conjugator {
            matrix: ConjMatrix::Pow(c),
            nu: CycNum::from_int(params, n.get()),
            path: ConjPath::Direct,
        };
    }
    let bt = b.mul(&Sl2Matrix::T);
    let c_bt = conj_direct(&bt, params).expect("B T has a unit upper-right entry");
    let c_t = conj_direct(&Sl2Matrix::T, params).expect("T has b = 1");
    let dense = c_bt.mul_to_cyc(&c_t.ctranspose()).expect("same params");
    Conjugator {
        matrix: ConjMatrix::Dense(dense),
        nu: CycNum::from_int(params, n.get() as u64 * n.get() as u64),
        path: ConjPath::Composed {
            factors: (bt, Sl2Matrix::T),
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `C rho(x) = rho(B x) C`, i.e. `rho(B x) = C rho(x) C^-1`.
    Left,
    /// `rho(x) C = C rho(B x)`, i.e. `rho(B x) = C^-1 rho(x) C`.
    Right,
    Both,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Left => "left (C rho(x) = rho(Bx) C)",
            Orientation::Right => "right (rho(x) C = C rho(Bx))",
            Orientation::Both => "both",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConjugationCheck {
    pub left: bool,
    pub right: bool,
}

impl ConjugationCheck {
    pub fn ok(&self) -> bool {
        self.left || self.right
    }

    pub fn orientation(&self) -> Option<Orientation> {
        match (self.left, self.right) {
            (true, true) => Some(Orientation::Both),
            (true, false) => Some(Orientation::Left),
            (false, true) => Some(Orientation::Right),
            (false, false) => None,
        }
    }
}

/// Tests both inverse-free conjugation identities on every basis element
/// `e[r,s]`, `0 <= r, s < n`.
pub fn verify_conjugation(c: &CycMatrix, b: &Sl2Matrix, rp: &RepParams) -> ConjugationCheck {
    let n = rp.n().as_i64();
    let mut left = true;
    let mut right = true;
    'outer: for r in 0..n {
        for s in 0..n {
            let x = rho_monomial(rp, r, s);
            let (br, bs) = b.apply(r, s);
            let bx = rho_monomial(rp, br, bs);
            if left {
                let lhs = c.mul_monomial(&x).expect("same dimension");
                let rhs = CycMatrix::monomial_mul(&bx, c).expect("same dimension");
                left = lhs == rhs;
            }
            if right {
                let lhs = CycMatrix::monomial_mul(&x, c).expect("same dimension");
                let rhs = c.mul_monomial(&bx).expect("same dimension");
                right = lhs == rhs;
            }
            if !left && !right {
                break 'outer;
            }
        }
    }
    ConjugationCheck { left, right }
}

/// `nu` with `C C* = nu I`.
pub fn cc_star_scalar(c: &ConjMatrix) -> Result<CycNum> {
    let product = match c {
        ConjMatrix::Pow(p) => p.mul_to_cyc(&p.ctranspose())?,
        ConjMatrix::Dense(d) => d.try_mul(&d.ctranspose())?,
    };
    product.as_scalar().ok_or(Error::NotScalar)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cocycle {
    /// `C(B1) C(B2) = lambda C(B1 B2)`.
    pub lambda: CycNum,
    pub nus: [CycNum; 3],
    /// `lambda conj(lambda) nu3 = nu1 nu2`.
    pub norm_ok: bool,
    pub paths: [ConjPath; 3],
}

pub fn cocycle_scalar(b1: &Sl2Matrix, b2: &Sl2Matrix, params: &CycParams) -> Result<Cocycle> {
    let c1 = conj_any(b1, params);
    let c2 = conj_any(b2, params);
    let c12 = conj_any(&b1.mul(b2), params);
    let product = match (&c1.matrix, &c2.matrix) {
        (ConjMatrix::Pow(x), ConjMatrix::Pow(y)) => x.mul_to_cyc(y)?,
        (x, y) => x.to_cyc().try_mul(&y.to_cyc())?,
    };
    let lambda = product.proportionality_scalar(&c12.matrix.to_cyc())?;
    let norm_ok = &(&lambda * &lambda.conj()) * &c12.nu == &c1.nu * &c2.nu;
    Ok(Cocycle {
        lambda,
        nus: [c1.nu, c2.nu, c12.nu],
        norm_ok,
        paths: [c1.path, c2.path, c12.path],
    })
}

/// Quadratic character of `K_B`, including the degenerate class `K_B = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KClass {
    #[serde(rename = "+1")]
    Residue,
    #[serde(rename = "-1")]
    NonResidue,
    #[serde(rename = "zero-class")]
    Zero,
}

impl KClass {
    pub fn of(k: u32, n: OddPrime) -> Self {
        match legendre(k as i64, n) {
            Ok(LegendreValue::Residue) => KClass::Residue,
            Ok(LegendreValue::NonResidue) => KClass::NonResidue,
            Err(_) => KClass::Zero,
        }
    }
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KClass::Residue => "+1",
            KClass::NonResidue => "-1",
            KClass::Zero => "zero-class",
        })
    }
}

/// Everything computed about one `B`. Field names are the stable JSON schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugationReport {
    #[serde(rename = "B")]
    pub b: Sl2Matrix,
    pub params: CycParams,
    pub path: ConjPath,
    #[serde(rename = "C")]
    pub c: ConjMatrix,
    pub nu: CycNum,
    /// `C C*` is scalar and equals `n` (direct) or `n^2` (composed).
    pub nu_ok: bool,
    #[serde(rename = "K_B")]
    pub k_b: Option<u32>,
    #[serde(rename = "legendre_K")]
    pub legendre_k: Option<KClass>,
    pub trace_exact: CycNum,
    /// Direct path only: `Tr C = (K_B/n) G(1)`, or `n` when `K_B = 0`.
    pub trace_identity_ok: Option<bool>,
    pub trace_numeric: Complex64,
    /// Closed-form value of the trace; direct path with `q_exp = 1` only.
    pub trace_closed_form: Option<Complex64>,
    pub trace_numeric_ok: Option<bool>,
    pub det_exact: CycNum,
    /// `det C conj(det C) = nu^n`.
    pub det_modulus_ok: bool,
    /// `det C / nu^(n/2)`.
    pub det_phase_numeric: Complex64,
    /// Whether the phase is `+1` or `-1`. Recorded, not a pass/fail check:
    /// the phase is generally a fourth root of unity.
    pub det_phase_is_sign: bool,
    /// `Tr C / det(C)^(1/n)` with the principal root.
    pub trace_det_ratio: Complex64,
    pub conjugation_ok: bool,
    pub orientation: Option<Orientation>,
}

impl ConjugationReport {
    /// Conjugation holds and every applicable check passed.
    pub fn all_checks_pass(&self) -> bool {
        self.conjugation_ok
            && self.nu_ok
            && self.det_modulus_ok
            && self.trace_identity_ok.unwrap_or(true)
            && self.trace_numeric_ok.unwrap_or(true)
    }
}

pub fn analyze(b: &Sl2Matrix, params: &CycParams) -> Result<ConjugationReport> {
    let n = params.n();
    let Conjugator { matrix, nu, path } = conj_any(b, params);
    let dense = matrix.to_cyc();

    let nu_ok = cc_star_scalar(&matrix).map(|s| s == nu).unwrap_or(false);

    let k = k_b(b, n);
    let legendre_k = k.map(|k| KClass::of(k, n));

    let trace_exact = matrix.trace();
    let trace_numeric = trace_exact.embed();
    let (trace_identity_ok, trace_closed_form) = match (&path, k, legendre_k) {
        (ConjPath::Direct, Some(k), Some(class)) => {
            let expected = match class {
                KClass::Zero => CycNum::from_int(params, n.get()),
                _ => {
                    let g1 = gauss_sum_exact(params, 1);
                    if class == KClass::Residue {
                        g1
                    } else {
                        -g1
                    }
                }
            };
            debug_assert!(class != KClass::Zero || k == 0);
            let closed = (params.q_exp() == 1).then(|| match class {
                KClass::Zero => Complex64::new(n.get() as f64, 0.0),
                KClass::Residue => gauss_closed_numeric(n),
                KClass::NonResidue => -gauss_closed_numeric(n),
            });
            (Some(trace_exact == expected), closed)
        }
        _ => (None, None),
    };
    let trace_numeric_ok = trace_closed_form.map(|z| (z - trace_numeric).norm() < NUMERIC_TOLERANCE);

    let det_exact = dense.det()?;
    let nu_int = nu.as_integer().expect("nu is an integer").clone();
    let nu_pow = CycNum::from_int(params, num_traits::pow(nu_int.clone(), n.as_usize()));
    let det_modulus_ok = &det_exact * &det_exact.conj() == nu_pow;
    let nu_f = num_traits::ToPrimitive::to_f64(&nu_int).unwrap_or(f64::NAN);
    let det_numeric = det_exact.embed();
    let det_phase_numeric = det_numeric / nu_f.powf(n.get() as f64 / 2.0);
    let det_phase_is_sign =
        det_phase_numeric.im.abs() < NUMERIC_TOLERANCE && (det_phase_numeric.re.abs() - 1.0).abs() < NUMERIC_TOLERANCE;
    let trace_det_ratio = if det_numeric.is_zero() {
        Complex64::new(f64::NAN, f64::NAN)
    } else {
        trace_numeric / det_numeric.powf(1.0 / n.get() as f64)
    };

    let check = verify_conjugation(&dense, b, &RepParams::trivial(*params));

    Ok(ConjugationReport {
        b: *b,
        params: *params,
        path,
        c: matrix,
        nu,
        nu_ok,
        k_b: k,
        legendre_k,
        trace_exact,
        trace_identity_ok,
        trace_numeric,
        trace_closed_form,
        trace_numeric_ok,
        det_exact,
        det_modulus_ok,
        det_phase_numeric,
        det_phase_is_sign,
        trace_det_ratio,
        conjugation_ok: check.ok(),
        orientation: check.orientation(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: i64) -> CycParams {
        CycParams::new(n, 1).unwrap()
    }

    #[test]
    fn k_b_examples() {
        let n3 = OddPrime::new(3).unwrap();
        assert_eq!(k_b(&Sl2Matrix::S, n3), Some(1));
        for n in [3, 5, 7, 11] {
            assert_eq!(k_b(&Sl2Matrix::T, OddPrime::new(n).unwrap()), Some(0));
        }
        let lower = Sl2Matrix::new(1, 0, 1, 1).unwrap();
        assert_eq!(k_b(&lower, n3), None);
        let b3 = Sl2Matrix::new(1, 3, 0, 1).unwrap();
        assert_eq!(k_b(&b3, n3), None);
    }

    #[test]
    fn k_b_is_diagonal_exponent() {
        let params = p(7);
        for b in [
            Sl2Matrix::S,
            Sl2Matrix::T,
            Sl2Matrix::new(2, 1, 1, 1).unwrap(),
            Sl2Matrix::new(3, -2, 2, -1).unwrap(),
        ] {
            let k = k_b(&b, params.n()).unwrap() as i64;
            let c = conj_direct(&b, &params).unwrap();
            for i in 0..7 {
                assert_eq!(c.exp(i, i) as i64, (k * (i * i) as i64).rem_euclid(7));
            }
        }
    }

    #[test]
    fn direct_examples() {
        let c = conj_direct(&Sl2Matrix::S, &p(3)).unwrap();
        assert_eq!(c.exps_rows(), vec![vec![0, 0, 0], vec![0, 1, 2], vec![0, 2, 1]]);
        let t = conj_direct(&Sl2Matrix::T, &p(3)).unwrap();
        for i in 0..3i64 {
            for j in 0..3i64 {
                assert_eq!(t.exp(i as usize, j as usize) as i64, (-(i - j) * (i - j)).rem_euclid(3));
            }
            assert_eq!(t.exp(i as usize, i as usize), 0);
        }
        let err = conj_direct(&Sl2Matrix::IDENTITY, &p(3));
        assert_eq!(err, Err(Error::UpperRightDivisible { b: 0, n: 3 }));
    }

    #[test]
    fn conj_any_paths() {
        let params = p(5);
        let direct = conj_any(&Sl2Matrix::S, &params);
        assert!(direct.path.is_direct());
        assert_eq!(
            direct.matrix,
            ConjMatrix::Pow(conj_direct(&Sl2Matrix::S, &params).unwrap())
        );
        assert_eq!(direct.nu, CycNum::from_int(&params, 5));

        let lower = Sl2Matrix::new(1, 5, 2, 11).unwrap();
        let composed = conj_any(&lower, &params);
        assert_eq!(
            composed.path,
            ConjPath::Composed {
                factors: (lower.mul(&Sl2Matrix::T), Sl2Matrix::T)
            }
        );
        assert_eq!(composed.nu, CycNum::from_int(&params, 25));
        assert_eq!(cc_star_scalar(&composed.matrix).unwrap(), composed.nu);
    }

    #[test]
    fn orientation_examples() {
        let params = p(3);
        let rp = RepParams::trivial(params);
        let id = CycMatrix::identity(params.n());
        let check = verify_conjugation(&id, &Sl2Matrix::IDENTITY, &rp);
        assert_eq!(check.orientation(), Some(Orientation::Both));

        let c = conj_direct(&Sl2Matrix::S, &params).unwrap().to_cyc();
        let check = verify_conjugation(&c, &Sl2Matrix::S, &rp);
        assert_eq!(check.orientation(), Some(Orientation::Left));

        assert!(!verify_conjugation(&id, &Sl2Matrix::S, &rp).ok());
    }

    #[test]
    fn cc_star_examples() {
        let params = p(3);
        let c = ConjMatrix::Pow(conj_direct(&Sl2Matrix::S, &params).unwrap());
        assert_eq!(cc_star_scalar(&c).unwrap(), CycNum::from_int(&params, 3));
        let id = ConjMatrix::Dense(CycMatrix::identity(params.n()));
        assert!(cc_star_scalar(&id).unwrap().is_one());
        let not_unitary = ConjMatrix::Dense(PowMatrix::from_fn(params, |_, _| 0).to_cyc());
        assert_eq!(cc_star_scalar(&not_unitary), Err(Error::NotScalar));
    }

    #[test]
    fn cocycle_examples() {
        let params = p(3);
        let three = CycNum::from_int(&params, 3);
        let tt = cocycle_scalar(&Sl2Matrix::T, &Sl2Matrix::T, &params).unwrap();
        assert!(tt.norm_ok);
        assert_eq!(&tt.lambda * &tt.lambda.conj(), three);

        let s_inv = Sl2Matrix::S.inverse();
        let ss = cocycle_scalar(&Sl2Matrix::S, &s_inv, &params).unwrap();
        assert!(ss.norm_ok);
        assert!(!ss.paths[2].is_direct());

        let st = cocycle_scalar(&Sl2Matrix::S, &Sl2Matrix::T, &params).unwrap();
        assert_eq!(&st.lambda * &st.lambda.conj(), three);
    }

    #[test]
    fn analyze_s_n3() {
        let params = p(3);
        let r = analyze(&Sl2Matrix::S, &params).unwrap();
        assert_eq!(r.k_b, Some(1));
        assert_eq!(r.legendre_k, Some(KClass::Residue));
        assert_eq!(r.trace_exact.coeffs_i64(), vec![1, 2]);
        assert!((r.trace_numeric - Complex64::new(0.0, 3f64.sqrt())).norm() < 1e-9);
        assert_eq!(r.trace_identity_ok, Some(true));
        assert_eq!(r.trace_numeric_ok, Some(true));
        assert!(r.conjugation_ok);
        assert_eq!(r.orientation, Some(Orientation::Left));
        assert!(r.det_modulus_ok);
        assert!((r.det_exact.embed() - Complex64::new(0.0, -27f64.sqrt())).norm() < 1e-9);
        assert!((r.det_phase_numeric - Complex64::new(0.0, -1.0)).norm() < 1e-9);
        assert!(!r.det_phase_is_sign);
        assert!(r.all_checks_pass());
    }

    #[test]
    fn analyze_t_degenerate_trace() {
        let params = p(3);
        let r = analyze(&Sl2Matrix::T, &params).unwrap();
        assert_eq!(r.k_b, Some(0));
        assert_eq!(r.legendre_k, Some(KClass::Zero));
        assert_eq!(r.trace_exact, CycNum::from_int(&params, 3));
        assert_eq!(r.trace_identity_ok, Some(true));
        assert!(r.all_checks_pass());
    }

    #[test]
    fn analyze_composed() {
        let params = p(5);
        let r = analyze(&Sl2Matrix::IDENTITY, &params).unwrap();
        assert!(!r.path.is_direct());
        assert_eq!(r.k_b, None);
        assert_eq!(r.trace_identity_ok, None);
        assert!(r.conjugation_ok && r.nu_ok && r.det_modulus_ok);
        assert!((r.det_phase_numeric.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn report_json_round_trip() {
        let params = CycParams::new(5, 2).unwrap();
        for b in [Sl2Matrix::S, Sl2Matrix::new(1, 0, 3, 1).unwrap()] {
            let r = analyze(&b, &params).unwrap();
            let js = serde_json::to_string(&r).unwrap();
            let back: ConjugationReport = serde_json::from_str(&js).unwrap();
            assert_eq!(back, r);
        }
    }
}
