//! Independent oracles: Leibniz determinants, dense-product conjugation
//! checks, and brute-force Legendre symbols, compared against the fast paths.

use num_bigint::BigInt;
use proptest::prelude::*;
use qtorus_core::numtheory::{legendre, legendre_oracle};
use qtorus_core::rep::{build_generators, RepMatrixPair};
use qtorus_core::{
    conj_any, conj_direct, verify_conjugation, CycMatrix, CycNum, CycParams, OddPrime, PowMatrix, RepParams, Sl2Matrix,
};

/// Sum over permutations with sign; exponential, fine for n <= 5.
fn leibniz_det(m: &CycMatrix) -> CycNum {
    fn rec(m: &CycMatrix, row: usize, used: &mut [bool], sign: bool, acc_prod: CycNum, out: &mut CycNum) {
        let dim = m.dim();
        if row == dim {
            if sign {
                *out -= &acc_prod;
            } else {
                *out += &acc_prod;
            }
            return;
        }
        for j in 0..dim {
            if used[j] {
                continue;
            }
            // inversions contributed by placing column j at this row
            let inv = (0..j).filter(|&k| !used[k]).count() % 2 == 1;
            used[j] = true;
            rec(m, row + 1, used, sign ^ inv, &acc_prod * m.get(row, j), out);
            used[j] = false;
        }
    }
    let mut out = CycNum::zero(m.n());
    rec(m, 0, &mut vec![false; m.dim()], false, CycNum::one(m.n()), &mut out);
    out
}

fn mat_pow(m: &CycMatrix, k: i64) -> CycMatrix {
    let n = m.n().as_i64();
    (0..k.rem_euclid(n)).fold(CycMatrix::identity(m.n()), |acc, _| acc.try_mul(m).unwrap())
}

/// `rho(e[r,s]) = q^(-rs) L^r M^s` computed by dense matrix powers, using
/// `L^n = M^n = I` for rho_(1,1).
fn dense_rho(params: &CycParams, gens: &RepMatrixPair, r: i64, s: i64) -> CycMatrix {
    mat_pow(&gens.l, r)
        .try_mul(&mat_pow(&gens.m, s))
        .unwrap()
        .scalar_mul(&CycNum::from_power(params, -r * s))
        .unwrap()
}

fn dense_left_conjugation(c: &CycMatrix, b: &Sl2Matrix, params: &CycParams) -> bool {
    let gens = build_generators(&RepParams::trivial(*params));
    let n = params.n().as_i64();
    (0..n).all(|r| {
        (0..n).all(|s| {
            let (br, bs) = b.apply(r, s);
            c.try_mul(&dense_rho(params, &gens, r, s)).unwrap() == dense_rho(params, &gens, br, bs).try_mul(c).unwrap()
        })
    })
}

fn coeffs(n: i64, c: &[i64]) -> CycNum {
    CycNum::from_coeffs(OddPrime::new(n).unwrap(), c.iter().map(|&x| BigInt::from(x)).collect()).unwrap()
}

#[test]
fn leibniz_oracle_sanity() {
    let params = CycParams::new(5, 1).unwrap();
    assert!(leibniz_det(&CycMatrix::identity(params.n())).is_one());
    let swap = qtorus_core::MonomialMatrix::new(params, vec![(1, 0), (0, 0), (2, 0), (3, 0), (4, 0)]).unwrap();
    assert_eq!(leibniz_det(&swap.to_cyc()), -CycNum::one(params.n()));
}

#[test]
fn dft_pattern_determinants_frozen() {
    // Values computed independently with a computer algebra system.
    let p3 = CycParams::new(3, 1).unwrap();
    let m3 = PowMatrix::from_fn(p3, |i, j| (i * j) as i64).to_cyc();
    let expected3 = coeffs(3, &[-3, -6]);
    assert_eq!(leibniz_det(&m3), expected3);
    assert_eq!(m3.det().unwrap(), expected3);
    let v = expected3.embed();
    assert!(v.re.abs() < 1e-9 && (v.im + 5.196152422706632).abs() < 1e-9);

    let p5 = CycParams::new(5, 1).unwrap();
    let m5 = PowMatrix::from_fn(p5, |i, j| (i * j) as i64).to_cyc();
    let expected5 = coeffs(5, &[25, 0, 50, 50]);
    assert_eq!(leibniz_det(&m5), expected5);
    assert_eq!(m5.det().unwrap(), expected5);
}

#[test]
fn s_conjugator_det_n3() {
    let params = CycParams::new(3, 1).unwrap();
    let c = conj_direct(&Sl2Matrix::S, &params).unwrap().to_cyc();
    let det = leibniz_det(&c);
    assert_eq!(c.det().unwrap(), det);
    assert_eq!(det, coeffs(3, &[-3, -6]));
}

#[test]
fn legendre_matches_oracle_up_to_97() {
    for n in (3..=97).filter(|&n| qtorus_core::numtheory::is_prime(n as u64)) {
        let p = OddPrime::new(n).unwrap();
        for a in -2 * n..2 * n {
            assert_eq!(legendre(a, p).ok(), legendre_oracle(a, p).ok(), "a={a} n={n}");
        }
    }
}

#[test]
fn conjugation_fast_path_matches_dense_products() {
    for n in [3, 5] {
        let params = CycParams::new(n, 1).unwrap();
        let rp = RepParams::trivial(params);
        for b in [
            Sl2Matrix::S,
            Sl2Matrix::T,
            Sl2Matrix::IDENTITY,
            Sl2Matrix::new(2, 1, 1, 1).unwrap(),
            Sl2Matrix::new(1, 0, 2, 1).unwrap(),
        ] {
            let c = conj_any(&b, &params).matrix.to_cyc();
            assert!(dense_left_conjugation(&c, &b, &params), "B={b} n={n}");
            assert!(verify_conjugation(&c, &b, &rp).left);
        }
        // a wrong matrix fails on both routes
        let id = CycMatrix::identity(params.n());
        assert!(!dense_left_conjugation(&id, &Sl2Matrix::S, &params));
        assert!(!verify_conjugation(&id, &Sl2Matrix::S, &rp).ok());
    }
}

fn small_pow_matrix(n: i64) -> impl Strategy<Value = PowMatrix> {
    let dim = n as usize;
    prop::collection::vec(0..n, dim * dim).prop_map(move |exps| {
        let params = CycParams::new(n, 1).unwrap();
        PowMatrix::from_fn(params, |i, j| exps[i * dim + j])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bareiss_matches_leibniz_n3(m in small_pow_matrix(3)) {
        let c = m.to_cyc();
        prop_assert_eq!(c.det().unwrap(), leibniz_det(&c));
    }

    #[test]
    fn bareiss_matches_leibniz_n5(m in small_pow_matrix(5)) {
        let c = m.to_cyc();
        prop_assert_eq!(c.det().unwrap(), leibniz_det(&c));
    }
}
