//! Invariant suite runnable from a release binary.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::conjugator::{
    cc_star_scalar, cocycle_scalar, conj_any, conj_direct, verify_conjugation, ConjMatrix, Orientation,
};
use crate::cyclotomic::{CycNum, CycParams};
use crate::numtheory::{gauss_sum_exact, legendre, legendre_oracle, OddPrime};
use crate::rep::{is_fixed_by, matrix_unit_witness, rho_monomial, RepParams};
use crate::sl2::{random_sl2, Sl2Matrix};
use crate::torus::{BasisIndex, TorusElement};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub n: u32,
    pub passed: bool,
    pub cases: usize,
}

const WORD_LEN: usize = 12;

fn outcome(name: &str, n: OddPrime, cases: usize, passed: bool) -> CheckOutcome {
    CheckOutcome {
        name: name.to_string(),
        n: n.get(),
        passed,
        cases,
    }
}

fn random_element<R: Rng>(rng: &mut R, params: CycParams, terms: usize) -> TorusElement {
    let mut x = TorusElement::zero(params);
    for _ in 0..terms {
        let idx = BasisIndex::new(rng.gen_range(-4..=4), rng.gen_range(-4..=4));
        let c =
            CycNum::from_power(&params, rng.gen_range(0..params.n().as_i64())).scale(&rng.gen_range(-3i64..=3).into());
        x.add_term(idx, c);
    }
    x
}

/// Runs every invariant family at one prime. Deterministic for a given seed.
pub fn run_for(n: OddPrime, seed: u64) -> Vec<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n.get() as u64);
    let params = CycParams::standard(n);
    let rp = RepParams::trivial(params);
    let ni = n.as_i64();
    let mut out = Vec::new();

    let legendre_ok = (1..ni).all(|a| legendre(a, n).ok() == legendre_oracle(a, n).ok());
    out.push(outcome(
        "legendre agrees with oracle",
        n,
        (ni - 1) as usize,
        legendre_ok,
    ));

    let g1 = gauss_sum_exact(&params, 1);
    let twist_ok = (1..ni).all(|a| {
        let s = legendre(a, n).expect("a is a unit").sign();
        gauss_sum_exact(&params, a) == g1.scale(&s.into())
    });
    out.push(outcome("gauss sum twisting", n, (ni - 1) as usize, twist_ok));
    out.push(outcome(
        "gauss sum norm",
        n,
        1,
        &g1 * &g1.conj() == CycNum::from_int(&params, n.get()),
    ));

    let mut hom_ok = true;
    for p in 0..ni {
        for t in 0..ni {
            for r in 0..ni {
                for s in 0..ni {
                    let lhs = rho_monomial(&rp, p, t).mul(&rho_monomial(&rp, r, s));
                    let rhs = rho_monomial(&rp, p + r, t + s).scale(p * s - r * t);
                    hom_ok &= lhs == rhs;
                }
            }
        }
    }
    out.push(outcome("rho homomorphism", n, (ni as usize).pow(4), hom_ok));
    out.push(outcome(
        "matrix unit witness",
        n,
        1,
        matrix_unit_witness(&rp).map(|w| w.len()) == Ok((ni * ni) as usize),
    ));

    let mut action_ok = true;
    for _ in 0..20 {
        let b = random_sl2(&mut rng, WORD_LEN);
        let x = random_element(&mut rng, params, 3);
        let y = random_element(&mut rng, params, 3);
        let lhs = x.try_mul(&y).expect("same params").sl2_act(&b);
        let rhs = x.sl2_act(&b).try_mul(&y.sl2_act(&b)).expect("same params");
        action_ok &= lhs == rhs;
    }
    out.push(outcome("sl2 action is multiplicative", n, 20, action_ok));

    let mut conj_ok = true;
    let mut unitary_ok = true;
    let mut fixed_ok = true;
    let cases = 20;
    for i in 0..cases {
        let b = match i {
            0 => Sl2Matrix::S,
            1 => Sl2Matrix::T,
            2 => Sl2Matrix::IDENTITY,
            _ => random_sl2(&mut rng, WORD_LEN),
        };
        let c = conj_any(&b, &params);
        let check = verify_conjugation(&c.matrix.to_cyc(), &b, &rp);
        let orientation_ok = match c.path {
            crate::conjugator::ConjPath::Direct => check.orientation() == Some(Orientation::Left),
            _ => check.left,
        };
        conj_ok &= orientation_ok;
        unitary_ok &= cc_star_scalar(&c.matrix).ok() == Some(c.nu.clone());
        fixed_ok &= is_fixed_by(&rp, &b);
    }
    out.push(outcome("conjugation identity", n, cases, conj_ok));
    out.push(outcome("C C* = nu I", n, cases, unitary_ok));
    out.push(outcome("rho(1,1) fixed", n, cases, fixed_ok));

    let mut trace_ok = true;
    let mut cocycle_ok = true;
    let mut tested = 0;
    while tested < 10 {
        let b1 = random_sl2(&mut rng, WORD_LEN);
        let b2 = random_sl2(&mut rng, WORD_LEN);
        let Ok(c1) = conj_direct(&b1, &params) else { continue };
        if let Some(k) = crate::conjugator::k_b(&b1, n) {
            let expected = match legendre(k as i64, n) {
                Ok(l) => g1.scale(&l.sign().into()),
                Err(_) => CycNum::from_int(&params, n.get()),
            };
            trace_ok &= ConjMatrix::Pow(c1).trace() == expected;
        }
        cocycle_ok &= cocycle_scalar(&b1, &b2, &params).map(|c| c.norm_ok).unwrap_or(false);
        tested += 1;
    }
    out.push(outcome("trace is a gauss sum", n, tested, trace_ok));
    out.push(outcome("cocycle proportionality", n, tested, cocycle_ok));

    out
}

pub fn run(primes: &[OddPrime], seed: u64) -> Vec<CheckOutcome> {
    primes.iter().flat_map(|&n| run_for(n, seed)).collect()
}
