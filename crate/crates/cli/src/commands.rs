use std::io::{self, Write};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use qtorus_core::conjugator::NUMERIC_TOLERANCE;
use qtorus_core::numtheory::{gauss_closed_numeric, gauss_sum_exact};
use qtorus_core::rep::{build_generators, fixed_order_bound, is_fixed_by, matrix_unit_witness};
use qtorus_core::sl2::random_sl2;
use qtorus_core::{
    analyze, cocycle_scalar, conj_any, k_b, selftest, CycMatrix, CycNum, CycParams, Error as CoreError, KClass,
    OddPrime, RepParams, Sl2Matrix,
};

use crate::render::{check, complex, optional_check};
use crate::{parse_matrix, Command, MatrixArgs};

pub enum Failure {
    /// Bad user input.
    Invalid(CoreError),
    /// An exact computation reported an internal inconsistency.
    Defect(CoreError),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

type Outcome = Result<bool, Failure>;

fn defect(e: CoreError) -> Failure {
    Failure::Defect(e)
}

fn inputs(args: &MatrixArgs) -> Result<(CycParams, Sl2Matrix), Failure> {
    let params = args.ring.params().map_err(Failure::Invalid)?;
    let b = parse_matrix(&args.mat).map_err(Failure::Invalid)?;
    Ok((params, b))
}

fn json_line<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

pub fn dispatch(cmd: &Command, out: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Conj(args) => conj(args, out),
        Command::Analyze(args) => analyze_cmd(args, out),
        Command::Trace(args) => trace(args, out),
        Command::Det(args) => det(args, out),
        Command::Rep {
            ring,
            alpha,
            rho_exp,
            json,
        } => {
            let params = ring.params().map_err(Failure::Invalid)?;
            rep(RepParams::new(params, *alpha, *rho_exp), *json, out)
        }
        Command::Cocycle { ring, mat1, mat2, json } => {
            let params = ring.params().map_err(Failure::Invalid)?;
            let b1 = parse_matrix(mat1).map_err(Failure::Invalid)?;
            let b2 = parse_matrix(mat2).map_err(Failure::Invalid)?;
            cocycle(&params, &b1, &b2, *json, out)
        }
        Command::Scan {
            ring,
            count,
            seed,
            max_len,
            json,
        } => {
            let params = ring.params().map_err(Failure::Invalid)?;
            scan(&params, *count, *seed, *max_len, *json, out)
        }
        Command::Selftest { seed, json } => run_selftest(*seed, *json, out),
    }
}

#[derive(Serialize)]
struct ConjOutput<'a> {
    #[serde(rename = "B")]
    b: Sl2Matrix,
    params: CycParams,
    path: &'a qtorus_core::ConjPath,
    nu: &'a CycNum,
    #[serde(rename = "C")]
    c: &'a qtorus_core::ConjMatrix,
}

fn conj(args: &MatrixArgs, out: &mut dyn Write) -> Outcome {
    let (params, b) = inputs(args)?;
    let c = conj_any(&b, &params);
    if args.json {
        json_line(
            out,
            &ConjOutput {
                b,
                params,
                path: &c.path,
                nu: &c.nu,
                c: &c.matrix,
            },
        )?;
    } else {
        writeln!(out, "B = {b}, n = {}, q = zeta^{}", params.n(), params.q_exp())?;
        writeln!(out, "path: {}", c.path)?;
        writeln!(out, "C C* = {} I", c.nu)?;
        match &c.matrix {
            qtorus_core::ConjMatrix::Pow(p) => {
                writeln!(out, "C = (q^e[i][j]), exponents:")?;
                write!(out, "{p}")?;
            }
            qtorus_core::ConjMatrix::Dense(d) => {
                writeln!(out, "C (entries in Z[z], z = exp(2 pi i / n)):")?;
                write!(out, "{d}")?;
            }
        }
    }
    Ok(true)
}

fn analyze_cmd(args: &MatrixArgs, out: &mut dyn Write) -> Outcome {
    let (params, b) = inputs(args)?;
    let r = analyze(&b, &params).map_err(defect)?;
    if args.json {
        json_line(out, &r)?;
    } else {
        writeln!(out, "B = {b}, n = {}, q = zeta^{}", params.n(), params.q_exp())?;
        writeln!(out, "path:              {}", r.path)?;
        writeln!(out, "C C* = nu I:       nu = {} [{}]", r.nu, check(r.nu_ok))?;
        match (r.k_b, r.legendre_k) {
            (Some(k), Some(l)) => writeln!(out, "K_B:               {k} (Legendre {l})")?,
            _ => writeln!(out, "K_B:               undefined (n | b)")?,
        }
        writeln!(out, "trace (exact):     {}", r.trace_exact)?;
        writeln!(out, "trace (numeric):   {}", complex(r.trace_numeric))?;
        if let Some(z) = r.trace_closed_form {
            writeln!(out, "trace closed form: {}", complex(z))?;
        }
        writeln!(out, "trace identity:    {}", optional_check(r.trace_identity_ok))?;
        writeln!(out, "trace numeric:     {}", optional_check(r.trace_numeric_ok))?;
        writeln!(out, "det (exact):       {}", r.det_exact)?;
        writeln!(out, "|det|^2 = nu^n:    {}", check(r.det_modulus_ok))?;
        writeln!(
            out,
            "det phase:         {}{}",
            complex(r.det_phase_numeric),
            if r.det_phase_is_sign {
                " (real sign)"
            } else {
                " (not +-1)"
            }
        )?;
        writeln!(out, "Tr / det^(1/n):    {}", complex(r.trace_det_ratio))?;
        match r.orientation {
            Some(o) => writeln!(out, "conjugation:       ok, {o}")?,
            None => writeln!(out, "conjugation:       FAILED")?,
        }
    }
    Ok(r.all_checks_pass())
}

#[derive(Serialize)]
struct TraceOutput {
    #[serde(rename = "B")]
    b: Sl2Matrix,
    params: CycParams,
    #[serde(rename = "K_B")]
    k_b: Option<u32>,
    #[serde(rename = "legendre_K")]
    legendre_k: Option<KClass>,
    trace_exact: CycNum,
    trace_numeric: Complex64,
    trace_closed_form: Option<Complex64>,
    trace_identity_ok: Option<bool>,
    trace_numeric_ok: Option<bool>,
}

fn trace(args: &MatrixArgs, out: &mut dyn Write) -> Outcome {
    let (params, b) = inputs(args)?;
    let n = params.n();
    let c = conj_any(&b, &params);
    let trace_exact = c.matrix.trace();
    let k = k_b(&b, n);
    let class = k.map(|k| KClass::of(k, n));
    let direct = c.path.is_direct();
    let expected = class.filter(|_| direct).map(|class| match class {
        KClass::Zero => CycNum::from_int(&params, n.get()),
        KClass::Residue => gauss_sum_exact(&params, 1),
        KClass::NonResidue => -gauss_sum_exact(&params, 1),
    });
    let closed = class
        .filter(|_| direct && params.q_exp() == 1)
        .map(|class| match class {
            KClass::Zero => Complex64::new(n.get() as f64, 0.0),
            KClass::Residue => gauss_closed_numeric(n),
            KClass::NonResidue => -gauss_closed_numeric(n),
        });
    let t = TraceOutput {
        b,
        params,
        k_b: k,
        legendre_k: class,
        trace_numeric: trace_exact.embed(),
        trace_identity_ok: expected.map(|e| e == trace_exact),
        trace_numeric_ok: closed.map(|z| (z - trace_exact.embed()).norm() < NUMERIC_TOLERANCE),
        trace_closed_form: closed,
        trace_exact,
    };
    if args.json {
        json_line(out, &t)?;
    } else {
        writeln!(out, "B = {b}, n = {n}, path: {}", c.path)?;
        match (t.k_b, t.legendre_k) {
            (Some(k), Some(l)) => writeln!(out, "K_B = {k}, Legendre symbol: {l}")?,
            _ => writeln!(out, "K_B undefined (n | b)")?,
        }
        writeln!(out, "Tr C = {}", t.trace_exact)?;
        writeln!(out, "     ~ {}", complex(t.trace_numeric))?;
        if let Some(z) = t.trace_closed_form {
            writeln!(
                out,
                "closed form (K_B/n) (1 + i^-n)/(1 + i^-1) sqrt(n) = {}",
                complex(z)
            )?;
        }
        writeln!(out, "exact identity: {}", optional_check(t.trace_identity_ok))?;
        writeln!(out, "numeric agreement: {}", optional_check(t.trace_numeric_ok))?;
    }
    Ok(t.trace_identity_ok.unwrap_or(true) && t.trace_numeric_ok.unwrap_or(true))
}

#[derive(Serialize)]
struct DetOutput {
    #[serde(rename = "B")]
    b: Sl2Matrix,
    params: CycParams,
    nu: CycNum,
    det_exact: CycNum,
    det_numeric: Complex64,
    det_modulus_ok: bool,
    det_phase_numeric: Complex64,
    det_phase_is_sign: bool,
}

fn det(args: &MatrixArgs, out: &mut dyn Write) -> Outcome {
    let (params, b) = inputs(args)?;
    let n = params.n();
    let c = conj_any(&b, &params);
    let det_exact = c.matrix.to_cyc().det().map_err(defect)?;
    let nu = c.nu.as_integer().cloned().expect("nu is an integer");
    let nu_pow = CycNum::from_int(&params, num_traits::pow(nu.clone(), n.as_usize()));
    let nu_f: f64 = num_traits::ToPrimitive::to_f64(&nu).unwrap_or(f64::NAN);
    let det_numeric = det_exact.embed();
    let phase = det_numeric / nu_f.powf(n.get() as f64 / 2.0);
    let d = DetOutput {
        b,
        params,
        det_modulus_ok: &det_exact * &det_exact.conj() == nu_pow,
        det_phase_is_sign: phase.im.abs() < NUMERIC_TOLERANCE && (phase.re.abs() - 1.0).abs() < NUMERIC_TOLERANCE,
        nu: c.nu,
        det_exact,
        det_numeric,
        det_phase_numeric: phase,
    };
    if args.json {
        json_line(out, &d)?;
    } else {
        writeln!(out, "B = {b}, n = {n}, path: {}", c.path)?;
        writeln!(out, "det C = {}", d.det_exact)?;
        writeln!(out, "      ~ {}", complex(d.det_numeric))?;
        writeln!(out, "det C * conj(det C) = {}^{n}: {}", d.nu, check(d.det_modulus_ok))?;
        writeln!(
            out,
            "phase det C / {}^(n/2) = {}{}",
            d.nu,
            complex(d.det_phase_numeric),
            if d.det_phase_is_sign {
                " (real sign)"
            } else {
                " (not +-1)"
            }
        )?;
    }
    Ok(d.det_modulus_ok)
}

#[derive(Serialize)]
struct FixedRow {
    #[serde(rename = "B")]
    b: Sl2Matrix,
    fixed: bool,
    order_bound: Option<u64>,
}

#[derive(Serialize)]
struct RepOutput {
    params: CycParams,
    alpha: u32,
    rho_exp: u32,
    #[serde(rename = "L")]
    l: CycMatrix,
    #[serde(rename = "M")]
    m: CycMatrix,
    relation_ok: bool,
    /// `None` outside the rho_(1,1) class.
    witnessed_units: Option<usize>,
    fixedness: Vec<FixedRow>,
}

fn rep(rp: RepParams, json: bool, out: &mut dyn Write) -> Outcome {
    let n = rp.n();
    let gens = build_generators(&rp);
    let q2 = CycNum::from_power(rp.params(), 2);
    let relation_ok = gens.l.try_mul(&gens.m).map_err(defect)?
        == gens
            .m
            .try_mul(&gens.l)
            .and_then(|x| x.scalar_mul(&q2))
            .map_err(defect)?;
    let witness = if rp.is_trivial_class() {
        Some(matrix_unit_witness(&rp).map_err(defect)?.len())
    } else {
        None
    };
    let fixedness: Vec<FixedRow> = [Sl2Matrix::S, Sl2Matrix::T]
        .into_iter()
        .map(|b| FixedRow {
            b,
            fixed: is_fixed_by(&rp, &b),
            order_bound: fixed_order_bound(&b).ok(),
        })
        .collect();
    let ok = relation_ok && witness.is_none_or(|w| w == n.as_usize() * n.as_usize());
    let r = RepOutput {
        params: *rp.params(),
        alpha: rp.alpha(),
        rho_exp: rp.rho_exp(),
        l: gens.l,
        m: gens.m,
        relation_ok,
        witnessed_units: witness,
        fixedness,
    };
    if json {
        json_line(out, &r)?;
    } else {
        writeln!(out, "n = {n}, a = q^{}, b = 1, b^(1/n) = q^{}", r.alpha, r.rho_exp)?;
        writeln!(out, "L =")?;
        write!(out, "{}", r.l)?;
        writeln!(out, "M =")?;
        write!(out, "{}", r.m)?;
        writeln!(out, "L M = q^2 M L: {}", check(r.relation_ok))?;
        match r.witnessed_units {
            Some(w) => writeln!(out, "matrix units witnessed: {w} of {}", n.as_usize() * n.as_usize())?,
            None => writeln!(out, "matrix units witnessed: n/a (requires alpha = 0, rho-exp = 0)")?,
        }
        writeln!(out, "fixedness:")?;
        for row in &r.fixedness {
            let bound = row
                .order_bound
                .map_or("n/a (1 is an eigenvalue)".to_string(), |v| v.to_string());
            writeln!(
                out,
                "  B = {:<12} fixed: {:<5} |det(B - I)| = {bound}",
                row.b.to_string(),
                row.fixed
            )?;
        }
    }
    Ok(ok)
}

#[derive(Serialize)]
struct CocycleOutput<'a> {
    #[serde(rename = "B1")]
    b1: Sl2Matrix,
    #[serde(rename = "B2")]
    b2: Sl2Matrix,
    params: CycParams,
    #[serde(flatten)]
    cocycle: &'a qtorus_core::Cocycle,
    lambda_numeric: Complex64,
}

fn cocycle(params: &CycParams, b1: &Sl2Matrix, b2: &Sl2Matrix, json: bool, out: &mut dyn Write) -> Outcome {
    let c = cocycle_scalar(b1, b2, params).map_err(defect)?;
    if json {
        json_line(
            out,
            &CocycleOutput {
                b1: *b1,
                b2: *b2,
                params: *params,
                cocycle: &c,
                lambda_numeric: c.lambda.embed(),
            },
        )?;
    } else {
        writeln!(out, "C({b1}) C({b2}) = lambda C({})", b1.mul(b2))?;
        writeln!(out, "lambda = {}", c.lambda)?;
        writeln!(out, "       ~ {}", complex(c.lambda.embed()))?;
        writeln!(out, "nu = ({}, {}, {})", c.nus[0], c.nus[1], c.nus[2])?;
        writeln!(
            out,
            "lambda conj(lambda) nu(B1 B2) = nu(B1) nu(B2): {}",
            check(c.norm_ok)
        )?;
    }
    Ok(c.norm_ok)
}

#[derive(Serialize)]
struct ScanRow {
    index: usize,
    #[serde(rename = "B")]
    b: Sl2Matrix,
    direct: bool,
    #[serde(rename = "K_B")]
    k_b: Option<u32>,
    conjugation_ok: bool,
    nu_ok: bool,
    trace_identity_ok: Option<bool>,
    det_modulus_ok: bool,
    det_phase_is_sign: bool,
    passed: bool,
}

#[derive(Serialize)]
struct ScanOutput {
    params: CycParams,
    seed: u64,
    count: usize,
    passed: usize,
    failed: usize,
    rows: Vec<ScanRow>,
}

fn scan(params: &CycParams, count: usize, seed: u64, max_len: usize, json: bool, out: &mut dyn Write) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let matrices: Vec<Sl2Matrix> = (0..count).map(|_| random_sl2(&mut rng, max_len)).collect();
    let rows: Vec<ScanRow> = matrices
        .par_iter()
        .enumerate()
        .map(|(index, b)| {
            analyze(b, params).map(|r| ScanRow {
                index,
                b: *b,
                direct: r.path.is_direct(),
                k_b: r.k_b,
                conjugation_ok: r.conjugation_ok,
                nu_ok: r.nu_ok,
                trace_identity_ok: r.trace_identity_ok,
                det_modulus_ok: r.det_modulus_ok,
                det_phase_is_sign: r.det_phase_is_sign,
                passed: r.all_checks_pass(),
            })
        })
        .collect::<Result<_, _>>()
        .map_err(defect)?;
    let passed = rows.iter().filter(|r| r.passed).count();
    let s = ScanOutput {
        params: *params,
        seed,
        count,
        passed,
        failed: count - passed,
        rows,
    };
    if json {
        json_line(out, &s)?;
    } else {
        writeln!(out, "n = {}, seed = {seed}, {count} matrices", params.n())?;
        writeln!(
            out,
            "{:>5}  {:<24} {:<8} {:>4}  {:<6} {:<6} {:<6} {:<6} det+-",
            "#", "B", "path", "K_B", "conj", "CC*", "trace", "|det|"
        )?;
        for r in &s.rows {
            writeln!(
                out,
                "{:>5}  {:<24} {:<8} {:>4}  {:<6} {:<6} {:<6} {:<6} {}",
                r.index,
                r.b.to_string(),
                if r.direct { "direct" } else { "composed" },
                r.k_b.map_or("-".to_string(), |k| k.to_string()),
                check(r.conjugation_ok),
                check(r.nu_ok),
                optional_check(r.trace_identity_ok),
                check(r.det_modulus_ok),
                if r.det_phase_is_sign { "yes" } else { "no" },
            )?;
        }
        writeln!(out, "passed {} / {count}", s.passed)?;
    }
    Ok(s.failed == 0)
}

fn run_selftest(seed: u64, json: bool, out: &mut dyn Write) -> Outcome {
    let primes: Vec<OddPrime> = [3, 5, 7].iter().map(|&n| OddPrime::new(n).expect("prime")).collect();
    let results = selftest::run(&primes, seed);
    let ok = results.iter().all(|r| r.passed);
    if json {
        json_line(out, &results)?;
    } else {
        for r in &results {
            writeln!(
                out,
                "[{}] n={} {} ({} cases)",
                if r.passed { "PASS" } else { "FAIL" },
                r.n,
                r.name,
                r.cases
            )?;
        }
        writeln!(out, "{}", if ok { "all checks passed" } else { "some checks FAILED" })?;
    }
    Ok(ok)
}
