use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("n must be an odd prime (got {0})")]
    NotOddPrime(i64),

    #[error("q exponent {q_exp} is not coprime to n = {n}")]
    NonPrimitiveRoot { n: u32, q_exp: i64 },

    #[error("cyclotomic order mismatch: {left} vs {right}")]
    ParamMismatch { left: u32, right: u32 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{a} is not invertible modulo {n}")]
    NotInvertible { a: i64, n: u32 },

    #[error("division by zero in Z[zeta]")]
    DivisionByZero,

    #[error("quotient is not a cyclotomic integer")]
    InexactDivision,

    #[error("matrix [[{a}, {b}], [{c}, {d}]] has determinant {det}, expected 1")]
    NotSl2 { a: i64, b: i64, c: i64, d: i64, det: i64 },

    #[error("matrices are not proportional")]
    NotProportional,

    #[error("C C* is not a scalar matrix")]
    NotScalar,

    #[error("1 is an eigenvalue of B, det(B - I) = 0")]
    UnitEigenvalue,

    #[error("upper-right entry {b} is divisible by n = {n}")]
    UpperRightDivisible { b: i64, n: u32 },

    #[error("matrix-unit witness failed at E[{i},{j}]")]
    WitnessMismatch { i: usize, j: usize },

    #[error("operation requires the rho_(1,1) parameters (alpha = 0, rho_exp = 0)")]
    NotTrivialClass,

    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },
}

pub type Result<T> = std::result::Result<T, Error>;
