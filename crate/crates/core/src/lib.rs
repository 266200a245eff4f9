//! Exact computation of the projective `SL2(Z)` representation carried by the
//! quantum torus at an odd prime root of unity.
//!
//! The pipeline: build the conjugating matrix `C(B)` for `B` in `SL2(Z)`
//! ([`conjugator::conj_any`]), check that it implements the action of `B` on
//! the `n`-dimensional representation ([`conjugator::verify_conjugation`]), and
//! compute its trace, determinant and normalization ([`conjugator::analyze`]).
//! All decisions are made in exact arithmetic over `Z[zeta_n]`.

pub mod conjugator;
pub mod cyclotomic;
pub mod cycmat;
pub mod error;
pub mod numtheory;
pub mod rep;
pub mod selftest;
pub mod sl2;
pub mod torus;

pub use conjugator::{
    analyze, cc_star_scalar, cocycle_scalar, conj_any, conj_direct, k_b, verify_conjugation, Cocycle, ConjMatrix,
    ConjPath, ConjugationCheck, ConjugationReport, Conjugator, KClass, Orientation,
};
pub use cyclotomic::{CycNum, CycParams};
pub use cycmat::{CycMatrix, MatrixUnit, MonomialMatrix, PowMatrix};
pub use error::{Error, Result};
pub use numtheory::{LegendreValue, OddPrime};
pub use rep::{RepMatrixPair, RepParams};
pub use sl2::{Generator, Sl2Matrix};
pub use torus::{BasisIndex, TorusElement};
