//! Integer 2x2 matrices of determinant one and words in the generators
//! `S = (0,-1;1,0)` and `T = (1,1;0,1)`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[i64; 4]", into = "[i64; 4]")]
pub struct Sl2Matrix {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl Sl2Matrix {
    pub const IDENTITY: Sl2Matrix = Sl2Matrix { a: 1, b: 0, c: 0, d: 1 };
    pub const S: Sl2Matrix = Sl2Matrix {
        a: 0,
        b: -1,
        c: 1,
        d: 0,
    };
    pub const T: Sl2Matrix = Sl2Matrix { a: 1, b: 1, c: 0, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        if det != 1 {
            return Err(Error::NotSl2 {
                a,
                b,
                c,
                d,
                det: det.clamp(i64::MIN as i128, i64::MAX as i128) as i64,
            });
        }
        Ok(Sl2Matrix { a, b, c, d })
    }

    #[inline]
    pub fn a(&self) -> i64 {
        self.a
    }
    #[inline]
    pub fn b(&self) -> i64 {
        self.b
    }
    #[inline]
    pub fn c(&self) -> i64 {
        self.c
    }
    #[inline]
    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }

    /// Panics on `i64` overflow; the matrices handled here are small.
    pub fn mul(&self, o: &Sl2Matrix) -> Sl2Matrix {
        let m = |x: i64, y: i64, z: i64, w: i64| {
            x.checked_mul(y)
                .and_then(|p| z.checked_mul(w).and_then(|q| p.checked_add(q)))
                .expect("SL2 entry overflow")
        };
        Sl2Matrix {
            a: m(self.a, o.a, self.b, o.c),
            b: m(self.a, o.b, self.b, o.d),
            c: m(self.c, o.a, self.d, o.c),
            d: m(self.c, o.b, self.d, o.d),
        }
    }

    pub fn inverse(&self) -> Sl2Matrix {
        Sl2Matrix {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// `(r, s) -> (a r + b s, c r + d s)`.
    #[inline]
    pub fn apply(&self, r: i64, s: i64) -> (i64, i64) {
        (self.a * r + self.b * s, self.c * r + self.d * s)
    }

    pub fn from_word(word: &[Generator]) -> Sl2Matrix {
        word.iter().fold(Sl2Matrix::IDENTITY, |acc, g| acc.mul(&g.matrix()))
    }
}

impl TryFrom<[i64; 4]> for Sl2Matrix {
    type Error = Error;
    fn try_from(e: [i64; 4]) -> Result<Self> {
        Sl2Matrix::new(e[0], e[1], e[2], e[3])
    }
}

impl From<Sl2Matrix> for [i64; 4] {
    fn from(m: Sl2Matrix) -> Self {
        m.entries()
    }
}

impl fmt::Display for Sl2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};{},{})", self.a, self.b, self.c, self.d)
    }
}

/// Parses `a,b,c,d`.
impl FromStr for Sl2Matrix {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parse_err = || Error::Parse {
            what: "matrix a,b,c,d",
            input: s.to_string(),
        };
        let parts: Vec<i64> = s
            .split(',')
            .map(|p| p.trim().parse::<i64>().map_err(|_| parse_err()))
            .collect::<Result<_>>()?;
        match parts.as_slice() {
            &[a, b, c, d] => Sl2Matrix::new(a, b, c, d),
            _ => Err(parse_err()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    S,
    T,
}

impl Generator {
    pub fn matrix(self) -> Sl2Matrix {
        match self {
            Generator::S => Sl2Matrix::S,
            Generator::T => Sl2Matrix::T,
        }
    }
}

/// A word of uniformly chosen letters with length uniform in `1..=max_len`.
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> Vec<Generator> {
    let len = rng.gen_range(1..=max_len.max(1));
    (0..len)
        .map(|_| if rng.gen_bool(0.5) { Generator::S } else { Generator::T })
        .collect()
}

/// Random element of `SL2(Z)` as a product of at most `max_len` generators.
pub fn random_sl2<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> Sl2Matrix {
    Sl2Matrix::from_word(&random_word(rng, max_len))
}
