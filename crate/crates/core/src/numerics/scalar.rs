use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational over arbitrary-precision integers, always in lowest terms
/// with a positive denominator.
pub type Rational = BigRational;

/// Shorthand for `p/q` as a [`Rational`].
pub fn rational(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// A commutative field. Implemented by [`Rational`], `f64` and
/// [`RationalFunction`](super::RationalFunction).
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn is_zero(&self) -> bool;

    fn recip(&self) -> Self {
        Self::one() / self.clone()
    }

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }
}

/// A numeric backend usable for linear algebra on graphs.
///
/// Mixing backends is a compile-time error: a `Matrix<Rational>` can only be
/// combined with other rationals.
pub trait Scalar: Field + Send + Sync + 'static {
    /// `true` for backends whose arithmetic is exact.
    const EXACT: bool;

    fn to_f64(&self) -> f64;

    /// Size used for pivot selection.
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn recip(&self) -> Self {
        BigRational::recip(self)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // numerator/denominator beyond f64 range individually
            let shift = self.numer().bits().max(self.denom().bits()) as i64 - 60;
            if shift <= 0 {
                return f64::NAN;
            }
            let n = (self.numer() >> shift as usize).to_f64().unwrap_or(f64::NAN);
            let d = (self.denom() >> shift as usize).to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }

    fn magnitude(&self) -> f64 {
        if Zero::is_zero(self) {
            0.0
        } else {
            1.0
        }
    }
}

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_rational(r: &Rational) -> Self {
        Scalar::to_f64(r)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn to_f64(&self) -> f64 {
        *self
    }
}

/// Which scalar backend a computation should run on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Exact,
    Float,
}

impl Backend {
    /// Largest vertex count for which the exact backend is the default.
    pub const EXACT_VERTEX_LIMIT: usize = 64;

    pub fn auto(vertices: usize) -> Backend {
        if vertices <= Self::EXACT_VERTEX_LIMIT {
            Backend::Exact
        } else {
            Backend::Float
        }
    }
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            other => Err(Error::Parse(format!("unknown backend {other:?}"))),
        }
    }
}

/// Parses an integer, a decimal string (`"0.25"`, `"-1.5e-3"` is rejected) or a
/// `"p/q"` fraction into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !int_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{int_digits}{frac}");
        let mut numer: BigInt = digits.parse().map_err(|_| bad())?;
        if negative {
            numer = -numer;
        }
        let denom = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(numer, denom));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Renders a rational as `"p/q"`, or `"p"` when the denominator is one.
pub fn rational_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serde helper writing a rational as its `"p/q"` string.
pub fn serialize_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_to_string(r))
}

pub(crate) fn is_positive(r: &Rational) -> bool {
    r.is_positive()
}
