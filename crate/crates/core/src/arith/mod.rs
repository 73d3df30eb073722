//! Exact scalars: arbitrary-precision rationals and real quadratic
//! extensions Q(√d), together with the three-valued sign that every
//! tropical computation in this crate is built on.
//!
//! The rest of the crate is generic over [`TropScalar`]; the exact
//! instances are [`Rational`] and [`Scalar`]. `f64` also implements the
//! trait so that quick exploratory runs can reuse the same code, but no
//! check in this crate relies on a floating-point sign.

mod quad;
mod scalar;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use quad::QuadExt;
pub use scalar::Scalar;

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("radicand mismatch: sqrt({0}) and sqrt({1}) cannot be mixed")]
    RadicandMismatch(u64, u64),
    #[error("radicand {0} is not a square-free integer >= 2")]
    InvalidRadicand(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar {0:?}: {1}")]
    Parse(String, String),
}

/// Sign of a real number, with `sgn(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Minus,
    Zero,
    Plus,
}

impl Sign {
    pub fn of_ordering(o: Ordering) -> Sign {
        match o {
            Ordering::Less => Sign::Minus,
            Ordering::Equal => Sign::Zero,
            Ordering::Greater => Sign::Plus,
        }
    }

    pub fn is_strict(self) -> bool {
        self != Sign::Zero
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Minus => -1,
            Sign::Zero => 0,
            Sign::Plus => 1,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Zero => '0',
            Sign::Plus => '+',
        }
    }

    /// Accepts `+`, `-`, `0` and the unicode minus `−`.
    pub fn from_char(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Plus),
            '-' | '−' => Some(Sign::Minus),
            '0' => Some(Sign::Zero),
            _ => None,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::of_ordering((self.as_i8() * rhs.as_i8()).cmp(&0))
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Zero => Sign::Zero,
            Sign::Plus => Sign::Minus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// Ordered field elements with an exact sign, the scalar type the tropical
/// machinery is generic over.
pub trait TropScalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn sign(&self) -> Sign;

    fn from_integer(n: &BigInt) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_integer(&BigInt::from(n))
    }

    fn abs_value(&self) -> Self {
        if self.sign() == Sign::Minus {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// `[s]_+ = max(s, 0)`.
    fn pos_part(&self) -> Self {
        if self.sign() == Sign::Plus {
            self.clone()
        } else {
            Self::zero()
        }
    }

    fn cmp_value(&self, other: &Self) -> Ordering {
        match (self.clone() - other.clone()).sign() {
            Sign::Minus => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }

    /// Multiply by an integer matrix entry.
    fn scale_int(&self, n: &BigInt) -> Self {
        if n.is_zero() {
            Self::zero()
        } else if n.is_one() {
            self.clone()
        } else {
            Self::from_integer(n) * self.clone()
        }
    }

    fn to_f64(&self) -> f64;
}

impl TropScalar for BigRational {
    fn sign(&self) -> Sign {
        Sign::of_ordering(self.numer().sign_cmp())
    }

    fn from_integer(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl TropScalar for f64 {
    fn sign(&self) -> Sign {
        if *self > 0.0 {
            Sign::Plus
        } else if *self < 0.0 {
            Sign::Minus
        } else {
            Sign::Zero
        }
    }

    fn from_integer(n: &BigInt) -> Self {
        n.to_f64().unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

/// Exact sign of a scalar.
pub fn scalar_sign<S: TropScalar>(s: &S) -> Sign {
    s.sign()
}

/// `max(s, 0)`.
pub fn pos_part<S: TropScalar>(s: &S) -> S {
    s.pos_part()
}

/// `[n]_+` for integers.
pub(crate) fn int_pos(n: &BigInt) -> BigInt {
    if n.is_positive() {
        n.clone()
    } else {
        BigInt::zero()
    }
}

pub(crate) fn parse_rational(text: &str) -> Result<Rational, ArithError> {
    let t = text.trim();
    let bad = |why: &str| ArithError::Parse(text.to_string(), why.to_string());
    if t.is_empty() {
        return Err(bad("empty"));
    }
    if t.contains(['.', 'e', 'E']) {
        return Err(bad("float literals are not exact"));
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad("bad numerator"))?;
    let den: BigInt = den.parse().map_err(|_| bad("bad denominator"))?;
    if den.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

/// Serde adapter writing a rational point as exact scalar strings.
pub(crate) fn serialize_rational_point<S: serde::Serializer>(
    p: &crate::trop::TropPoint<Rational>,
    s: S,
) -> Result<S::Ok, S::Error> {
    p.coords()
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .serialize(s)
}
