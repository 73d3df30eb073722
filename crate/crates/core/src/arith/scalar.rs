use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{parse_rational, ArithError, QuadExt, Rational, Sign, TropScalar};

/// An exact real number: either rational or an element of one fixed
/// quadratic field Q(√d).
///
/// Mixing a rational with a quadratic value promotes the rational. Mixing two
/// different radicands is an error; the operator impls panic in that case,
/// the `try_*` methods return it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(Rational),
    Quad(QuadExt),
}

impl Scalar {
    pub fn int(n: i64) -> Scalar {
        Scalar::Rational(Rational::from_integer(n.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Scalar {
        Scalar::Rational(Rational::new(n.into(), d.into()))
    }

    /// `a + b√d`, collapsed to a rational when `b = 0`.
    pub fn quad(a: Rational, b: Rational, d: u64) -> Result<Scalar, ArithError> {
        Ok(Scalar::from(QuadExt::new(a, b, d)?))
    }

    pub fn radicand(&self) -> Option<u64> {
        match self {
            Scalar::Rational(_) => None,
            Scalar::Quad(q) => Some(q.radicand()),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Quad(_) => None,
        }
    }

    fn lift(&self, d: u64) -> QuadExt {
        match self {
            Scalar::Rational(r) => QuadExt::from_rational(r.clone(), d)
                .expect("radicand already validated"),
            Scalar::Quad(q) => q.clone(),
        }
    }

    fn binop(
        &self,
        other: &Scalar,
        rat: impl Fn(&Rational, &Rational) -> Result<Rational, ArithError>,
        quad: impl Fn(&QuadExt, &QuadExt) -> Result<QuadExt, ArithError>,
    ) -> Result<Scalar, ArithError> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(rat(a, b)?)),
            (Scalar::Quad(a), b) => Ok(Scalar::from(quad(a, &b.lift(a.radicand()))?)),
            (a, Scalar::Quad(b)) => Ok(Scalar::from(quad(&a.lift(b.radicand()), b)?)),
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, ArithError> {
        self.binop(other, |a, b| Ok(a + b), |a, b| a.checked_add(b))
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar, ArithError> {
        self.binop(other, |a, b| Ok(a - b), |a, b| a.checked_sub(b))
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, ArithError> {
        self.binop(other, |a, b| Ok(a * b), |a, b| a.checked_mul(b))
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar, ArithError> {
        self.binop(
            other,
            |a, b| {
                if b.is_zero() {
                    Err(ArithError::DivisionByZero)
                } else {
                    Ok(a / b)
                }
            },
            |a, b| a.checked_div(b),
        )
    }

    pub fn try_inv(&self) -> Result<Scalar, ArithError> {
        Scalar::one().try_div(self)
    }
}

impl From<QuadExt> for Scalar {
    fn from(q: QuadExt) -> Scalar {
        if q.irrational_part().is_zero() {
            Scalar::Rational(q.rational_part().clone())
        } else {
            Scalar::Quad(q)
        }
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Scalar {
        Scalar::Rational(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::int(n)
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $try:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$try(&rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }

        impl<'a> $tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);
forward_op!(Div, div, try_div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Quad(q) => Scalar::Quad(q.neg()),
        }
    }
}

impl Zero for Scalar {
    fn zero() -> Scalar {
        Scalar::Rational(Rational::zero())
    }

    fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Quad(q) => q.is_zero(),
        }
    }
}

impl One for Scalar {
    fn one() -> Scalar {
        Scalar::Rational(Rational::one())
    }
}

impl TropScalar for Scalar {
    fn sign(&self) -> Sign {
        match self {
            Scalar::Rational(r) => r.sign(),
            Scalar::Quad(q) => q.sign(),
        }
    }

    fn from_integer(n: &BigInt) -> Scalar {
        Scalar::Rational(Rational::from_integer(n.clone()))
    }

    fn scale_int(&self, n: &BigInt) -> Scalar {
        let r = Rational::from_integer(n.clone());
        match self {
            Scalar::Rational(a) => Scalar::Rational(a * r),
            Scalar::Quad(q) => Scalar::from(q.scale(&r)),
        }
    }

    fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(r) => TropScalar::to_f64(r),
            Scalar::Quad(q) => q.to_f64(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Quad(q) => write!(f, "{q}"),
        }
    }
}

impl FromStr for Scalar {
    type Err = ArithError;

    /// Accepts `p`, `p/q`, `sqrt(d)`, `b*sqrt(d)` and `a±b*sqrt(d)` with
    /// rational `a`, `b`. Whitespace is ignored and `−` counts as a minus.
    fn from_str(text: &str) -> Result<Scalar, ArithError> {
        let bad = |why: &str| ArithError::Parse(text.to_string(), why.to_string());
        let t: String = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| if c == '−' { '-' } else { c })
            .collect();
        let Some(pos) = t.find("sqrt(") else {
            return parse_rational(&t).map(Scalar::Rational);
        };
        let rad = t[pos + 5..]
            .strip_suffix(')')
            .ok_or_else(|| bad("expected ')' at the end"))?;
        let d: u64 = rad.parse().map_err(|_| bad("bad radicand"))?;
        let mut prefix = &t[..pos];
        let starred = prefix.ends_with('*');
        if starred {
            prefix = &prefix[..prefix.len() - 1];
        }
        // The irrational coefficient starts after the last sign that is
        // not the leading one.
        let split = prefix
            .char_indices()
            .filter(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i)
            .next_back();
        let (a_text, b_text) = match split {
            Some(i) => (&prefix[..i], &prefix[i..]),
            None => ("", prefix),
        };
        let a = if a_text.is_empty() {
            Rational::zero()
        } else {
            parse_rational(a_text)?
        };
        let (neg, body) = match b_text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, b_text.strip_prefix('+').unwrap_or(b_text)),
        };
        let b = if body.is_empty() {
            if starred {
                return Err(bad("missing coefficient before '*'"));
            }
            Rational::one()
        } else {
            if !starred {
                return Err(bad("expected '*' before sqrt"));
            }
            parse_rational(body)?
        };
        Scalar::quad(a, if neg { -b } else { b }, d)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

struct ScalarVisitor;

impl<'de> Visitor<'de> for ScalarVisitor {
    type Value = Scalar;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or an exact scalar string such as \"1/2+1/2*sqrt(5)\"")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Scalar, E> {
        Ok(Scalar::int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Scalar, E> {
        Ok(Scalar::Rational(Rational::from_integer(v.into())))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Scalar, E> {
        Err(E::custom(format!(
            "floating-point value {v} is not exact; write it as a string"
        )))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Scalar, E> {
        v.parse().map_err(E::custom)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Scalar, D::Error> {
        d.deserialize_any(ScalarVisitor)
    }
}
