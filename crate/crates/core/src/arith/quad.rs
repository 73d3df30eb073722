use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{ArithError, Rational, Sign, TropScalar};

/// `a + b·√d` with rational `a`, `b` and a square-free radicand `d ≥ 2`.
///
/// Arithmetic between two values is only defined when the radicands agree;
/// the `checked_*` methods report a mismatch instead of panicking.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: Rational,
    b: Rational,
    d: u64,
}

pub(crate) fn is_square_free(d: u64) -> bool {
    if d < 2 {
        return false;
    }
    let mut n = d;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational, d: u64) -> Result<Self, ArithError> {
        if !is_square_free(d) {
            return Err(ArithError::InvalidRadicand(d));
        }
        Ok(QuadExt { a, b, d })
    }

    /// `√d` itself.
    pub fn sqrt(d: u64) -> Result<Self, ArithError> {
        Self::new(Rational::zero(), Rational::from_integer(1.into()), d)
    }

    pub fn from_rational(a: Rational, d: u64) -> Result<Self, ArithError> {
        Self::new(a, Rational::zero(), d)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn irrational_part(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }

    fn same_field(&self, other: &Self) -> Result<(), ArithError> {
        if self.d == other.d {
            Ok(())
        } else {
            Err(ArithError::RadicandMismatch(self.d, other.d))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact sign. When `a` and `b` have opposite signs the answer is
    /// decided by comparing `a²` with `d·b²`.
    pub fn sign(&self) -> Sign {
        let sa = self.a.sign();
        let sb = self.b.sign();
        match (sa, sb) {
            (Sign::Zero, s) | (s, Sign::Zero) => s,
            (x, y) if x == y => x,
            _ => {
                let a2 = &self.a * &self.a;
                let db2 = &self.b * &self.b * Rational::from_integer(BigInt::from(self.d));
                // |a| vs |b|√d decides which term dominates.
                match a2.cmp(&db2) {
                    std::cmp::Ordering::Greater => sa,
                    std::cmp::Ordering::Less => sb,
                    std::cmp::Ordering::Equal => Sign::Zero,
                }
            }
        }
    }

    pub fn conjugate(&self) -> Self {
        QuadExt {
            a: self.a.clone(),
            b: -self.b.clone(),
            d: self.d,
        }
    }

    /// `a² − d·b²`, nonzero unless the value is zero.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(BigInt::from(self.d))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ArithError> {
        self.same_field(other)?;
        Ok(QuadExt {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            d: self.d,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ArithError> {
        self.same_field(other)?;
        Ok(QuadExt {
            a: &self.a - &other.a,
            b: &self.b - &other.b,
            d: self.d,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ArithError> {
        self.same_field(other)?;
        let d = Rational::from_integer(BigInt::from(self.d));
        Ok(QuadExt {
            a: &self.a * &other.a + &self.b * &other.b * d,
            b: &self.a * &other.b + &self.b * &other.a,
            d: self.d,
        })
    }

    pub fn checked_inv(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let n = self.norm();
        Ok(QuadExt {
            a: &self.a / &n,
            b: -(&self.b / &n),
            d: self.d,
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ArithError> {
        self.same_field(other)?;
        self.checked_mul(&other.checked_inv()?)
    }

    pub fn neg(&self) -> Self {
        QuadExt {
            a: -self.a.clone(),
            b: -self.b.clone(),
            d: self.d,
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        QuadExt {
            a: &self.a * r,
            b: &self.b * r,
            d: self.d,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * (self.d as f64).sqrt()
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.a.is_zero() {
            write!(f, "{}*sqrt({})", self.b, self.d)
        } else if self.b.is_negative() {
            write!(f, "{}-{}*sqrt({})", self.a, self.b.abs(), self.d)
        } else {
            write!(f, "{}+{}*sqrt({})", self.a, self.b, self.d)
        }
    }
}
