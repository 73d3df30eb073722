//! Integer polynomials and exact characteristic polynomials.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::arith::TropScalar;
use crate::matrix::IntMatrix;

/// Polynomial with integer coefficients in ascending degree. The zero
/// polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> IntPoly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> IntPoly {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn one() -> IntPoly {
        IntPoly::from_i64(&[1])
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> IntPoly {
        let mut c = vec![BigInt::zero(); n + 1];
        c[0] = BigInt::from(-1);
        c[n] = BigInt::one();
        IntPoly::new(c)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::new(Vec::new());
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        IntPoly::new(c)
    }

    pub fn product<'a>(polys: impl IntoIterator<Item = &'a IntPoly>) -> IntPoly {
        polys.into_iter().fold(IntPoly::one(), |acc, p| acc.mul(p))
    }

    /// Quotient and remainder by a monic divisor.
    pub fn div_rem_monic(&self, d: &IntPoly) -> (IntPoly, IntPoly) {
        assert!(d.is_monic(), "divisor must be monic");
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (IntPoly::new(Vec::new()), self.clone());
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = r[i + dd].clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i + j] -= &c * dc;
            }
            q[i] = c;
        }
        (IntPoly::new(q), IntPoly::new(r))
    }

    /// True when the monic polynomial `d` divides `self` exactly.
    pub fn divisible_by(&self, d: &IntPoly) -> bool {
        self.div_rem_monic(d).1.is_zero()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Exact evaluation in any scalar field (e.g. at a quadratic irrational).
    pub fn eval_scalar<S: TropScalar>(&self, x: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * x.clone() + S::from_integer(c))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + <f64 as TropScalar>::from_integer(c))
    }

    /// Strips factors of `x`, returning their count and the rest.
    pub fn strip_x(&self) -> (usize, IntPoly) {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (k, IntPoly::new(self.coeffs[k.min(self.coeffs.len())..].to_vec()))
    }
}

/// Cyclotomic polynomials Φ_1..Φ_n; index 0 holds the constant 1.
fn cyclotomic_table(n: usize) -> Vec<IntPoly> {
    let mut table = vec![IntPoly::one()];
    for k in 1..=n {
        let mut p = IntPoly::x_pow_minus_one(k);
        for d in 1..k {
            if k % d == 0 {
                p = p.div_rem_monic(&table[d]).0;
            }
        }
        table.push(p);
    }
    table
}

/// The n-th cyclotomic polynomial.
pub fn cyclotomic(n: usize) -> IntPoly {
    assert!(n >= 1);
    cyclotomic_table(n).pop().expect("nonempty")
}

/// True when every root of the monic polynomial is zero or a root of
/// unity, i.e. what remains after removing powers of `x` is a product of
/// cyclotomic polynomials.
pub fn all_roots_on_unit_circle_or_zero(p: &IntPoly) -> bool {
    if !p.is_monic() {
        return false;
    }
    let (_, mut rest) = p.strip_x();
    let deg = rest.degree().unwrap_or(0);
    // φ(n) ≥ √(n/2), so a factor Φ_n of degree ≤ deg has n ≤ 2 deg².
    let table = cyclotomic_table((2 * deg * deg).max(2));
    for phi in &table[1..] {
        if rest.degree() == Some(0) {
            break;
        }
        while rest.degree() >= phi.degree() {
            let (q, r) = rest.div_rem_monic(phi);
            if !r.is_zero() {
                break;
            }
            rest = q;
        }
    }
    rest.degree() == Some(0)
}

/// `det(νI − M)` by the Faddeev–LeVerrier recursion; every division is
/// exact over the integers.
pub fn char_poly(m: &IntMatrix) -> IntPoly {
    assert!(m.is_square(), "characteristic polynomial of a non-square matrix");
    let n = m.rows();
    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut mk = IntMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = m * &mk;
        for i in 0..n {
            next[(i, i)] += &c[n - k + 1];
        }
        let am = m * &next;
        let tr = (0..n).fold(BigInt::zero(), |t, i| t + &am[(i, i)]);
        let (q, r) = tr.div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero());
        c[n - k] = -q;
        mk = next;
    }
    IntPoly::new(c)
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let c: Vec<serde_json::Value> = self.coeffs.iter().map(crate::matrix::int_to_json).collect();
        c.serialize(s)
    }
}
