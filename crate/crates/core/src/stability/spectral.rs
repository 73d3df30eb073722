//! Spectral radius estimates for integer matrices.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::poly::{all_roots_on_unit_circle_or_zero, char_poly, IntPoly};
use crate::arith::{Rational, Scalar};
use crate::matrix::IntMatrix;

/// Number of squarings; the estimate is `‖M^(2^m)‖^(1/2^m)`.
pub const SQUARINGS: u32 = 40;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralEstimate {
    pub value: f64,
    /// Change of the estimate over the last squaring, a practical error
    /// bound rather than a proven one.
    pub bound: f64,
    /// Exact value when it could be certified from the characteristic
    /// polynomial.
    pub exact: Option<Scalar>,
}

fn infinity_norm(a: &[f64], n: usize) -> f64 {
    (0..n)
        .map(|i| a[i * n..(i + 1) * n].iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn square(a: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += x * a[k * n + j];
            }
        }
    }
    out
}

/// Normalized repeated squaring. Returns `(estimate, last change)`.
pub fn power_estimate(m: &IntMatrix, squarings: u32) -> (f64, f64) {
    assert!(m.is_square());
    let n = m.rows();
    if n == 0 {
        return (0.0, 0.0);
    }
    // Scale before converting so huge entries do not overflow.
    let big = m.max_abs();
    let shift = big.bits().saturating_sub(500);
    let scaled: Vec<f64> = (0..n * n)
        .map(|idx| {
            let v: BigInt = &m[(idx / n, idx % n)] >> shift;
            v.to_f64().unwrap_or(0.0)
        })
        .collect();
    let c0 = infinity_norm(&scaled, n);
    if c0 == 0.0 {
        return (0.0, 0.0);
    }
    let mut a: Vec<f64> = scaled.iter().map(|v| v / c0).collect();
    // log of the running estimate of ρ
    let mut r = c0.ln() + shift as f64 * std::f64::consts::LN_2;
    let mut prev = r;
    let mut weight = 1.0;
    for _ in 0..squarings {
        a = square(&a, n);
        let c = infinity_norm(&a, n);
        if c == 0.0 {
            return (0.0, 0.0);
        }
        for v in &mut a {
            *v /= c;
        }
        weight *= 0.5;
        prev = r;
        r += c.ln() * weight;
    }
    (r.exp(), (r.exp() - prev.exp()).abs())
}

fn square_free_split(n: &BigInt) -> (BigInt, BigInt) {
    // n = s² d with d square-free; n > 0 and small in practice.
    let mut d = n.clone();
    let mut s = BigInt::from(1);
    let mut p = BigInt::from(2);
    while &p * &p <= d {
        let p2 = &p * &p;
        while (&d % &p2).is_zero() {
            d /= &p2;
            s *= &p;
        }
        p += 1;
    }
    (s, d)
}

/// Tries to identify `approx` as a root of a rational-linear or
/// quadratic-unit factor of `p`; every match is confirmed by exact division.
pub fn recognize_root(p: &IntPoly, approx: f64) -> Option<Scalar> {
    let tol = 1e-7 * approx.abs().max(1.0);
    let r = approx.round();
    if (r - approx).abs() < tol && p.eval(&BigInt::from(r as i64)).is_zero() {
        return Some(Scalar::int(r as i64));
    }
    if approx == 0.0 {
        return None;
    }
    for n in [1i64, -1] {
        let t = (approx + n as f64 / approx).round() as i64;
        let q = IntPoly::from_i64(&[n, -t, 1]);
        if !p.divisible_by(&q) {
            continue;
        }
        let disc = BigInt::from(t) * t - 4 * n;
        if disc.is_negative() {
            continue;
        }
        let (s, d) = square_free_split(&disc);
        let half = |v: BigInt| Rational::new(v, BigInt::from(2));
        let root = if d == BigInt::from(1) {
            Scalar::Rational(half(BigInt::from(t) + s))
        } else if d.is_zero() {
            Scalar::Rational(half(BigInt::from(t)))
        } else {
            let d64 = d.to_u64()?;
            Scalar::quad(half(BigInt::from(t)), half(s), d64).ok()?
        };
        let rf = crate::arith::TropScalar::to_f64(&root);
        if (rf - approx).abs() < tol {
            return Some(root);
        }
    }
    None
}

/// `ρ(M)` as a float with a convergence bound, plus an exact value when
/// the characteristic polynomial certifies one.
pub fn spectral_radius(m: &IntMatrix) -> SpectralEstimate {
    let (value, bound) = power_estimate(m, SQUARINGS);
    let p = char_poly(m);
    let exact = if all_roots_on_unit_circle_or_zero(&p) {
        // Every root is 0 or a root of unity.
        let nilpotent = p.strip_x().1.degree() == Some(0);
        Some(Scalar::int(if nilpotent { 0 } else { 1 }))
    } else {
        recognize_root(&p, value)
    };
    let value = match &exact {
        Some(s) => crate::arith::TropScalar::to_f64(s),
        None => value,
    };
    SpectralEstimate {
        value,
        bound,
        exact,
    }
}
