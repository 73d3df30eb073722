//! Stretch factors from presentation matrices, and exact eigenpair checks.

use rayon::prelude::*;
use serde::Serialize;

use super::enumerate::{enumerate_realizable_signs_above, EnumerateOptions};
use super::poly::{char_poly, IntPoly};
use super::spectral::{spectral_radius, SpectralEstimate};
use super::StabilityError;
use crate::arith::{Rational, Scalar};
use crate::matrix::IntMatrix;
use crate::seed::{is_loop, MutationPath};
use crate::trop::{presentation_matrix_for_sign, SignSeq};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompletionRow {
    pub sign: SignSeq,
    pub matrix: IntMatrix,
    pub char_poly: IntPoly,
    pub radius: SpectralEstimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StretchReport {
    pub stable_sign: SignSeq,
    /// Largest spectral radius over the realizable completions.
    pub lambda: f64,
    pub lambda_exact: Option<Scalar>,
    pub completions: Vec<CompletionRow>,
    /// Strict completions that no point attains.
    pub unrealizable: Vec<SignSeq>,
    /// Whether every realizable completion has the same radius (within
    /// `1e-9`, or exactly when all radii are certified).
    pub radii_coincide: bool,
}

/// `max ρ(E_γ^ε)` over realizable strict `ε ≥ ε_stab`.
pub fn stretch_factor(
    path: &MutationPath,
    eps_stab: &SignSeq,
    opts: &EnumerateOptions,
) -> Result<StretchReport, StabilityError> {
    if !is_loop(path) {
        return Err(StabilityError::NotLoop);
    }
    let h = path.horizontal_len();
    if eps_stab.len() != h {
        return Err(StabilityError::Length {
            expected: h,
            found: eps_stab.len(),
        });
    }
    let realizable: Vec<SignSeq> = enumerate_realizable_signs_above(path, eps_stab, opts)?
        .into_iter()
        .map(|r| r.sign)
        .collect();
    if realizable.is_empty() {
        return Err(StabilityError::NoRealizableCompletion(eps_stab.clone()));
    }
    let unrealizable = eps_stab
        .completions()
        .into_iter()
        .filter(|c| !realizable.contains(c))
        .collect();
    let completions = realizable
        .into_par_iter()
        .map(|sign| {
            let matrix = presentation_matrix_for_sign(path, &sign)?;
            let radius = spectral_radius(&matrix);
            Ok(CompletionRow {
                char_poly: char_poly(&matrix),
                sign,
                matrix,
                radius,
            })
        })
        .collect::<Result<Vec<_>, StabilityError>>()?;
    let best = completions
        .iter()
        .max_by(|a, b| a.radius.value.total_cmp(&b.radius.value))
        .expect("nonempty");
    let lambda = best.radius.value;
    let lambda_exact = best.radius.exact.clone();
    let radii_coincide = completions.iter().all(|c| match (&c.radius.exact, &lambda_exact) {
        (Some(a), Some(b)) => a == b,
        _ => (c.radius.value - lambda).abs() <= 1e-9 * lambda.max(1.0),
    });
    Ok(StretchReport {
        stable_sign: eps_stab.clone(),
        lambda,
        lambda_exact,
        completions,
        unrealizable,
        radii_coincide,
    })
}

/// Exact test of `M x = λ x`.
pub fn verify_eigenpair(m: &IntMatrix, lambda: &Scalar, x: &[Scalar]) -> Result<bool, StabilityError> {
    if m.cols() != x.len() || m.rows() != x.len() {
        return Err(StabilityError::BadArgument(format!(
            "{}x{} matrix and a vector of length {}",
            m.rows(),
            m.cols(),
            x.len()
        )));
    }
    for i in 0..m.rows() {
        let mut lhs = Scalar::from(0);
        for (a, xj) in m.row(i).iter().zip(x) {
            let term = Scalar::Rational(Rational::from_integer(a.clone())).try_mul(xj)?;
            lhs = lhs.try_add(&term)?;
        }
        let rhs = lambda.try_mul(&x[i])?;
        if lhs.try_sub(&rhs)? != Scalar::from(0) {
            return Ok(false);
        }
    }
    Ok(true)
}
