//! Orbit iteration, sign stability, realizable signs, characteristic
//! polynomials, spectral radii and stretch factors.

mod cone;
mod enumerate;
mod orbit;
mod poly;
mod spectral;
mod stretch;

use serde::Serialize;

pub use cone::{cone_feasible, cone_witness, Backend, Constraint, Relation, SignCone, FM_MAX_DIM, FM_MAX_ROWS};
pub use enumerate::{
    enumerate_realizable_signs, enumerate_realizable_signs_above, is_realizable, EnumerateOptions,
    Realized,
};
pub use orbit::{detect_stable_sign, detect_weak_stable_sign, iterate_orbit, OrbitReport, OrbitStep};
pub use poly::{all_roots_on_unit_circle_or_zero, char_poly, cyclotomic, IntPoly};
pub use spectral::{power_estimate, recognize_root, spectral_radius, SpectralEstimate, SQUARINGS};
pub use stretch::{stretch_factor, verify_eigenpair, CompletionRow, StretchReport};

use crate::arith::{ArithError, Sign, TropScalar};
use crate::seed::{Seed, SeedError};
use crate::trop::{SignSeq, TropError, TropPoint};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StabilityError {
    #[error("the path is not a mutation loop")]
    NotLoop,
    #[error("sign sequence has length {found}, the path has {expected} flips")]
    Length { expected: usize, found: usize },
    #[error("no realizable strict completion of {0}")]
    NoRealizableCompletion(SignSeq),
    #[error("more than {limit} live branches at flip {position}")]
    BranchLimit { limit: usize, position: usize },
    #[error("{0}")]
    BadArgument(String),
    #[error(transparent)]
    Trop(#[from] TropError),
    #[error(transparent)]
    Seed(#[from] SeedError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// `a ≥ b` in the zeroing order.
pub fn sign_geq(a: &SignSeq, b: &SignSeq) -> Result<bool, StabilityError> {
    if a.len() != b.len() {
        return Err(StabilityError::Length {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(a.geq(b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeMembership {
    PlusInterior,
    MinusInterior,
    Outside,
}

/// Whether all coordinates are strictly positive, all strictly negative,
/// or neither.
pub fn canonical_cone_membership<S: TropScalar>(
    seed: &Seed,
    w: &TropPoint<S>,
) -> Result<ConeMembership, StabilityError> {
    if w.dim() != seed.rank() {
        return Err(TropError::Dimension {
            expected: seed.rank(),
            found: w.dim(),
        }
        .into());
    }
    let signs = w.signs();
    Ok(if signs.iter().all(|s| *s == Sign::Plus) {
        ConeMembership::PlusInterior
    } else if signs.iter().all(|s| *s == Sign::Minus) {
        ConeMembership::MinusInterior
    } else {
        ConeMembership::Outside
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rational;

    #[test]
    fn membership() {
        let s3 = Seed::from_i64(&[vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 0]], vec![0, 1, 2]).unwrap();
        let s2 = Seed::from_i64(&[vec![0, 1], vec![-1, 0]], vec![0, 1]).unwrap();
        let p = |v: &[i64]| TropPoint::<Rational>::from_i64(v);
        assert_eq!(canonical_cone_membership(&s3, &p(&[1, 2, 3])).unwrap(), ConeMembership::PlusInterior);
        assert_eq!(canonical_cone_membership(&s2, &p(&[-1, -1])).unwrap(), ConeMembership::MinusInterior);
        assert_eq!(canonical_cone_membership(&s2, &p(&[1, 0])).unwrap(), ConeMembership::Outside);
        assert!(canonical_cone_membership(&s2, &p(&[1])).is_err());
    }

    #[test]
    fn order() {
        let s = |t: &str| t.parse::<SignSeq>().unwrap();
        assert!(sign_geq(&s("+-+"), &s("+0+")).unwrap());
        assert!(!sign_geq(&s("+-"), &s("-0")).unwrap());
        assert!(sign_geq(&s("+-"), &s("+-")).unwrap());
        assert!(sign_geq(&s("+-"), &s("+")).is_err());
    }
}
