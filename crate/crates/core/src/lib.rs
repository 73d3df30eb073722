//! Exact tropical cluster X-dynamics.
//!
//! Seeds are mutated along paths in the labeled exchange graph, tropical
//! points are transported through the signed piecewise-linear mutation map,
//! and mutation loops are analysed for sign stability, realizable signs,
//! presentation matrices and stretch factors. Reduction cones and local
//! train-track formulas cover the surface-cutting side.
//!
//! Points are generic over [`arith::TropScalar`]; the aliases below fix the
//! common choices.
//!
//! ```
//! use signstab::{catalog, sign_of_path, RatPoint};
//!
//! let path = catalog::a2_path();
//! let sign = sign_of_path(&path, &RatPoint::from_i64(&[1, 1])).unwrap();
//! assert_eq!(sign.to_string(), "++-");
//! ```

pub mod arith;
pub mod catalog;
pub mod io;
pub mod matrix;
pub mod reduction;
pub mod seed;
pub mod stability;
pub mod traintrack;
pub mod trop;

pub use arith::{ArithError, QuadExt, Rational, Scalar, Sign, TropScalar};
pub use io::{IoError, PathSpec, SCHEMA_VERSION};
pub use matrix::{IntMatrix, Matrix, MatrixError};
pub use reduction::{
    block_structure_check, edge_compatibility, freeze, hereditary_check, permutation_factor_check,
    project_point, reduced_subsequence, Cone, ReductionError,
};
pub use seed::{
    b_from_triangulation, c_matrix, g_matrix, is_loop, MutationPath, PathStep, Permutation, Seed,
    SeedError, Triangulation,
};
pub use stability::{
    char_poly, detect_stable_sign, detect_weak_stable_sign, enumerate_realizable_signs,
    iterate_orbit, spectral_radius, stretch_factor, verify_eigenpair, IntPoly, StabilityError,
};
pub use traintrack::{annulus_solve, pants_measures, validate_measure, TrackError, TrainTrack};
pub use trop::{
    presentation_matrix_for_sign, sign_of_path, transport, SignSeq, TropError, TropPoint,
};

/// Tropical point with rational coordinates.
pub type RatPoint = TropPoint<Rational>;
/// Tropical point with coordinates in Q or a real quadratic field.
pub type ExactPoint = TropPoint<Scalar>;
/// Floating-point tropical point for exploratory runs.
pub type FloatPoint = TropPoint<f64>;
/// Reduction cone with exact generators.
pub type ExactCone = Cone<Scalar>;

/// Any error raised by the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Seed(#[from] SeedError),
    #[error(transparent)]
    Trop(#[from] TropError),
    #[error(transparent)]
    Stability(#[from] StabilityError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Track(#[from] TrackError),
    #[error(transparent)]
    Io(#[from] IoError),
}
