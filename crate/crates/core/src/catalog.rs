//! Built-in examples: the A₂ loop, Kronecker Dehn twists, the
//! once-punctured sphere with three boundary components and the annulus
//! cutting example.

use crate::arith::Scalar;
use crate::io::{parse_json, PathSpec};
use crate::reduction::Cone;
use crate::seed::{MutationPath, PathStep, Permutation, Seed, Triangulation};
use crate::trop::{SignSeq, TropPoint};

const A2: &str = include_str!("../data/a2.json");
const SPHERE: &str = include_str!("../data/sphere.json");
const SPHERE_TRIANGULATION: &str = include_str!("../data/sphere_triangulation.json");
const SPHERE_LPLUS: &str = include_str!("../data/sphere_lplus.json");
const SPHERE_CONE: &str = include_str!("../data/sphere_cone.json");
const ANNULUS: &str = include_str!("../data/annulus.json");
const ANNULUS_CONE: &str = include_str!("../data/annulus_cone.json");

fn path_from(text: &str, name: &str) -> MutationPath {
    parse_json::<PathSpec>(text, name)
        .and_then(|s| s.resolve(None))
        .expect("bundled example is valid")
}

/// Flips `0, 1, 0` on `B = [[0, 1], [-1, 0]]`.
pub fn a2_path() -> MutationPath {
    path_from(A2, "a2.json")
}

/// `Flip 0` followed by the transposition `(0 1)` on `[[0, -l], [l, 0]]`.
pub fn kronecker_path(l: i64) -> MutationPath {
    let s = Seed::from_i64(&[vec![0, -l], vec![l, 0]], vec![0, 1]).expect("skew-symmetric");
    MutationPath::new(
        s,
        vec![
            PathStep::Flip(0),
            PathStep::Permute(Permutation::new(vec![1, 0]).expect("transposition")),
        ],
    )
    .expect("valid path")
}

/// The 16-flip mutation loop on the 12-arc triangulation of the sphere with
/// one puncture and three boundary components. The seed is the unfrozen
/// block of [`sphere_triangulation`]; the loop rotates the boundary arcs,
/// so it only closes up on that block.
pub fn sphere_path() -> MutationPath {
    path_from(SPHERE, "sphere.json")
}

/// The triangulation behind [`sphere_path`], with six frozen boundary arcs.
pub fn sphere_triangulation() -> Triangulation {
    parse_json(SPHERE_TRIANGULATION, "sphere_triangulation.json").expect("bundled example is valid")
}

/// The attracting eigenvector of the sphere loop, with eigenvalue
/// `(3 + √5)/2`.
pub fn sphere_lplus() -> TropPoint<Scalar> {
    TropPoint::new(parse_json(SPHERE_LPLUS, "sphere_lplus.json").expect("bundled example is valid"))
}

pub fn sphere_stable_sign() -> SignSeq {
    "+++00-+--+00-+++".parse().expect("valid sign")
}

/// Cone spanned by the three boundary-parallel curves.
pub fn sphere_cone() -> Cone<Scalar> {
    parse_json(SPHERE_CONE, "sphere_cone.json").expect("bundled example is valid")
}

/// Triangulated annulus with two marked points on each boundary, as an
/// empty path.
pub fn annulus_path() -> MutationPath {
    path_from(ANNULUS, "annulus.json")
}

/// The core curve of the annulus.
pub fn annulus_cone() -> Cone<Scalar> {
    parse_json(ANNULUS_CONE, "annulus_cone.json").expect("bundled example is valid")
}

/// Looks up a bundled path by name: `a2`, `kronecker<l>`, `sphere`,
/// `annulus`.
pub fn by_name(name: &str) -> Option<MutationPath> {
    match name {
        "a2" => Some(a2_path()),
        "sphere" => Some(sphere_path()),
        "annulus" => Some(annulus_path()),
        _ => {
            let l: i64 = name.strip_prefix("kronecker")?.parse().ok()?;
            (l >= 0).then(|| kronecker_path(l))
        }
    }
}
