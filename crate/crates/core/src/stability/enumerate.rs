//! Branch-and-prune enumeration of the strict sign sequences a path
//! actually attains.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::cone::SignCone;
use super::StabilityError;
use crate::arith::{Rational, Sign, TropScalar};
use crate::matrix::IntMatrix;
use crate::seed::{MutationPath, PathStep};
use crate::trop::{edge_matrix, permutation_step_matrix, SignSeq, TropPoint};

/// A realizable sign together with a point attaining it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Realized {
    pub sign: SignSeq,
    #[serde(serialize_with = "crate::arith::serialize_rational_point")]
    pub witness: TropPoint<Rational>,
}

#[derive(Debug, Clone, Default)]
pub struct EnumerateOptions {
    /// Abort once more than this many live branches exist at one level.
    pub max_branches: Option<usize>,
}

#[derive(Clone)]
struct Node {
    prefix: Vec<Sign>,
    map: IntMatrix,
    cone: SignCone,
    witness: TropPoint<Rational>,
}

/// Clears denominators; the cones are homogeneous so this stays inside.
fn integral(w: TropPoint<Rational>) -> TropPoint<Rational> {
    let l = w
        .coords()
        .iter()
        .fold(BigInt::one(), |l, v| l.lcm(v.denom()));
    let g = w
        .coords()
        .iter()
        .fold(BigInt::zero(), |g, v| g.gcd(&(v.numer() * (&l / v.denom()))));
    if g.is_zero() {
        return w;
    }
    let f = Rational::new(l, g);
    w.scale(&f)
}

fn value(f: &[BigInt], w: &TropPoint<Rational>) -> Sign {
    f.iter()
        .zip(w.coords())
        .fold(Rational::zero(), |acc, (a, x)| acc + x.scale_int(a))
        .sign()
}

/// All strict sequences realized by some point, each with a witness.
pub fn enumerate_realizable_signs(path: &MutationPath) -> Result<Vec<Realized>, StabilityError> {
    let floor = SignSeq::new(vec![Sign::Zero; path.horizontal_len()]);
    enumerate_realizable_signs_above(path, &floor, &EnumerateOptions::default())
}

/// Realizable strict sequences `ε ≥ floor`: branching happens only where
/// `floor` is zero, elsewhere the sign is forced.
pub fn enumerate_realizable_signs_above(
    path: &MutationPath,
    floor: &SignSeq,
    opts: &EnumerateOptions,
) -> Result<Vec<Realized>, StabilityError> {
    let h = path.horizontal_len();
    if floor.len() != h {
        return Err(StabilityError::Length {
            expected: h,
            found: floor.len(),
        });
    }
    let r = path.initial().rank();
    let mut nodes = vec![Node {
        prefix: Vec::new(),
        map: IntMatrix::identity(r),
        cone: SignCone::new(r),
        witness: TropPoint::constant(r, 0),
    }];
    let mut nu = 0;
    for (i, step) in path.steps().iter().enumerate() {
        let seed = path.seed_at(i);
        match step {
            PathStep::Permute(s) => {
                let p = permutation_step_matrix(seed, s);
                for node in &mut nodes {
                    node.map = &p * &node.map;
                }
            }
            PathStep::Flip(k) => {
                let pos = seed.position(*k).expect("validated");
                let choices: Vec<Sign> = match floor[nu] {
                    Sign::Zero => vec![Sign::Plus, Sign::Minus],
                    s => vec![s],
                };
                let edges = [
                    edge_matrix(seed, *k, Sign::Plus)?,
                    edge_matrix(seed, *k, Sign::Minus)?,
                ];
                nodes = nodes
                    .into_par_iter()
                    .flat_map_iter(|node| {
                        let f = node.map.row(pos).to_vec();
                        let here = value(&f, &node.witness);
                        choices
                            .iter()
                            .filter_map(|&s| {
                                let mut cone = node.cone.clone();
                                cone.push_signed(&f, s);
                                let witness = if here == s {
                                    node.witness.clone()
                                } else {
                                    integral(cone.witness()?)
                                };
                                let e = if s == Sign::Plus { &edges[0] } else { &edges[1] };
                                let mut prefix = node.prefix.clone();
                                prefix.push(s);
                                Some(Node {
                                    prefix,
                                    map: e * &node.map,
                                    cone,
                                    witness,
                                })
                            })
                            .collect::<Vec<_>>()
                    })
                    .collect();
                if let Some(max) = opts.max_branches {
                    if nodes.len() > max {
                        return Err(StabilityError::BranchLimit {
                            limit: max,
                            position: nu,
                        });
                    }
                }
                nu += 1;
            }
        }
    }
    let mut out: Vec<Realized> = nodes
        .into_iter()
        .map(|n| Realized {
            sign: SignSeq::new(n.prefix),
            witness: n.witness,
        })
        .collect();
    out.sort_by(|a, b| a.sign.cmp(&b.sign));
    Ok(out)
}

/// Whether a single sequence is realized; zero entries become equalities.
pub fn is_realizable(path: &MutationPath, eps: &SignSeq) -> Result<bool, StabilityError> {
    Ok(SignCone::of_sign(path, eps)?.feasible())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::Seed;
    use crate::trop::sign_of_path;

    fn a2_path() -> MutationPath {
        let s = Seed::from_i64(&[vec![0, 1], vec![-1, 0]], vec![0, 1]).unwrap();
        MutationPath::flips(s, &[0, 1, 0]).unwrap()
    }

    #[test]
    fn a2_signs() {
        let got: Vec<String> = enumerate_realizable_signs(&a2_path())
            .unwrap()
            .iter()
            .map(|r| r.sign.to_string())
            .collect();
        let mut want = vec!["++-", "+--", "-++", "--+", "---"];
        want.sort_by_key(|s| s.parse::<SignSeq>().unwrap());
        assert_eq!(got, want);
    }

    #[test]
    fn witnesses_attain_their_signs() {
        for r in enumerate_realizable_signs(&a2_path()).unwrap() {
            assert_eq!(sign_of_path(&a2_path(), &r.witness).unwrap(), r.sign);
        }
    }

    #[test]
    fn single_flip_and_floor() {
        let s = Seed::from_i64(&[vec![0, 2], vec![-2, 0]], vec![0, 1]).unwrap();
        let p = MutationPath::flips(s, &[1]).unwrap();
        assert_eq!(enumerate_realizable_signs(&p).unwrap().len(), 2);
        let floor: SignSeq = "-0-".parse().unwrap();
        let got = enumerate_realizable_signs_above(&a2_path(), &floor, &Default::default()).unwrap();
        let got: Vec<String> = got.iter().map(|r| r.sign.to_string()).collect();
        assert_eq!(got, vec!["---"]);
        assert!(is_realizable(&a2_path(), &"-0+".parse().unwrap()).unwrap());
        assert!(!is_realizable(&a2_path(), &"-0-".parse().unwrap()).unwrap());
        assert!(!is_realizable(&a2_path(), &"+-+".parse().unwrap()).unwrap());
    }

    #[test]
    fn branch_limit() {
        let opts = EnumerateOptions {
            max_branches: Some(1),
        };
        let floor = SignSeq::new(vec![Sign::Zero; 3]);
        assert!(matches!(
            enumerate_realizable_signs_above(&a2_path(), &floor, &opts),
            Err(StabilityError::BranchLimit { limit: 1, position: 0 })
        ));
    }
}
