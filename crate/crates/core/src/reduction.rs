//! Reduction cones: compatible flips, reduced skeletons, hereditariness,
//! cluster reduction by freezing and the resulting block structure.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{Sign, TropScalar};
use crate::matrix::IntMatrix;
use crate::seed::{MutationPath, PathStep, Seed, SeedError};
use crate::stability::{
    enumerate_realizable_signs, enumerate_realizable_signs_above, spectral_radius,
    EnumerateOptions, IntPoly, StabilityError,
};
use crate::trop::{presentation_matrix_for_sign, transport, SignSeq, TropError, TropPoint, Transport};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("a cone needs at least one generator")]
    EmptyCone,
    #[error("generator has {found} coordinates, expected {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("sign sequence has length {found}, the path has {expected} flips")]
    Length { expected: usize, found: usize },
    #[error("step {step} flips index {index}, which is in the frozen set")]
    LeavesSubpattern { step: usize, index: usize },
    #[error("step {step} permutes the frozen set into the remaining indices")]
    MixesBlocks { step: usize },
    #[error(transparent)]
    Seed(#[from] SeedError),
    #[error(transparent)]
    Trop(#[from] TropError),
    #[error(transparent)]
    Stability(#[from] StabilityError),
}

/// A rational polyhedral cone given by generators in the initial chart of a
/// path.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cone<S> {
    generators: Vec<TropPoint<S>>,
}

impl<'de, S: TropScalar + Deserialize<'de>> Deserialize<'de> for Cone<S> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields, bound(deserialize = "T: Deserialize<'de>"))]
        struct Raw<T> {
            generators: Vec<Vec<T>>,
        }
        let raw = Raw::<S>::deserialize(d)?;
        Cone::new(raw.generators.into_iter().map(TropPoint::new).collect())
            .map_err(serde::de::Error::custom)
    }
}

impl<S: TropScalar> Cone<S> {
    pub fn new(generators: Vec<TropPoint<S>>) -> Result<Self, ReductionError> {
        let first = generators.first().ok_or(ReductionError::EmptyCone)?;
        let dim = first.dim();
        if let Some(g) = generators.iter().find(|g| g.dim() != dim) {
            return Err(ReductionError::Dimension {
                expected: dim,
                found: g.dim(),
            });
        }
        Ok(Cone { generators })
    }

    /// The cone `{0}`: every edge is compatible with it.
    pub fn zero(dim: usize) -> Self {
        Cone {
            generators: vec![TropPoint::constant(dim, 0)],
        }
    }

    pub fn generators(&self) -> &[TropPoint<S>] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.generators[0].dim()
    }
}

/// Transport of every generator along the path.
pub fn generator_traces<S: TropScalar>(
    path: &MutationPath,
    cone: &Cone<S>,
) -> Result<Vec<Transport<S>>, ReductionError> {
    let r = path.initial().rank();
    if cone.dim() != r {
        return Err(ReductionError::Dimension {
            expected: r,
            found: cone.dim(),
        });
    }
    cone.generators
        .par_iter()
        .map(|g| transport(path, g).map_err(ReductionError::from))
        .collect()
}

fn compatibility_from<S: TropScalar>(path: &MutationPath, traces: &[Transport<S>]) -> Vec<bool> {
    path.flip_positions()
        .into_iter()
        .map(|(i, k)| {
            let p = path.seed_at(i).position(k).expect("validated");
            traces
                .iter()
                .all(|t| t.intermediates[i][p].sign() == Sign::Zero)
        })
        .collect()
}

/// Entry `ν` is true when the flipped coordinate vanishes on every
/// generator just before the `ν`-th flip.
pub fn edge_compatibility<S: TropScalar>(
    path: &MutationPath,
    cone: &Cone<S>,
) -> Result<Vec<bool>, ReductionError> {
    let traces = generator_traces(path, cone)?;
    Ok(compatibility_from(path, &traces))
}

/// `(flip position ν, flipped index)` for every compatible flip, in order.
pub fn reduced_subsequence<S: TropScalar>(
    path: &MutationPath,
    cone: &Cone<S>,
) -> Result<Vec<(usize, usize)>, ReductionError> {
    let compat = edge_compatibility(path, cone)?;
    Ok(path
        .flip_positions()
        .into_iter()
        .zip(compat)
        .enumerate()
        .filter(|(_, (_, c))| *c)
        .map(|(nu, ((_, k), _))| (nu, k))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HereditaryReport {
    pub hereditary: bool,
    pub compatible: Vec<bool>,
    /// Compatible flip positions where the stable sign is zero.
    pub violations: Vec<usize>,
    /// Sign of the path at each generator.
    pub generator_signs: Vec<SignSeq>,
    /// False when generators lie in different sign classes; compatibility
    /// is still exact per generator.
    pub uniform_sign_history: bool,
}

pub fn hereditary_check<S: TropScalar>(
    path: &MutationPath,
    cone: &Cone<S>,
    eps_stab: &SignSeq,
) -> Result<HereditaryReport, ReductionError> {
    let h = path.horizontal_len();
    if eps_stab.len() != h {
        return Err(ReductionError::Length {
            expected: h,
            found: eps_stab.len(),
        });
    }
    let traces = generator_traces(path, cone)?;
    let compatible = compatibility_from(path, &traces);
    let violations: Vec<usize> = compatible
        .iter()
        .enumerate()
        .filter(|&(nu, &c)| c && eps_stab[nu] == Sign::Zero)
        .map(|(nu, _)| nu)
        .collect();
    let generator_signs: Vec<SignSeq> = traces
        .iter()
        .map(|t| crate::trop::sign_from_transport(path, t))
        .collect();
    let uniform_sign_history = generator_signs.windows(2).all(|w| w[0] == w[1]);
    Ok(HereditaryReport {
        hereditary: violations.is_empty(),
        compatible,
        violations,
        generator_signs,
        uniform_sign_history,
    })
}

/// Cluster reduction: the indices in `k` become frozen.
pub fn freeze(seed: &Seed, k: &[usize]) -> Result<Seed, ReductionError> {
    Ok(seed.freeze(k)?)
}

/// Restriction of a point in the chart of `seed` to the coordinates of the
/// indices `j` (all unfrozen), in increasing index order.
pub fn project_point<S: TropScalar>(
    seed: &Seed,
    w: &TropPoint<S>,
    j: &[usize],
) -> Result<TropPoint<S>, ReductionError> {
    if w.dim() != seed.rank() {
        return Err(ReductionError::Dimension {
            expected: seed.rank(),
            found: w.dim(),
        });
    }
    let mut idx = j.to_vec();
    idx.sort_unstable();
    idx.dedup();
    let slots = idx
        .iter()
        .map(|&i| {
            if i >= seed.n() {
                Err(SeedError::IndexOutOfRange(i))
            } else {
                seed.position(i).ok_or(SeedError::FrozenIndex(i))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(w.restrict(&slots))
}

/// The same steps on the seed with `k` frozen.
pub fn reduced_path(path: &MutationPath, k: &[usize]) -> Result<MutationPath, ReductionError> {
    Ok(path.with_initial(freeze(path.initial(), k)?)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockRow {
    pub sign: SignSeq,
    pub radius: f64,
    pub radius_restricted: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockReport {
    /// Coordinate slots of the remaining unfrozen indices J.
    pub j_slots: Vec<usize>,
    /// Coordinate slots of the frozen set K.
    pub k_slots: Vec<usize>,
    /// Whether the (J rows, K columns) block vanishes for every realizable
    /// sign.
    pub zero_block: bool,
    /// Whether the (K, K) block is a permutation matrix for every sign.
    pub permutation_block: bool,
    pub rows: Vec<BlockRow>,
    pub radii_agree: bool,
}

fn check_j_only(path: &MutationPath, k: &[usize]) -> Result<(), ReductionError> {
    for (step, s) in path.steps().iter().enumerate() {
        match s {
            PathStep::Flip(i) if k.contains(i) => {
                return Err(ReductionError::LeavesSubpattern { step, index: *i })
            }
            PathStep::Permute(p)
                if k.iter().any(|&i| !k.contains(&p.image(i))) => {
                    return Err(ReductionError::MixesBlocks { step });
                }
            _ => {}
        }
    }
    Ok(())
}

fn is_permutation_matrix(m: &IntMatrix) -> bool {
    use num_traits::{One, Zero};
    let n = m.rows();
    (0..n).all(|i| {
        let row = m.row(i);
        row.iter().filter(|v| v.is_one()).count() == 1
            && row.iter().filter(|v| !v.is_zero()).count() == 1
    }) && (0..n).all(|j| (0..n).filter(|&i| m[(i, j)].is_one()).count() == 1)
}

/// For a path that only flips outside `k` (and permutes `k` within itself),
/// checks that every realizable presentation matrix has a zero (J, K)
/// block and that its spectral radius equals the radius of the J block.
pub fn block_structure_check(
    path: &MutationPath,
    k: &[usize],
    tolerance: f64,
) -> Result<BlockReport, ReductionError> {
    let seed = path.initial();
    for &i in k {
        if i >= seed.n() {
            return Err(SeedError::IndexOutOfRange(i).into());
        }
        if !seed.is_unfrozen(i) {
            return Err(SeedError::FrozenIndex(i).into());
        }
    }
    check_j_only(path, k)?;
    let (j_slots, k_slots): (Vec<usize>, Vec<usize>) =
        (0..seed.rank()).partition(|&q| !k.contains(&seed.unfrozen()[q]));
    let signs = enumerate_realizable_signs(path)?;
    let rows = signs
        .par_iter()
        .map(|r| {
            let e = presentation_matrix_for_sign(path, &r.sign)?;
            let jk_zero = j_slots
                .iter()
                .all(|&a| k_slots.iter().all(|&b| num_traits::Zero::is_zero(&e[(a, b)])));
            let kk_perm = is_permutation_matrix(&e.select(&k_slots, &k_slots));
            let ej = e.select(&j_slots, &j_slots);
            let row = BlockRow {
                sign: r.sign.clone(),
                radius: spectral_radius(&e).value,
                radius_restricted: if j_slots.is_empty() {
                    1.0
                } else {
                    spectral_radius(&ej).value
                },
            };
            Ok((jk_zero, kk_perm, row))
        })
        .collect::<Result<Vec<_>, ReductionError>>()?;
    let zero_block = rows.iter().all(|r| r.0);
    let permutation_block = rows.iter().all(|r| r.1);
    let rows: Vec<BlockRow> = rows.into_iter().map(|r| r.2).collect();
    let radii_agree = rows
        .iter()
        .all(|r| (r.radius - r.radius_restricted).abs() <= tolerance * r.radius.max(1.0));
    Ok(BlockReport {
        j_slots,
        k_slots,
        zero_block,
        permutation_block,
        rows,
        radii_agree,
    })
}

/// Realizable signs of the path restricted to the sub-pattern where `k` is
/// frozen.
pub fn reduced_realizable_signs(
    path: &MutationPath,
    k: &[usize],
) -> Result<Vec<SignSeq>, ReductionError> {
    check_j_only(path, k)?;
    let reduced = reduced_path(path, k)?;
    let floor = SignSeq::new(vec![Sign::Zero; reduced.horizontal_len()]);
    Ok(
        enumerate_realizable_signs_above(&reduced, &floor, &EnumerateOptions::default())?
            .into_iter()
            .map(|r| r.sign)
            .collect(),
    )
}

/// Whether `∏ (x^c - 1)` over the given cycle lengths divides `p`.
pub fn permutation_factor_check(p: &IntPoly, cycles: &[usize]) -> bool {
    let factors: Vec<IntPoly> = cycles.iter().map(|&c| IntPoly::x_pow_minus_one(c)).collect();
    p.divisible_by(&IntPoly::product(&factors))
}
