//! Tropical X-points, the signed piecewise-linear mutation map, transport
//! along paths, sign sequences and presentation matrices.

use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{int_pos, Sign, TropScalar};
use crate::matrix::{int_apply, IntMatrix};
use crate::seed::{MutationPath, PathStep, Permutation, Seed, SeedError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TropError {
    #[error("point has {found} coordinates, the seed has {expected} unfrozen indices")]
    Dimension { expected: usize, found: usize },
    #[error("sign sequence has length {found}, the path has {expected} flips")]
    Length { expected: usize, found: usize },
    #[error("sign is zero at flip positions {0:?}; choose a strict completion")]
    NonStrictSign(Vec<usize>),
    #[error("edge matrices need a strict sign")]
    ZeroSign,
    #[error("cannot parse sign sequence {0:?}")]
    ParseSign(String),
    #[error(transparent)]
    Seed(#[from] SeedError),
}

/// A tropical point in the coordinates of a seed, one entry per unfrozen
/// index (in increasing index order).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TropPoint<S> {
    coords: Vec<S>,
}

impl<S: TropScalar> TropPoint<S> {
    pub fn new(coords: Vec<S>) -> Self {
        TropPoint { coords }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        TropPoint::new(coords.iter().map(|&v| S::from_i64(v)).collect())
    }

    pub fn constant(dim: usize, v: i64) -> Self {
        TropPoint::new(vec![S::from_i64(v); dim])
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<S> {
        self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn scale(&self, c: &S) -> Self {
        TropPoint::new(self.coords.iter().map(|v| c.clone() * v.clone()).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        TropPoint::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|v| v.is_zero())
    }

    pub fn signs(&self) -> Vec<Sign> {
        self.coords.iter().map(|v| v.sign()).collect()
    }

    /// Largest absolute coordinate.
    pub fn max_abs(&self) -> S {
        self.coords
            .iter()
            .map(|v| v.abs_value())
            .fold(S::zero(), |m, v| {
                if v.cmp_value(&m).is_gt() {
                    v
                } else {
                    m
                }
            })
    }

    /// The point divided by its largest absolute coordinate; the zero point
    /// is returned unchanged.
    pub fn normalized(&self) -> Self {
        let m = self.max_abs();
        if m.is_zero() {
            return self.clone();
        }
        TropPoint::new(self.coords.iter().map(|v| v.clone() / m.clone()).collect())
    }

    /// Coordinates at the given slots.
    pub fn restrict(&self, slots: &[usize]) -> Self {
        TropPoint::new(slots.iter().map(|&i| self.coords[i].clone()).collect())
    }
}

impl<S> Index<usize> for TropPoint<S> {
    type Output = S;
    fn index(&self, i: usize) -> &S {
        &self.coords[i]
    }
}

impl<S: fmt::Display> fmt::Display for TropPoint<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A sequence of signs, one per flip of a path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignSeq {
    entries: Vec<Sign>,
}

impl SignSeq {
    pub fn new(entries: Vec<Sign>) -> SignSeq {
        SignSeq { entries }
    }

    pub fn entries(&self) -> &[Sign] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_strict(&self) -> bool {
        self.entries.iter().all(|s| s.is_strict())
    }

    pub fn is_all_zero(&self) -> bool {
        self.entries.iter().all(|s| *s == Sign::Zero)
    }

    pub fn zero_positions(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.entries[i] == Sign::Zero)
            .collect()
    }

    /// `self ≤ other`: `self` is `other` with some strict entries replaced
    /// by zero. Sequences of different lengths are incomparable.
    pub fn leq(&self, other: &SignSeq) -> bool {
        self.len() == other.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| *a == Sign::Zero || a == b)
    }

    pub fn geq(&self, other: &SignSeq) -> bool {
        other.leq(self)
    }

    /// All strict sequences `ε ≥ self`, in lexicographic order with `+`
    /// before `-` at each zero.
    pub fn completions(&self) -> Vec<SignSeq> {
        let zeros = self.zero_positions();
        let mut out = Vec::with_capacity(1 << zeros.len());
        for mask in 0..(1usize << zeros.len()) {
            let mut e = self.entries.clone();
            for (bit, &pos) in zeros.iter().enumerate() {
                e[pos] = if mask >> (zeros.len() - 1 - bit) & 1 == 0 {
                    Sign::Plus
                } else {
                    Sign::Minus
                };
            }
            out.push(SignSeq::new(e));
        }
        out
    }
}

impl Index<usize> for SignSeq {
    type Output = Sign;
    fn index(&self, i: usize) -> &Sign {
        &self.entries[i]
    }
}

impl fmt::Display for SignSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.entries {
            write!(f, "{}", s.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for SignSeq {
    type Err = TropError;

    /// Accepts `+`, `-`, `−` and `0`; commas, spaces and enclosing
    /// parentheses or brackets are ignored.
    fn from_str(text: &str) -> Result<SignSeq, TropError> {
        let mut entries = Vec::new();
        for c in text.chars() {
            if c.is_whitespace() || matches!(c, ',' | '(' | ')' | '[' | ']') {
                continue;
            }
            entries.push(Sign::from_char(c).ok_or_else(|| TropError::ParseSign(text.into()))?);
        }
        Ok(SignSeq::new(entries))
    }
}

impl Serialize for SignSeq {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> Result<Ser::Ok, Ser::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SignSeq {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<SignSeq, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

fn check_dim<S>(seed: &Seed, w: &TropPoint<S>) -> Result<(), TropError> {
    if w.coords.len() != seed.rank() {
        return Err(TropError::Dimension {
            expected: seed.rank(),
            found: w.coords.len(),
        });
    }
    Ok(())
}

/// Tropical X-mutation at index `k`:
/// `x'_k = -x_k`, `x'_i = x_i + [sgn(x_k) b_ik]_+ x_k`.
pub fn trop_mutate<S: TropScalar>(
    seed: &Seed,
    k: usize,
    w: &TropPoint<S>,
) -> Result<TropPoint<S>, TropError> {
    check_dim(seed, w)?;
    let p = seed.position(k).ok_or(if k >= seed.n() {
        SeedError::IndexOutOfRange(k)
    } else {
        SeedError::FrozenIndex(k)
    })?;
    let xk = w.coords[p].clone();
    let e = BigInt::from(xk.sign().as_i8());
    let coords = seed
        .unfrozen()
        .iter()
        .enumerate()
        .map(|(q, &i)| {
            if q == p {
                -xk.clone()
            } else {
                let f = int_pos(&(&e * seed.entry(i, k)));
                if f.is_zero() {
                    w.coords[q].clone()
                } else {
                    w.coords[q].clone() + xk.scale_int(&f)
                }
            }
        })
        .collect();
    Ok(TropPoint::new(coords))
}

/// Relabeling `x'_{σ(i)} = x_i`.
pub fn trop_permute<S: TropScalar>(
    seed: &Seed,
    sigma: &Permutation,
    w: &TropPoint<S>,
) -> Result<TropPoint<S>, TropError> {
    check_dim(seed, w)?;
    let slots = seed.slot_permutation(sigma);
    let mut coords = w.coords.clone();
    for (q, &to) in slots.iter().enumerate() {
        coords[to] = w.coords[q].clone();
    }
    Ok(TropPoint::new(coords))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transport<S> {
    pub final_point: TropPoint<S>,
    /// The point before each step.
    pub intermediates: Vec<TropPoint<S>>,
}

pub fn transport<S: TropScalar>(
    path: &MutationPath,
    w: &TropPoint<S>,
) -> Result<Transport<S>, TropError> {
    check_dim(path.initial(), w)?;
    let mut cur = w.clone();
    let mut intermediates = Vec::with_capacity(path.steps().len());
    for (i, step) in path.steps().iter().enumerate() {
        let seed = path.seed_at(i);
        let next = match step {
            PathStep::Flip(k) => trop_mutate(seed, *k, &cur)?,
            PathStep::Permute(s) => trop_permute(seed, s, &cur)?,
        };
        intermediates.push(std::mem::replace(&mut cur, next));
    }
    Ok(Transport {
        final_point: cur,
        intermediates,
    })
}

/// Final point only.
pub fn transport_point<S: TropScalar>(
    path: &MutationPath,
    w: &TropPoint<S>,
) -> Result<TropPoint<S>, TropError> {
    transport(path, w).map(|t| t.final_point)
}

/// Sign of the mutated coordinate just before each flip.
pub fn sign_of_path<S: TropScalar>(
    path: &MutationPath,
    w: &TropPoint<S>,
) -> Result<SignSeq, TropError> {
    let t = transport(path, w)?;
    Ok(sign_from_transport(path, &t))
}

pub(crate) fn sign_from_transport<S: TropScalar>(path: &MutationPath, t: &Transport<S>) -> SignSeq {
    SignSeq::new(
        path.flip_positions()
            .into_iter()
            .map(|(i, k)| {
                let p = path.seed_at(i).position(k).expect("validated");
                t.intermediates[i].coords[p].sign()
            })
            .collect(),
    )
}

/// Linear branch of the mutation at `k` on the half-space `sgn(x_k) = ε`.
pub fn edge_matrix(seed: &Seed, k: usize, eps: Sign) -> Result<IntMatrix, TropError> {
    if eps == Sign::Zero {
        return Err(TropError::ZeroSign);
    }
    let p = seed.position(k).ok_or(if k >= seed.n() {
        SeedError::IndexOutOfRange(k)
    } else {
        SeedError::FrozenIndex(k)
    })?;
    let e = BigInt::from(eps.as_i8());
    let uf = seed.unfrozen();
    let mut m = IntMatrix::identity(uf.len());
    m[(p, p)] = BigInt::from(-1);
    for (q, &i) in uf.iter().enumerate() {
        if q != p {
            m[(q, p)] = int_pos(&(&e * seed.entry(i, k)));
        }
    }
    Ok(m)
}

/// Matrix of the relabeling step on coordinate slots.
pub fn permutation_step_matrix(seed: &Seed, sigma: &Permutation) -> IntMatrix {
    IntMatrix::permutation(&seed.slot_permutation(sigma))
}

/// The matrices of the individual steps for a given sign. A zero entry
/// uses the `+` branch; both branches agree on the wall.
pub(crate) fn step_matrices(path: &MutationPath, eps: &SignSeq) -> Result<Vec<IntMatrix>, TropError> {
    let h = path.horizontal_len();
    if eps.len() != h {
        return Err(TropError::Length {
            expected: h,
            found: eps.len(),
        });
    }
    let mut out = Vec::with_capacity(path.steps().len());
    let mut nu = 0;
    for (i, step) in path.steps().iter().enumerate() {
        let seed = path.seed_at(i);
        out.push(match step {
            PathStep::Flip(k) => {
                let s = if eps[nu] == Sign::Zero { Sign::Plus } else { eps[nu] };
                nu += 1;
                edge_matrix(seed, *k, s)?
            }
            PathStep::Permute(s) => permutation_step_matrix(seed, s),
        });
    }
    Ok(out)
}

/// `E_γ^ε`: the product of the step matrices, last step leftmost.
pub fn presentation_matrix_for_sign(
    path: &MutationPath,
    eps: &SignSeq,
) -> Result<IntMatrix, TropError> {
    let zeros = eps.zero_positions();
    if !zeros.is_empty() {
        return Err(TropError::NonStrictSign(zeros));
    }
    let mats = step_matrices(path, eps)?;
    let r = path.initial().rank();
    Ok(mats
        .iter()
        .fold(IntMatrix::identity(r), |acc, m| m * &acc))
}

/// Presentation matrix at a point whose sign sequence is strict.
pub fn presentation_matrix_at_point<S: TropScalar>(
    path: &MutationPath,
    w: &TropPoint<S>,
) -> Result<IntMatrix, TropError> {
    let eps = sign_of_path(path, w)?;
    presentation_matrix_for_sign(path, &eps)
}

/// Apply an integer matrix to a point.
pub fn apply_matrix<S: TropScalar>(m: &IntMatrix, w: &TropPoint<S>) -> Result<TropPoint<S>, TropError> {
    int_apply(m, w.coords())
        .map(TropPoint::new)
        .map_err(|_| TropError::Dimension {
            expected: m.cols(),
            found: w.dim(),
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rational;

    type P = TropPoint<Rational>;

    fn a2() -> Seed {
        Seed::from_i64(&[vec![0, 1], vec![-1, 0]], vec![0, 1]).unwrap()
    }

    fn mat(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows).unwrap()
    }

    fn kron(l: i64) -> MutationPath {
        let s = Seed::from_i64(&[vec![0, -l], vec![l, 0]], vec![0, 1]).unwrap();
        MutationPath::new(
            s,
            vec![
                PathStep::Flip(0),
                PathStep::Permute(Permutation::new(vec![1, 0]).unwrap()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn mutate_examples() {
        assert_eq!(trop_mutate(&a2(), 0, &P::from_i64(&[2, 3])).unwrap(), P::from_i64(&[-2, 3]));
        assert_eq!(trop_mutate(&a2(), 0, &P::from_i64(&[-2, 3])).unwrap(), P::from_i64(&[2, 1]));
        assert_eq!(trop_mutate(&a2(), 0, &P::from_i64(&[0, 3])).unwrap(), P::from_i64(&[0, 3]));
        assert!(matches!(
            trop_mutate(&a2(), 0, &P::from_i64(&[1])),
            Err(TropError::Dimension { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn a2_transport_and_signs() {
        let path = MutationPath::flips(a2(), &[0, 1, 0]).unwrap();
        let t = transport(&path, &P::from_i64(&[1, 1])).unwrap();
        assert_eq!(
            t.intermediates,
            vec![P::from_i64(&[1, 1]), P::from_i64(&[-1, 1]), P::from_i64(&[-1, -1])]
        );
        assert_eq!(t.final_point, P::from_i64(&[1, -2]));
        let cases = [
            ([1, 1], "++-"),
            ([-1, 2], "-++"),
            ([-2, 1], "--+"),
            ([-1, -1], "---"),
            ([2, -1], "+--"),
        ];
        for (w, s) in cases {
            assert_eq!(sign_of_path(&path, &P::from_i64(&w)).unwrap().to_string(), s);
        }
        let empty = MutationPath::flips(a2(), &[]).unwrap();
        assert_eq!(transport_point(&empty, &P::from_i64(&[5, 1])).unwrap(), P::from_i64(&[5, 1]));
    }

    #[test]
    fn edge_matrices() {
        let s = Seed::from_i64(&[vec![0, -3], vec![3, 0]], vec![0, 1]).unwrap();
        assert_eq!(edge_matrix(&s, 0, Sign::Plus).unwrap(), mat(&[vec![-1, 0], vec![3, 1]]));
        assert_eq!(edge_matrix(&s, 0, Sign::Minus).unwrap(), mat(&[vec![-1, 0], vec![0, 1]]));
        assert_eq!(edge_matrix(&s, 0, Sign::Zero), Err(TropError::ZeroSign));
    }

    #[test]
    fn kronecker_presentation() {
        let p = kron(3);
        let plus: SignSeq = "+".parse().unwrap();
        let minus: SignSeq = "-".parse().unwrap();
        assert_eq!(
            presentation_matrix_for_sign(&p, &plus).unwrap(),
            mat(&[vec![3, 1], vec![-1, 0]])
        );
        assert_eq!(
            presentation_matrix_for_sign(&p, &minus).unwrap(),
            mat(&[vec![0, 1], vec![-1, 0]])
        );
        assert_eq!(
            transport_point(&p, &P::from_i64(&[1, 0])).unwrap(),
            P::from_i64(&[3, -1])
        );
        let zero: SignSeq = "0".parse().unwrap();
        assert_eq!(
            presentation_matrix_for_sign(&p, &zero),
            Err(TropError::NonStrictSign(vec![0]))
        );
        assert!(matches!(
            presentation_matrix_at_point(&p, &P::from_i64(&[0, 1])),
            Err(TropError::NonStrictSign(_))
        ));
    }

    #[test]
    fn presentation_matches_transport() {
        let path = MutationPath::flips(a2(), &[0, 1, 0]).unwrap();
        let w = P::from_i64(&[1, 1]);
        let m = presentation_matrix_at_point(&path, &w).unwrap();
        assert_eq!(apply_matrix(&m, &w).unwrap(), transport_point(&path, &w).unwrap());
    }

    #[test]
    fn sign_order_and_parsing() {
        let a: SignSeq = "(+, -, +)".parse().unwrap();
        let b: SignSeq = "+0+".parse().unwrap();
        assert!(a.geq(&b));
        assert!(!b.geq(&a));
        assert!(a.geq(&a));
        let c: SignSeq = "+-".parse().unwrap();
        let d: SignSeq = "-0".parse().unwrap();
        assert!(!c.geq(&d));
        assert!(!a.geq(&c));
        assert_eq!("+−0".parse::<SignSeq>().unwrap().to_string(), "+-0");
        assert!("+x".parse::<SignSeq>().is_err());
        let comps: Vec<String> = "0+0".parse::<SignSeq>().unwrap().completions().iter().map(|s| s.to_string()).collect();
        assert_eq!(comps, vec!["+++", "++-", "-++", "-+-"]);
    }

    #[test]
    fn normalization() {
        let w = P::from_i64(&[8, -3]);
        let n = w.normalized();
        assert_eq!(n, P::new(vec![Rational::from_i64(1), Rational::new((-3).into(), 8.into())]));
        assert_eq!(P::from_i64(&[0, 0]).normalized(), P::from_i64(&[0, 0]));
        assert_eq!(P::from_i64(&[-4, 2]).normalized(), P::new(vec![Rational::from_i64(-1), Rational::new(1.into(), 2.into())]));
    }
}
